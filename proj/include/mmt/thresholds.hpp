#pragma once

#include <string>
#include <vector>

#include "mmt/spectral_core.hpp"

namespace mmt {

enum class Classification { WellPosed, IllPosedC3, Open };
enum class Branch { B1_four_thirds, B2_linear, B3_two_beta, None };

const char* to_string(Classification c);
const char* to_string(Branch b);

struct RegionCell {
  double beta = 0.0;
  double s = 0.0;
  Classification classification = Classification::Open;
  Branch branch = Branch::None;
  // Branch value of s_{beta,alpha}; NaN when beta is outside the admissible range.
  double threshold_value = 0.0;
  // Largest lower bound on s that WellPosed needs at this beta.
  double binding_value = 0.0;
};

struct ThresholdValue {
  double value;
  Branch branch;
};

struct ScalingLaw {
  double lambda;
  double data_exponent;  // (4 beta - alpha)/2
  double norm_exponent;  // (4 beta + 1 - alpha)/2 - s
};

double critical_index(double alpha, double beta);

// Value of one branch formula, regardless of whether beta lies on it.
double branch_formula(Branch b, double alpha, double beta, double delta = 0.0);

ThresholdValue lwp_threshold(double alpha, double beta, double delta = 0.0);
bool illposed_predicate(double alpha, double beta, double s);
RegionCell classify(double alpha, double beta, double s, double delta = 0.0);

struct Range {
  double lo;
  double hi;
};

std::vector<RegionCell> region_chart(double alpha, Range beta_range, Range s_range,
                                     std::size_t resolution, double delta = 0.0);
std::string region_chart_csv(const std::vector<RegionCell>& cells);

ScalingLaw scaling_law(double lambda, const ModelParams& params);
SpectralField rescale_data(const SpectralField& u, double lambda, const ModelParams& params);

double dnls_threshold(double alpha, double beta);

// Formats with 17 significant digits.
std::string fmt17(double v);

}  // namespace mmt
