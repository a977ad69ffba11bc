#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmt/spectral_core.hpp"

namespace mmt {

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// u0_hat = amplitude * 1_interval
struct BoxDatum {
  Interval interval;
  cplx amplitude;
};

enum class Family { HHH, HLL, LLL };
const char* to_string(Family f);
Family family_from_string(const std::string& s);

struct Counterexample {
  Family family;
  double N;
  double lambda;
  std::array<BoxDatum, 3> boxes;  // slots 1, 2 (conjugated), 3
  Interval window;
};

double omega(double xi, double alpha);
// |a|^alpha - |b|^alpha without cancellation when |a| ~ |b|.
double power_difference(double a, double b, double alpha);
// omega(xi1 - xi2 + xi3) - omega(xi1) + omega(xi2) - omega(xi3)
double resonance(double xi1, double xi2, double xi3, double alpha);
// |xi1|^a - |xi2|^a + |xi3|^a - |xi4|^a with xi4 = -(xi1 + xi2 + xi3)
double four_wave_resonance(double xi1, double xi2, double xi3, double alpha);

struct ResonanceBoundReport {
  double alpha;
  double min_ratio;
  double max_ratio;
  std::size_t used;
  std::size_t excluded;
  std::optional<double> constant;  // frozen c_alpha, if one exists for this alpha
  bool passed;
};

// Frozen Monte-Carlo lower constants for |h~| / (|xi1+xi2||xi2+xi3||xi_max|^{alpha-2}).
std::optional<double> calibrated_resonance_constant(double alpha);
ResonanceBoundReport resonance_lower_bound_check(std::size_t samples, double alpha, std::uint64_t seed);

// (exp(i t Omega) - 1) / Omega, continuous at Omega = 0.
cplx oscillatory_factor(double Omega, double t);

Counterexample build_counterexample(Family f, double N, double eps, const ModelParams& params);

struct SupportCombination {
  std::array<int, 3> slots;  // (a, b, c), 1-based
  Interval support;          // I_a - I_b + I_c
  bool overlaps_window;
  bool designated;
};
std::vector<SupportCombination> interaction_supports(const Counterexample& ce);
bool support_disjointness_check(Family f, double N, double eps, const ModelParams& params);

struct IterateSample {
  double xi;
  cplx value;
};

struct IterateOutput {
  std::vector<IterateSample> samples;
  double min_abs_omega;
  double max_abs_omega;
  double active_fraction;
};

IterateOutput third_picard_iterate(const std::array<BoxDatum, 3>& boxes, Interval window, double t,
                                   const ModelParams& params, std::size_t Q, std::size_t M);

double window_hs_norm(const std::vector<IterateSample>& samples, double s);

// Continuum H^s norm of a single box datum.
double box_hs_norm(const BoxDatum& b, double s);

struct ProbeSpec {
  Family family = Family::HHH;
  ModelParams params;
  double t = 0.1;
  double eps = 0.01;
  std::vector<double> N_list;
  std::size_t quad_points = 128;
  std::size_t out_points = 64;

  void validate() const;
};

struct ProbeRow {
  double N;
  double hs_norm;
  double min_abs_omega;
  double max_abs_omega;
};

struct ProbeResult {
  ProbeSpec spec;
  std::vector<ProbeRow> rows;
  double fitted_slope = 0.0;
  double fit_stderr = 0.0;
  double predicted_slope = 0.0;
};

double predicted_slope(Family f, const ModelParams& params, double eps);

struct LineFit {
  double slope;
  double intercept;
  double slope_stderr;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

ProbeResult run_probe(const ProbeSpec& spec);

std::string probe_csv(const ProbeResult& r);
nlohmann::json probe_footer(const ProbeResult& r);

}  // namespace mmt
