#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmt/picard_probe.hpp"

namespace mmt {

// Dyadic sizes for h(xi) = |xi1|^a - |xi2|^a + |xi3|^a on xi1 + xi2 + xi3 = 0,
// with |xi_j| in [N_j, 2 N_j).
struct DyadicConfig {
  double N1 = 1, N2 = 1, N3 = 1;
  std::optional<double> N4;
  std::vector<double> L_levels;
  double alpha = 2.0;

  void validate() const;
};

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct HRangeReport {
  double min_lower_ratio;  // min |h| / (N_max^{a-1} N_min)
  double max_upper_ratio;  // max |h| / N_max^a
  double c_lower;
  double c_upper;
  MeasureEstimate feasible_measure;  // area of the sampled annulus set, hit-counting
  std::size_t accepted;
  std::size_t draws;
  bool passed;
};

// Frozen constants for h_range_check.
inline constexpr double kHRangeLower = 0.25;
inline constexpr double kHRangeUpper = 8.0;

HRangeReport h_range_check(const DyadicConfig& cfg, std::size_t samples, std::uint64_t seed);

// Length of {x in B : |s_x |x|^a + s_c |c - x|^a - target| <= L}, exact up to bisection.
double fiber_measure(Interval B, int s_x, int s_c, double c, double alpha, double target, double L);

// Planar measure of {(x, y) in A x B : |s1 |x|^a + s2 |y|^a + s3 |xi - x - y|^a - tau| <= L},
// optionally with xi - x - y restricted to C. Rows run along the variable in which the phase is
// flatter at the box centre (shorter side on ties), resolution rows in total, and each row is
// solved exactly; std_error is |v_R - v_{R/2}|.
MeasureEstimate level_set_measure(Interval A, Interval B, std::array<int, 3> signs, double xi, double tau,
                                  double L, double alpha, std::size_t resolution,
                                  std::optional<Interval> C = std::nullopt);

// Ratios are compared against 1 with this relative allowance for rounding; scale-free
// cases produce the same ratio at every N up to last-bit noise.
inline constexpr double kBenchRoundoff = 1e-8;

struct BenchRow {
  double N1, N2, N3, N4;  // dyadic labels; N4 = 0 for bilinear cases
  double L;
  double measured;
  double bound;
  double ratio;
  bool monotone_in_L;
};

struct BenchReport {
  std::string case_tag;
  double alpha;
  std::vector<BenchRow> rows;
  double calibration_constant;
  double worst_ratio;
  std::uint64_t seed;
  bool monotone;
  bool passed;
};

const std::vector<std::string>& case_tags();
std::string case_description(const std::string& tag);
// Default N_max sweep for a tag (six dyadic values).
std::vector<double> default_sweep(const std::string& tag);

// L_sweep empty: per-case default; one entry: broadcast; else paired with N_sweep.
BenchReport counting_bound_check(const std::string& case_tag, double alpha, const std::vector<double>& N_sweep,
                                 const std::vector<double>& L_sweep, std::size_t resolution,
                                 std::uint64_t seed);

std::string bench_csv(const std::vector<BenchReport>& reports);
nlohmann::json bench_summary(const std::vector<BenchReport>& reports);

}  // namespace mmt
