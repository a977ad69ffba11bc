#include "mmt/thresholds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mmt/errors.hpp"

namespace mmt {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::WellPosed: return "WellPosed";
    case Classification::IllPosedC3: return "IllPosedC3";
    default: return "Open";
  }
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::B1_four_thirds: return "B1_four_thirds";
    case Branch::B2_linear: return "B2_linear";
    case Branch::B3_two_beta: return "B3_two_beta";
    default: return "None";
  }
}

double critical_index(double alpha, double beta) { return 2.0 * beta + 0.5 * (1.0 - alpha); }

double branch_formula(Branch b, double alpha, double beta, double delta) {
  switch (b) {
    case Branch::B1_four_thirds: return 4.0 / 3.0 * beta + (2.0 - alpha) / 6.0;
    case Branch::B2_linear: return beta + 0.625 - 0.5 * alpha + delta;
    case Branch::B3_two_beta: return 2.0 * beta + (2.0 - alpha) / 4.0;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw OutOfRange("alpha", "must lie in (1, 2]");
}

bool admissible_beta(double alpha, double beta) {
  return beta > -0.25 && beta < 0.5 * (alpha - 1.0);
}

Branch branch_of(double alpha, double beta) {
  if (beta <= 0.875 - alpha) return Branch::B1_four_thirds;
  if (beta <= 0.125 - 0.25 * alpha) return Branch::B2_linear;
  return Branch::B3_two_beta;
}

}  // namespace

ThresholdValue lwp_threshold(double alpha, double beta, double delta) {
  check_alpha(alpha);
  if (!admissible_beta(alpha, beta)) throw OutOfRange("beta", "must lie in (-1/4, (alpha-1)/2)");
  if (!(delta >= 0.0)) throw OutOfRange("delta", "must be nonnegative");
  const Branch b = branch_of(alpha, beta);
  return {branch_formula(b, alpha, beta, delta), b};
}

bool illposed_predicate(double alpha, double beta, double s) {
  if (!(alpha > 1.0)) throw OutOfRange("alpha", "must satisfy alpha > 1");
  return s < branch_formula(Branch::B3_two_beta, alpha, beta) || beta < -0.25 ||
         beta > 0.5 * (alpha - 1.0);
}

RegionCell classify(double alpha, double beta, double s, double delta) {
  check_alpha(alpha);
  RegionCell cell;
  cell.beta = beta;
  cell.s = s;
  cell.threshold_value = std::numeric_limits<double>::quiet_NaN();
  cell.binding_value = std::numeric_limits<double>::quiet_NaN();
  const bool in_range = admissible_beta(alpha, beta);
  if (in_range) {
    const ThresholdValue th = lwp_threshold(alpha, beta, delta);
    cell.branch = th.branch;
    cell.threshold_value = th.value;
    // Side condition s >= 2 beta + (2 - alpha)/4 on every branch.
    cell.binding_value = std::max(th.value, branch_formula(Branch::B3_two_beta, alpha, beta));
  }
  if (illposed_predicate(alpha, beta, s)) {
    cell.classification = Classification::IllPosedC3;
  } else if (in_range) {
    const bool strict = cell.branch == Branch::B2_linear && delta == 0.0;
    const bool above = strict ? s > cell.threshold_value : s >= cell.threshold_value;
    const bool side = s >= branch_formula(Branch::B3_two_beta, alpha, beta);
    cell.classification = (above && side) ? Classification::WellPosed : Classification::Open;
  } else {
    cell.classification = Classification::Open;
  }
  return cell;
}

std::vector<RegionCell> region_chart(double alpha, Range beta_range, Range s_range,
                                     std::size_t resolution, double delta) {
  check_alpha(alpha);
  if (!(beta_range.hi > beta_range.lo)) throw InvalidArgument("beta_range", "must be nonempty");
  if (!(s_range.hi > s_range.lo)) throw InvalidArgument("s_range", "must be nonempty");
  if (resolution < 2) throw InvalidArgument("resolution", "must be at least 2");
  std::vector<RegionCell> out;
  out.reserve(resolution * resolution);
  const double last = static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double beta = beta_range.lo + (beta_range.hi - beta_range.lo) * static_cast<double>(i) / last;
    for (std::size_t j = 0; j < resolution; ++j) {
      const double s = s_range.lo + (s_range.hi - s_range.lo) * static_cast<double>(j) / last;
      out.push_back(classify(alpha, beta, s, delta));
    }
  }
  return out;
}

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string region_chart_csv(const std::vector<RegionCell>& cells) {
  std::string out = "beta,s,classification,branch,threshold\n";
  for (const auto& c : cells) {
    out += fmt17(c.beta) + ',' + fmt17(c.s) + ',' + to_string(c.classification) + ',' +
           to_string(c.branch) + ',' + fmt17(c.threshold_value) + '\n';
  }
  return out;
}

ScalingLaw scaling_law(double lambda, const ModelParams& p) {
  const double data = 0.5 * (4.0 * p.beta - p.alpha);
  return {lambda, data, data + 0.5 - p.s};
}

SpectralField rescale_data(const SpectralField& u, double lambda, const ModelParams& params) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw IncompatibleDilation("lambda", "must be positive");
  int e = 0;
  const double mant = std::frexp(lambda, &e);
  if (mant != 0.5)
    throw IncompatibleDilation("lambda", "must be an integer power of two so lattices nest");
  // u(x/lambda) on a box of length lambda*L keeps the coefficient of each
  // lattice index; only the frequencies shrink by lambda.
  const GridSpec g(u.grid().num_modes(), lambda * u.grid().box_length());
  const double amp = std::pow(lambda, scaling_law(lambda, params).data_exponent);
  std::vector<cplx> m = u.modes();
  for (auto& c : m) c *= amp;
  return SpectralField(g, std::move(m));
}

double dnls_threshold(double alpha, double beta) {
  if (!(alpha > 1.0)) throw OutOfRange("alpha", "must satisfy alpha > 1");
  if (!(beta >= 0.0 && beta < 0.5 * (alpha - 1.0)))
    throw OutOfRange("beta", "must lie in [0, (alpha-1)/2)");
  return beta + (2.0 - alpha) / 4.0;
}

}  // namespace mmt
