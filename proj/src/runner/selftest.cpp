#include <cmath>
#include <random>

#include "mmt/estimate_bench.hpp"
#include "mmt/mmt_dynamics.hpp"
#include "mmt/picard_probe.hpp"
#include "mmt/runner.hpp"
#include "mmt/thresholds.hpp"

namespace mmt::runner {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }

  template <class F>
  void check(const std::string& what, F&& f) {
    ++r_.total;
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception& e) {
      r_.failures.push_back(what + " (threw: " + e.what() + ")");
      return;
    }
    if (ok) ++r_.passed;
    else r_.failures.push_back(what);
  }

  SuiteResult result() const { return r_; }

 private:
  SuiteResult r_;
};

template <class E, class F>
bool throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  }
  return false;
}

SuiteResult spectral_suite() {
  Suite s("spectral_core");
  const GridSpec g(64, 2.0 * M_PI);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  SpectralField u(g);
  for (std::size_t k = 1; k < 20; ++k) u.mode(static_cast<long>(k)) = cplx(gauss(rng), gauss(rng));

  s.check("fft round trip", [&] {
    const auto back = SpectralField::from_samples(g, u.samples());
    double err = 0.0;
    for (std::size_t i = 0; i < 64; ++i) err = std::max(err, std::abs(back.modes()[i] - u.modes()[i]));
    return err < 1e-13;
  });
  s.check("gamma = 0 multiplier is the identity", [&] {
    const auto v = fractional_derivative(u, 0.0);
    for (std::size_t i = 0; i < 64; ++i)
      if (v.modes()[i] != u.modes()[i]) return false;
    return true;
  });
  s.check("zero mode of |xi|^gamma is 0", [] { return abs_power(0.0, 1.5) == 0.0 && abs_power(0.0, -0.5) == 0.0; });
  s.check("sobolev norm of a single mode", [&] {
    SpectralField w(g);
    w.mode(4) = 0.5;
    const double expect = std::sqrt(2.0 * M_PI) * 0.5 * std::pow(17.0, 0.5);
    return std::abs(sobolev_norm(w, 1.0) - expect) < 1e-12 * expect;
  });
  s.check("non-dyadic grid rejected", [] { return throws<InvalidArgument>([] { GridSpec(48, 1.0); }); });
  return s.result();
}

SuiteResult dynamics_suite(bool flip) {
  Suite s("mmt_dynamics");
  const GridSpec g(32, 2.0 * M_PI);
  auto plane_wave_error = [&](double alpha, double beta) {
    ModelParams p{alpha, beta, 0.0, NonlinearitySign::AsWritten};
    IntegratorConfig c;
    c.dt = 1e-3;
    c.t_end = 0.1;
    c.dispersion_sign = flip ? -1 : 1;
    SpectralField u(g);
    const double A = 0.5, k = 4.0;
    u.mode(4) = A;
    const Stepper st(g, p, c);
    const std::size_t n = c.num_steps();
    for (std::size_t i = 0; i < n; ++i) u = st.step(u);
    const double t = c.dt * static_cast<double>(n);
    const double w = std::pow(k, alpha) - std::pow(k, 4.0 * beta) * A * A;
    double err = 0.0;
    const auto v = u.samples();
    for (std::size_t j = 0; j < 32; ++j) err = std::max(err, std::abs(v[j] - A * std::polar(1.0, k * g.x(j) + w * t)));
    return err;
  };
  s.check("plane wave exact, alpha = 2, beta = 0", [&] { return plane_wave_error(2.0, 0.0) <= 1e-8; });
  s.check("plane wave exact, alpha = 1.5, beta = 0.25", [&] { return plane_wave_error(1.5, 0.25) <= 1e-8; });
  s.check("linear step equals the propagator", [&] {
    SpectralField u(g);
    u.mode(3) = cplx(0.2, 0.1);
    u.mode(-5) = 0.3;
    ModelParams p{1.5, 0.0, 0.0, NonlinearitySign::AsWritten};
    IntegratorConfig c;
    c.nonlinear = false;
    c.dispersion_sign = flip ? -1 : 1;
    const auto a = step(u, p, c), b = linear_propagator(u, c.dt, 1.5);
    double err = 0.0;
    for (std::size_t i = 0; i < 32; ++i) err = std::max(err, std::abs(a.modes()[i] - b.modes()[i]));
    return err < 1e-14;
  });
  s.check("mass of a plane wave", [&] {
    SpectralField u(g);
    u.mode(2) = 0.5;
    return std::abs(mass(u) - 0.25 * 2.0 * M_PI) < 1e-13;
  });
  s.check("non-mean-free data rejected", [&] {
    SpectralField u(g);
    u.mode(0) = 1.0;
    return throws<InvalidArgument>([&] { require_mean_free(u); });
  });
  return s.result();
}

SuiteResult thresholds_suite() {
  Suite s("thresholds");
  s.check("critical index at (2, 0)", [] { return critical_index(2.0, 0.0) == -0.5; });
  s.check("branch junctions agree", [] {
    for (double a = 1.05; a <= 2.0; a += 0.05) {
      const double b1 = 7.0 / 8.0 - a, b2 = 1.0 / 8.0 - a / 4.0;
      if (std::abs(branch_formula(Branch::B1_four_thirds, a, b1) - branch_formula(Branch::B2_linear, a, b1)) > 1e-12)
        return false;
      if (std::abs(branch_formula(Branch::B2_linear, a, b2) - branch_formula(Branch::B3_two_beta, a, b2)) > 1e-12)
        return false;
    }
    return true;
  });
  s.check("alpha = 2 threshold is 2 beta", [] {
    for (double b = -0.2; b < 0.5; b += 0.1)
      if (std::abs(lwp_threshold(2.0, b).value - 2.0 * b) > 1e-15) return false;
    return true;
  });
  s.check("alpha <= 1 rejected", [] { return throws<OutOfRange>([] { lwp_threshold(1.0, 0.0); }); });
  s.check("resolution 2 chart has 4 cells", [] { return region_chart(2.0, {-0.2, 0.4}, {-1, 1}, 2).size() == 4; });
  return s.result();
}

SuiteResult probe_suite() {
  Suite s("picard_probe");
  s.check("alpha = 2 resonance identity", [] {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      const double exact = 2.0 * (a - b) * (c - b);
      if (std::abs(resonance(a, b, c, 2.0) - exact) > 1e-12 * std::max(1.0, 300.0)) return false;
    }
    return true;
  });
  s.check("alpha = 2 lower-bound ratio is 2", [] {
    const auto r = resonance_lower_bound_check(2000, 2.0, 1);
    return std::abs(r.min_ratio - 2.0) < 1e-9 && std::abs(r.max_ratio - 2.0) < 1e-9;
  });
  s.check("oscillatory factor tends to i t", [] { return std::abs(oscillatory_factor(0.0, 0.1) - cplx(0.0, 0.1)) < 1e-15; });
  s.check("HHH supports disjoint", [] {
    return support_disjointness_check(Family::HHH, 1024.0, 0.01, ModelParams{2.0, 0.5, 0.0, NonlinearitySign::AsWritten});
  });
  return s.result();
}

SuiteResult bench_suite() {
  Suite s("estimate_bench");
  s.check("linear fiber has length 2L/slope", [] {
    // x^2 - (4 - x)^2 = 8x - 16
    const double len = fiber_measure({0.0, 10.0}, 1, -1, 4.0, 2.0, 0.0, 0.5);
    return std::abs(len - 2.0 * 0.5 / 8.0) < 1e-12;
  });
  s.check("h range for N = (8, 8, 1)", [] { return h_range_check({8, 8, 1, std::nullopt, {}, 2.0}, 2000, 0).passed; });
  s.check("unknown case tag rejected", [] {
    return throws<InvalidArgument>([] { counting_bound_check("case-99", 2.0, {16, 32}, {}, 16, 0); });
  });
  return s.result();
}

}  // namespace

std::vector<SuiteResult> run_selftest(bool flip_dispersion_sign) {
  return {spectral_suite(), dynamics_suite(flip_dispersion_sign), thresholds_suite(), probe_suite(), bench_suite()};
}

int cmd_selftest(bool flip_dispersion_sign, std::ostream& out) {
  bool ok = true;
  for (const auto& r : run_selftest(flip_dispersion_sign)) {
    out << r.name << ": " << r.passed << "/" << r.total << " passed\n";
    for (const auto& f : r.failures) out << "  FAIL " << r.name << ": " << f << "\n";
    ok = ok && r.passed == r.total;
  }
  return ok ? kOk : kAssertionFailure;
}

}  // namespace mmt::runner
