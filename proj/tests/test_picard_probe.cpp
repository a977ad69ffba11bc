#include <doctest.h>

#include "gen.hpp"
#include "mmt/errors.hpp"
#include "mmt/picard_probe.hpp"
#include "oracles/brute_probe.hpp"

using namespace mmt;

namespace {

const ModelParams kHHH{2.0, 0.5, 0.0, NonlinearitySign::AsWritten};

std::vector<double> dyadic(int lo, int hi) {
  std::vector<double> v;
  for (int e = lo; e <= hi; ++e) v.push_back(std::ldexp(1.0, e));
  return v;
}

}  // namespace

TEST_CASE("dispersion relation examples") {
  CHECK(omega(0.0, 1.5) == 0.0);
  CHECK(omega(-2.0, 2.0) == 4.0);
  CHECK(omega(3.0, 1.5) == doctest::Approx(5.196152422706632).epsilon(1e-15));
  CHECK(power_difference(1e8 + 1.0, 1e8, 1.5) == doctest::Approx(1.5 * std::sqrt(1e8)).epsilon(1e-6));
}

TEST_CASE("resonance function examples") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double a = gen::uniform(rng, -10, 10), b = gen::uniform(rng, -10, 10), c = gen::uniform(rng, -10, 10);
    CHECK(std::abs(resonance(a, a, c, 1.4)) <= 1e-12 * std::max(1.0, omega(c, 1.4)));
    const double exact = 2.0 * (a - b) * (c - b);
    CHECK(std::abs(resonance(a, b, c, 2.0) - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    CHECK(std::abs(four_wave_resonance(a, b, c, 2.0) + 2.0 * (a + b) * (b + c)) <=
          1e-12 * std::max(1.0, std::abs((a + b) * (b + c))));
  }
}

TEST_CASE("resonance bracket on the HHH region at alpha = 2") {
  const auto ce = build_counterexample(Family::HHH, 1024.0, 0.01, kHHH);
  const double lam = ce.lambda;
  const auto& I1 = ce.boxes[0].interval;
  const auto& I2 = ce.boxes[1].interval;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j)
      for (int k = 0; k <= 20; ++k) {
        const double x1 = I1.lo + i * lam / 20, x2 = I2.lo + j * lam / 20, x3 = I1.lo + k * lam / 20;
        const double om = resonance(x1, x2, x3, 2.0);
        CHECK(om >= 18.0 * lam * lam * (1 - 1e-9));
        CHECK(om <= 50.0 * lam * lam * (1 + 1e-9));
      }
  const auto it = third_picard_iterate(ce.boxes, ce.window, 0.1, kHHH, 64, 16);
  CHECK(it.min_abs_omega >= 18.0 * lam * lam);
  CHECK(it.max_abs_omega <= 50.0 * lam * lam);
}

TEST_CASE("resonance lower bound check") {
  const auto r2 = resonance_lower_bound_check(10000, 2.0, 3);
  CHECK(r2.passed);
  CHECK(r2.used + r2.excluded == 10000);
  CHECK(std::abs(r2.min_ratio - 2.0) <= 1e-9);
  CHECK(std::abs(r2.max_ratio - 2.0) <= 1e-9);

  // frozen from the seed-42 calibration run
  REQUIRE(calibrated_resonance_constant(1.5).has_value());
  CHECK(*calibrated_resonance_constant(1.5) == 0.75);
  const auto r15 = resonance_lower_bound_check(100000, 1.5, 42);
  CHECK(r15.min_ratio > 0.0);
  CHECK(r15.passed);
  CHECK_FALSE(calibrated_resonance_constant(1.3).has_value());
  CHECK_THROWS_AS(resonance_lower_bound_check(999, 2.0, 0), InvalidArgument);
}

TEST_CASE("oscillatory factor") {
  CHECK(oscillatory_factor(0.0, 0.3) == cplx(0.0, 0.3));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5000; ++i) {
    const double Om = std::exp(gen::uniform(rng, -20, 10)) * (i % 2 ? 1 : -1), t = gen::uniform(rng, 0, 2);
    const double m = std::abs(oscillatory_factor(Om, t));
    CHECK(m <= t * (1 + 1e-12));
    CHECK(m <= 2.0 / std::abs(Om) * (1 + 1e-12));
  }
  // both branches at the crossover
  for (double t : {0.1, 1.0, 3.0}) {
    const double Om = 1e-6 / t;
    // exp(i th) - 1 written as 2i sin(th/2) exp(i th/2) so the reference itself does not cancel
    const cplx direct = cplx(0.0, 2.0 * std::sin(0.5e-6)) * std::polar(1.0, 0.5e-6) / Om;
    const cplx series = oscillatory_factor(Om * (1 - 1e-12), t);
    CHECK(std::abs(direct - series) <= 1e-12 * t);
  }
}

TEST_CASE("counterexample construction") {
  const auto h = build_counterexample(Family::HHH, 1024.0, 0.01, kHHH);
  CHECK(h.lambda == doctest::Approx(std::pow(2.0, -0.1)).epsilon(1e-14));
  CHECK(h.lambda == doctest::Approx(0.9330329915368074).epsilon(1e-12));
  CHECK(h.boxes[0].interval == Interval{1024.0, 1024.0 + h.lambda});
  CHECK(h.boxes[2].interval == h.boxes[0].interval);
  CHECK(h.boxes[1].interval.lo == doctest::Approx(1024.0 - 4 * h.lambda));
  CHECK(h.window.lo == doctest::Approx(1024.0 + 3 * h.lambda));
  CHECK(h.window.hi == doctest::Approx(1024.0 + 6 * h.lambda));
  CHECK(h.window.lo > h.boxes[0].interval.hi);
  CHECK(std::abs(h.boxes[0].amplitude - std::pow(h.lambda, -0.5)) < 1e-14);

  const auto l = build_counterexample(Family::LLL, 1024.0, 0.01, {1.5, -0.3, 0.0, NonlinearitySign::AsWritten});
  CHECK(l.lambda == std::ldexp(1.0, -10));
  CHECK(l.boxes[0].interval == Interval{std::ldexp(1.0, -9), 3 * std::ldexp(1.0, -10)});

  const ModelParams hp{1.5, 0.4, 0.0, NonlinearitySign::AsWritten};
  const auto hl = build_counterexample(Family::HLL, 1024.0, 0.01, hp);
  CHECK(hl.lambda == doctest::Approx(std::pow(1024.0, -0.51)).epsilon(1e-14));
  CHECK(hl.boxes[1].interval.lo == doctest::Approx(1 + hl.lambda));
  CHECK(hl.boxes[2].interval.lo == doctest::Approx(1 + 4 * hl.lambda));
  CHECK(hl.window.lo == doctest::Approx(1024 + 2 * hl.lambda));

  CHECK_THROWS_AS(build_counterexample(Family::HHH, 32.0, 0.01, kHHH), DegenerateConstruction);
  CHECK_THROWS_AS(build_counterexample(Family::HHH, 1024.0, 0.0, kHHH), InvalidArgument);
}

TEST_CASE("support disjointness") {
  for (double N : dyadic(8, 13)) {
    CHECK(support_disjointness_check(Family::HHH, N, 0.01, kHHH));
    CHECK(support_disjointness_check(Family::HHH, N, 0.01, {2.0, 0.0, -0.3, NonlinearitySign::AsWritten}));
    CHECK(support_disjointness_check(Family::HLL, N, 0.01, {1.5, 0.4, 0.0, NonlinearitySign::AsWritten}));
  }
  // all three LLL boxes coincide, so every combination is the designated one
  CHECK(support_disjointness_check(Family::LLL, 1024.0, 0.01, {1.5, -0.3, 0.0, NonlinearitySign::AsWritten}));

  const auto ce = build_counterexample(Family::HHH, 1024.0, 0.01, kHHH);
  const auto combos = interaction_supports(ce);
  CHECK(combos.size() == 27);
  for (const auto& c : combos) {
    if (c.designated) CHECK(c.overlaps_window);
    else CHECK_FALSE(c.overlaps_window);
  }
}

TEST_CASE("third iterate nullity and trilinearity") {
  const auto ce = build_counterexample(Family::HHH, 256.0, 0.01, kHHH);
  const auto zero_t = third_picard_iterate(ce.boxes, ce.window, 0.0, kHHH, 32, 16);
  for (const auto& s : zero_t.samples) CHECK(s.value == cplx(0.0));

  auto boxes = ce.boxes;
  boxes[1].amplitude = 0.0;
  for (const auto& s : third_picard_iterate(boxes, ce.window, 0.1, kHHH, 32, 16).samples) CHECK(s.value == cplx(0.0));

  const auto base = third_picard_iterate(ce.boxes, ce.window, 0.1, kHHH, 32, 16);
  auto doubled = ce.boxes;
  for (auto& b : doubled) b.amplitude *= 2.0;
  const auto d = third_picard_iterate(doubled, ce.window, 0.1, kHHH, 32, 16);
  for (std::size_t i = 0; i < base.samples.size(); ++i)
    CHECK(std::abs(d.samples[i].value - 8.0 * base.samples[i].value) <= 1e-12 * std::abs(8.0 * base.samples[i].value));

  const cplx c{0.3, -1.7};
  for (int slot = 0; slot < 3; ++slot) {
    auto scaled = ce.boxes;
    scaled[slot].amplitude *= c;
    const cplx factor = slot == 1 ? std::conj(c) : c;
    const auto s = third_picard_iterate(scaled, ce.window, 0.1, kHHH, 32, 16);
    for (std::size_t i = 0; i < base.samples.size(); ++i)
      CHECK(std::abs(s.samples[i].value - factor * base.samples[i].value) <=
            1e-12 * std::abs(factor * base.samples[i].value));
  }
}

TEST_CASE("third iterate matches brute-force double sum") {
  const ModelParams p{1.5, 0.3, 0.0, NonlinearitySign::AsWritten};
  const std::array<BoxDatum, 3> boxes{BoxDatum{{10.0, 11.0}, 1.0}, BoxDatum{{6.0, 7.0}, cplx(0.5, 0.5)},
                                      BoxDatum{{10.0, 11.0}, 2.0}};
  const Interval window{13.5, 16.5};
  const auto it = third_picard_iterate(boxes, window, 0.7, p, 128, 4);
  double scale = 0.0;
  for (const auto& s : it.samples) scale = std::max(scale, std::abs(s.value));
  const oracle::Box b1{10.0, 11.0, 1.0}, b2{6.0, 7.0, cplx(0.5, 0.5)}, b3{10.0, 11.0, 2.0};
  for (const auto& s : it.samples) {
    const cplx ref = oracle::brute_iterate(b1, b2, b3, s.xi, 0.7, 1.5, 0.3, 1500);
    CHECK(std::abs(s.value - ref) <= 5e-3 * scale);
  }
}

TEST_CASE("window norm examples") {
  std::vector<IterateSample> zero(8, IterateSample{0.0, 0.0});
  for (std::size_t i = 0; i < 8; ++i) zero[i].xi = 2.0 + 0.25 * (i + 0.5);
  CHECK(window_hs_norm(zero, 0.5) == 0.0);

  auto cst = zero;
  for (auto& s : cst) s.value = cplx(0.6, 0.8);
  CHECK(window_hs_norm(cst, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const double n0 = window_hs_norm(cst, 0.0), n1 = window_hs_norm(cst, 1.0);
  CHECK(n1 / n0 >= std::sqrt(1 + 2.0 * 2.0) * (1 - 1e-14));
  CHECK(n1 / n0 <= std::sqrt(1 + 4.0 * 4.0) * (1 + 1e-14));
  CHECK_THROWS_AS(window_hs_norm({}, 0.0), InvalidArgument);
}

TEST_CASE("box data are normalized") {
  for (double N : dyadic(8, 13)) {
    for (auto [f, p] : {std::pair{Family::HHH, kHHH},
                        {Family::HHH, ModelParams{2.0, 0.0, -0.3, NonlinearitySign::AsWritten}},
                        {Family::HLL, ModelParams{1.5, 0.4, 0.0, NonlinearitySign::AsWritten}},
                        {Family::LLL, ModelParams{1.5, -0.3, 0.0, NonlinearitySign::AsWritten}}}) {
      const auto ce = build_counterexample(f, N, 0.01, p);
      for (const auto& b : ce.boxes) {
        const double n = box_hs_norm(b, p.s);
        CHECK(n >= 0.25);
        CHECK(n <= 4.0);
      }
    }
  }
}

TEST_CASE("quadrature converges under Q doubling at the largest N") {
  for (auto [f, p] : {std::pair{Family::HHH, kHHH},
                      {Family::HLL, ModelParams{1.5, 0.4, 0.0, NonlinearitySign::AsWritten}},
                      {Family::LLL, ModelParams{1.5, -0.2, 0.0, NonlinearitySign::AsWritten}}}) {
    const auto ce = build_counterexample(f, 8192.0, 0.01, p);
    const double a = window_hs_norm(third_picard_iterate(ce.boxes, ce.window, 0.1, p, 128, 64).samples, p.s);
    const double b = window_hs_norm(third_picard_iterate(ce.boxes, ce.window, 0.1, p, 256, 64).samples, p.s);
    CAPTURE(to_string(f));
    CHECK(std::abs(a - b) < 0.005 * b);
  }
}

TEST_CASE("predicted slopes") {
  CHECK(predicted_slope(Family::HHH, kHHH, 0.01) == doctest::Approx(1.99));
  CHECK(predicted_slope(Family::HHH, {2.0, 0.0, -0.3, NonlinearitySign::AsWritten}, 0.01) == doctest::Approx(0.59));
  CHECK(predicted_slope(Family::HLL, {1.5, 0.4, 0.0, NonlinearitySign::AsWritten}, 0.01) == doctest::Approx(0.29));
  CHECK(predicted_slope(Family::LLL, {1.5, -0.3, 0.0, NonlinearitySign::AsWritten}, 0.01) == doctest::Approx(0.2));
  CHECK(predicted_slope(Family::LLL, {1.5, -0.2, 0.0, NonlinearitySign::AsWritten}, 0.01) == doctest::Approx(-0.2));
}

TEST_CASE("least squares") {
  const auto f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(least_squares({1}, {1}), InvalidArgument);
}

TEST_CASE("probe input validation") {
  ProbeSpec s;
  s.N_list = dyadic(6, 8);
  CHECK_NOTHROW(s.validate());
  auto bad = s;
  bad.N_list = {32.0, 64.0};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = s;
  bad.N_list = {128.0, 64.0};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = s;
  bad.N_list = {64.0, 96.0};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = s;
  bad.quad_points = 16;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = s;
  bad.out_points = 8;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = s;
  bad.t = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("short probe run is deterministic and well formed") {
  ProbeSpec s;
  s.family = Family::LLL;
  s.params = {1.5, -0.3, 0.0, NonlinearitySign::AsWritten};
  s.N_list = dyadic(6, 9);
  s.quad_points = 32;
  s.out_points = 16;
  const auto a = run_probe(s), b = run_probe(s);
  REQUIRE(a.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.rows[i].hs_norm == b.rows[i].hs_norm);
  CHECK(a.fitted_slope == b.fitted_slope);
  CHECK(probe_csv(a).rfind("N,hs_norm,min_abs_omega,max_abs_omega\n", 0) == 0);
  const auto j = probe_footer(a);
  for (const char* k : {"family", "params", "t", "eps", "Q", "M", "fitted_slope", "fit_stderr", "predicted_slope"})
    CHECK(j.contains(k));
}
