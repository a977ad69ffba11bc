#include <doctest.h>

#include <thread>

#include "gen.hpp"
#include "mmt/errors.hpp"
#include "mmt/fft.hpp"
#include "mmt/spectral_core.hpp"
#include "oracles/naive_dft.hpp"

using namespace mmt;

namespace {
const double kTwoPi = 2.0 * M_PI;

SpectralField single_mode(const GridSpec& g, long k, cplx a) {
  SpectralField f(g);
  f.mode(k) = a;
  return f;
}
}  // namespace

TEST_CASE("grid lattice conventions") {
  const GridSpec g(16, 4.0 * M_PI);
  CHECK(g.lattice_index(0) == 0);
  CHECK(g.lattice_index(7) == 7);
  CHECK(g.lattice_index(8) == -8);
  CHECK(g.lattice_index(15) == -1);
  CHECK(g.storage_index(-3) == 13);
  CHECK(g.wavenumber(2) == doctest::Approx(1.0));
  CHECK(g.lattice_index_of(-1.5) == -3);
  CHECK_THROWS_AS(g.lattice_index_of(0.3), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(12, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(16, 0.0), InvalidArgument);
}

TEST_CASE("forward transform matches a naive DFT") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {8u, 32u, 128u}) {
    std::vector<cplx> u(n);
    for (auto& z : u) z = {gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)};
    fft::cvec c;
    fft::forward(u, c);
    const auto ref = oracle::naive_forward(u);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(c[k] - ref[k]) < 1e-14);
    fft::cvec back;
    fft::inverse(c, back);
    const auto ref_back = oracle::naive_inverse(ref);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(back[j] - ref_back[j]) < 1e-12);
  }
}

TEST_CASE("transform round trip and Parseval on random fields") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const GridSpec g(256, 10.0);
    const auto f = gen::bandlimited(g, 100, seed);
    const auto back = SpectralField::from_samples(g, f.samples());
    CHECK(gen::max_mode_diff(back, f) <= 1e-12 * gen::max_abs(f));
    double grid_sum = 0.0;
    for (const auto& z : f.samples()) grid_sum += std::norm(z);
    grid_sum *= g.dx();
    const double l2 = l2_norm(f);
    CHECK(std::abs(grid_sum - l2 * l2) <= 1e-12 * l2 * l2);
  }
}

TEST_CASE("transform plans are safe to share across threads") {
  const GridSpec g(512, 1.0);
  const auto f = gen::bandlimited(g, 200, 3);
  const auto ref = f.samples();
  std::vector<std::vector<cplx>> outs(4);
  std::vector<std::thread> pool;
  for (int i = 0; i < 4; ++i) pool.emplace_back([&, i] {
    for (int r = 0; r < 20; ++r) outs[i] = f.samples();
  });
  for (auto& t : pool) t.join();
  for (const auto& o : outs) CHECK(o == ref);
}

TEST_CASE("fractional derivative examples") {
  const GridSpec g(64, kTwoPi);
  const auto f = gen::bandlimited(g, 20, 5);
  CHECK(gen::max_mode_diff(fractional_derivative(f, 0.0), f) == 0.0);

  const double beta = 0.37;
  const auto e = fractional_derivative(single_mode(g, 5, 1.0), beta);
  CHECK(std::abs(e.mode(5) - std::pow(5.0, beta)) < 1e-14);

  // cos(2x) has modes 1/2 at k = +-2
  SpectralField c(g);
  c.mode(2) = 0.5;
  c.mode(-2) = 0.5;
  const auto d = fractional_derivative(c, 1.0).samples();
  for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(d[j] - 2.0 * std::cos(2.0 * g.x(j))) < 1e-13);

  SpectralField z(g);
  z.mode(0) = 3.0;
  CHECK(fractional_derivative(z, 0.5).mode(0) == cplx(0.0));
  CHECK(fractional_derivative(z, -0.5).mode(0) == cplx(0.0));
}

TEST_CASE("bessel multiplier examples") {
  const GridSpec g(32, kTwoPi);
  const auto f = gen::bandlimited(g, 10, 2);
  CHECK(gen::max_mode_diff(bessel_multiplier(f, 0.0), f) < 1e-15);
  SpectralField z(g);
  z.mode(0) = 2.5;
  CHECK(bessel_multiplier(z, 3.7).mode(0) == cplx(2.5));
  CHECK(std::abs(bessel_multiplier(single_mode(g, 1, 1.0), 2.0).mode(1) - 2.0) < 1e-15);
}

TEST_CASE("linear propagator examples and group law") {
  const GridSpec g(128, 20.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = gen::bandlimited(g, 60, seed);
    CHECK(gen::max_mode_diff(linear_propagator(f, 0.0, 1.5), f) == 0.0);
    std::mt19937_64 rng(seed);
    const double t1 = gen::uniform(rng, -3, 3), t2 = gen::uniform(rng, -3, 3);
    const double a = gen::uniform(rng, 1.01, 2.0);
    const auto st = linear_propagator(f, t1, a);
    CHECK(std::abs(l2_norm(st) - l2_norm(f)) <= 1e-12 * l2_norm(f));
    const auto lhs = linear_propagator(linear_propagator(f, t2, a), t1, a);
    const auto rhs = linear_propagator(f, t1 + t2, a);
    CHECK(gen::max_mode_diff(lhs, rhs) <= 1e-12 * gen::max_abs(f));
  }
}

TEST_CASE("sobolev norm examples") {
  const GridSpec g(64, 8.0);
  const auto f = gen::bandlimited(g, 20, 9);
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  CHECK(sobolev_norm(SpectralField(g), 1.3) == 0.0);
  const double k = g.wavenumber(3);
  const double expect = std::sqrt(8.0) * 0.5 * std::pow(1.0 + k * k, 0.7 / 2.0);
  CHECK(sobolev_norm(single_mode(g, 3, 0.5), 0.7) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("homogeneous sobolev norm examples") {
  const GridSpec g(128, 12.0);
  const auto f = gen::bandlimited(g, 40, 4);
  CHECK(homogeneous_sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  const auto e = single_mode(g, -7, cplx(0.3, 0.4));
  CHECK(homogeneous_sobolev_norm(e, 0.6) ==
        doctest::Approx(std::pow(std::abs(g.wavenumber(g.storage_index(-7))), 0.6) * l2_norm(e)).epsilon(1e-14));
  // s = 1 against the spectral derivative
  const auto df = apply_multiplier(f, [](double xi) { return cplx(0.0, xi); });
  CHECK(std::abs(homogeneous_sobolev_norm(f, 1.0) - l2_norm(df)) <= 1e-10 * l2_norm(df));
}

TEST_CASE("multiplier algebra on random mean-free fields") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const GridSpec g(128, gen::uniform(rng, 5, 50));
    const auto f = gen::bandlimited(g, 50, static_cast<std::uint64_t>(trial));
    const double a = gen::uniform(rng, -1, 1), b = gen::uniform(rng, -1, 1);
    const auto ab = fractional_derivative(fractional_derivative(f, a), b);
    const auto sum = fractional_derivative(f, a + b);
    CHECK(gen::max_mode_diff(ab, sum) <= 1e-11 * gen::max_abs(sum));

    const double alpha = gen::uniform(rng, 1.01, 2.0), t = gen::uniform(rng, 0, 5), s = gen::uniform(rng, -1, 2);
    const auto st = linear_propagator(f, t, alpha);
    CHECK(std::abs(sobolev_norm(st, s) - sobolev_norm(f, s)) <= 1e-11 * sobolev_norm(f, s));

    const auto dp = fractional_derivative(linear_propagator(f, t, alpha), a);
    const auto pd = linear_propagator(fractional_derivative(f, a), t, alpha);
    CHECK(gen::max_mode_diff(dp, pd) <= 1e-11 * gen::max_abs(dp));
  }
}

TEST_CASE("zero padding round trip") {
  const GridSpec g(32, 3.0);
  const auto f = gen::bandlimited(g, 15, 8);
  for (double pad : {1.0, 1.5, 2.0}) {
    const auto back = truncate_padded(g, padded_samples(f, padded_size(g, pad)));
    CHECK(gen::max_mode_diff(back, f) < 1e-14 * gen::max_abs(f) * 10);
  }
  CHECK_THROWS_AS(padded_size(g, 3.0), InvalidArgument);
}
