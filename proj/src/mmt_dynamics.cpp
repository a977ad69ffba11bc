#include "mmt/mmt_dynamics.hpp"

#include <cmath>

namespace mmt {

const char* to_string(Scheme s) { return s == Scheme::EtdRk4 ? "ETD-RK4" : "IF-RK4"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "ETD-RK4") return Scheme::EtdRk4;
  if (s == "IF-RK4") return Scheme::IfRk4;
  throw InvalidArgument("scheme", "expected \"ETD-RK4\" or \"IF-RK4\", got \"" + s + "\"");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end", "must be positive");
  if (!(dt < t_end)) throw InvalidArgument("dt", "must be smaller than t_end");
  if (dealias_pad_factor != 1.0 && dealias_pad_factor != 1.5 && dealias_pad_factor != 2.0)
    throw InvalidArgument("dealias_pad_factor", "must be one of 1, 1.5, 2");
  if (record_stride == 0) throw InvalidArgument("record_stride", "must be positive");
  if (dispersion_sign != 1 && dispersion_sign != -1)
    throw InvalidArgument("dispersion_sign", "must be +1 or -1");
}

std::size_t IntegratorConfig::num_steps() const {
  return static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
}

StepRejected::StepRejected(double time, TrajectoryRecord partial)
    : Error("non-finite mode at t = " + std::to_string(time)), time_(time),
      partial_(std::move(partial)) {}

SpectralField nonlinearity(const SpectralField& u, double beta, double pad_factor) {
  const SpectralField w = fractional_derivative(u, beta);
  auto g = padded_samples(w, padded_size(u.grid(), pad_factor));
  for (auto& v : g) v *= std::norm(v);
  return fractional_derivative(truncate_padded(u.grid(), g), beta);
}

namespace {

// phi_k(z) = sum_n z^n / (n + k)!
cplx phi(int k, cplx z) {
  if (std::abs(z) < 1.0) {
    cplx term = 1.0;
    for (int j = 1; j <= k; ++j) term /= static_cast<double>(j);
    cplx sum = term;
    for (int n = 1; n < 40; ++n) {
      term *= z / static_cast<double>(n + k);
      sum += term;
    }
    return sum;
  }
  const cplx ez = std::exp(z);
  switch (k) {
    case 1: return (ez - 1.0) / z;
    case 2: return (ez - 1.0 - z) / (z * z);
    default: return (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
  }
}

}  // namespace

Stepper::Stepper(const GridSpec& grid, const ModelParams& params, const IntegratorConfig& cfg)
    : grid_(grid), params_(params), cfg_(cfg) {
  params_.validate();
  cfg_.validate();
  const std::size_t n = grid.num_modes();
  e_.resize(n), e2_.resize(n), q_.resize(n), f1_.resize(n), f2_.resize(n), f3_.resize(n);
  const double h = cfg.dt;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = cfg.dispersion_sign * std::pow(std::abs(grid.wavenumber(i)), params.alpha);
    const cplx z{0.0, w * h};
    e_[i] = std::exp(z);
    e2_[i] = std::exp(0.5 * z);
    if (cfg.scheme == Scheme::EtdRk4) {
      const cplx p1 = phi(1, z), p2 = phi(2, z), p3 = phi(3, z);
      q_[i] = 0.5 * h * phi(1, 0.5 * z);
      f1_[i] = h * (p1 - 3.0 * p2 + 4.0 * p3);
      f2_[i] = h * (p2 - 2.0 * p3);
      f3_[i] = h * (-p2 + 4.0 * p3);
    }
  }
}

SpectralField Stepper::rhs(const SpectralField& u) const {
  SpectralField out(u.grid());
  if (!cfg_.nonlinear) return out;
  out = nonlinearity(u, params_.beta, cfg_.dealias_pad_factor);
  const cplx c{0.0, -params_.sigma()};
  for (auto& v : out.modes()) v *= c;
  return out;
}

SpectralField Stepper::step(const SpectralField& u) const {
  const std::size_t n = grid_.num_modes();
  const double h = cfg_.dt;
  SpectralField out(grid_);
  auto& o = out.modes();
  const auto& v = u.modes();
  if (!cfg_.nonlinear) {
    for (std::size_t i = 0; i < n; ++i) o[i] = e_[i] * v[i];
    return out;
  }
  SpectralField a(grid_), b(grid_), c(grid_);
  if (cfg_.scheme == Scheme::EtdRk4) {
    const SpectralField nu = rhs(u);
    for (std::size_t i = 0; i < n; ++i) a.modes()[i] = e2_[i] * v[i] + q_[i] * nu.modes()[i];
    const SpectralField na = rhs(a);
    for (std::size_t i = 0; i < n; ++i) b.modes()[i] = e2_[i] * v[i] + q_[i] * na.modes()[i];
    const SpectralField nb = rhs(b);
    for (std::size_t i = 0; i < n; ++i)
      c.modes()[i] = e2_[i] * a.modes()[i] + q_[i] * (2.0 * nb.modes()[i] - nu.modes()[i]);
    const SpectralField nc = rhs(c);
    for (std::size_t i = 0; i < n; ++i)
      o[i] = e_[i] * v[i] + f1_[i] * nu.modes()[i] + 2.0 * f2_[i] * (na.modes()[i] + nb.modes()[i]) +
             f3_[i] * nc.modes()[i];
  } else {
    const SpectralField k1 = rhs(u);
    for (std::size_t i = 0; i < n; ++i) a.modes()[i] = e2_[i] * (v[i] + 0.5 * h * k1.modes()[i]);
    const SpectralField k2 = rhs(a);
    for (std::size_t i = 0; i < n; ++i) b.modes()[i] = e2_[i] * v[i] + 0.5 * h * k2.modes()[i];
    const SpectralField k3 = rhs(b);
    for (std::size_t i = 0; i < n; ++i) c.modes()[i] = e_[i] * v[i] + h * e2_[i] * k3.modes()[i];
    const SpectralField k4 = rhs(c);
    for (std::size_t i = 0; i < n; ++i)
      o[i] = e_[i] * v[i] + h / 6.0 *
                                (e_[i] * k1.modes()[i] + 2.0 * e2_[i] * (k2.modes()[i] + k3.modes()[i]) +
                                 k4.modes()[i]);
  }
  return out;
}

SpectralField step(const SpectralField& u, const ModelParams& params, const IntegratorConfig& cfg) {
  return Stepper(u.grid(), params, cfg).step(u);
}

double mass(const SpectralField& u) {
  const auto g = u.samples();
  double acc = 0.0;
  for (const auto& v : g) acc += std::norm(v);
  return acc * u.grid().dx();
}

double kinetic_energy(const SpectralField& u, double alpha) {
  const double k = homogeneous_sobolev_norm(u, 0.5 * alpha);
  return k * k;
}

double quartic_energy(const SpectralField& u, double beta, double pad_factor) {
  const SpectralField w = fractional_derivative(u, beta);
  const std::size_t m = padded_size(u.grid(), pad_factor);
  const auto g = padded_samples(w, m);
  double acc = 0.0;
  for (const auto& v : g) acc += std::norm(v) * std::norm(v);
  return 0.5 * acc * u.grid().box_length() / static_cast<double>(m);
}

double energy(const SpectralField& u, const ModelParams& params, double pad_factor) {
  return kinetic_energy(u, params.alpha) + quartic_energy(u, params.beta, pad_factor);
}

double hamiltonian(const SpectralField& u, const ModelParams& params, double pad_factor) {
  return kinetic_energy(u, params.alpha) - params.sigma() * quartic_energy(u, params.beta, pad_factor);
}

void require_mean_free(const SpectralField& u) {
  double peak = 0.0;
  for (const auto& c : u.modes()) peak = std::max(peak, std::abs(c));
  if (std::abs(u.mode(0)) > 1e-12 * peak)
    throw InvalidArgument("initial", "initial data must be mean-free (zero mode must vanish)");
}

namespace {

void record(TrajectoryRecord& rec, double t, const SpectralField& u, const ModelParams& p,
            const IntegratorConfig& cfg) {
  rec.times.push_back(t);
  rec.mass_series.push_back(mass(u));
  rec.energy_series.push_back(energy(u, p, cfg.dealias_pad_factor));
  rec.hamiltonian_series.push_back(hamiltonian(u, p, cfg.dealias_pad_factor));
  rec.h_alpha_half_series.push_back(kinetic_energy(u, p.alpha));
  if (cfg.keep_snapshots) rec.snapshots.push_back(u);
}

}  // namespace

TrajectoryRecord integrate(const SpectralField& u0, const ModelParams& params,
                           const IntegratorConfig& cfg) {
  params.validate();
  cfg.validate();
  require_mean_free(u0);
  const Stepper stepper(u0.grid(), params, cfg);
  const std::size_t steps = cfg.num_steps();
  TrajectoryRecord rec;
  SpectralField u = u0;
  record(rec, 0.0, u, params, cfg);
  for (std::size_t n = 1; n <= steps; ++n) {
    u = stepper.step(u);
    const double t = static_cast<double>(n) * cfg.dt;
    if (!u.all_finite()) throw StepRejected(t, std::move(rec));
    if (n % cfg.record_stride == 0 || n == steps) record(rec, t, u, params, cfg);
  }
  return rec;
}

}  // namespace mmt
