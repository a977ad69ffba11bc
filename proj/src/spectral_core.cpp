#include "mmt/spectral_core.hpp"

#include <cmath>
#include <numbers>

#include "mmt/errors.hpp"
#include "mmt/fft.hpp"

namespace mmt {

GridSpec::GridSpec(std::size_t num_modes, double box_length) : n_(num_modes), length_(box_length) {
  if (n_ < 8 || (n_ & (n_ - 1)) != 0)
    throw InvalidArgument("num_modes", "must be a power of two >= 8, got " + std::to_string(n_));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw InvalidArgument("box_length", "must be positive and finite");
}

long GridSpec::lattice_index(std::size_t i) const {
  const long n = static_cast<long>(n_);
  const long k = static_cast<long>(i);
  return k < n / 2 ? k : k - n;
}

std::size_t GridSpec::storage_index(long k) const {
  const long n = static_cast<long>(n_);
  if (k < -n / 2 || k >= n / 2)
    throw InvalidArgument("k", "lattice index " + std::to_string(k) + " outside the grid");
  return static_cast<std::size_t>(k >= 0 ? k : k + n);
}

double GridSpec::wavenumber(std::size_t i) const {
  return 2.0 * std::numbers::pi * static_cast<double>(lattice_index(i)) / length_;
}

long GridSpec::lattice_index_of(double xi) const {
  const double q = xi * length_ / (2.0 * std::numbers::pi);
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
    throw InvalidArgument("k", "wavenumber is not on the grid lattice");
  const long k = static_cast<long>(r);
  storage_index(k);
  return k;
}

void ModelParams::validate() const {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha", "must satisfy alpha > 1");
  if (!std::isfinite(beta)) throw InvalidArgument("beta", "must be finite");
  if (!std::isfinite(s)) throw InvalidArgument("s", "must be finite");
}

const char* to_string(NonlinearitySign s) {
  return s == NonlinearitySign::AsWritten ? "as_written" : "defocusing";
}

NonlinearitySign sign_from_string(const std::string& s) {
  if (s == "as_written") return NonlinearitySign::AsWritten;
  if (s == "defocusing") return NonlinearitySign::Defocusing;
  throw InvalidArgument("sign", "expected \"as_written\" or \"defocusing\", got \"" + s + "\"");
}

SpectralField::SpectralField(GridSpec grid) : grid_(grid), modes_(grid.num_modes()) {}

SpectralField::SpectralField(GridSpec grid, std::vector<cplx> modes)
    : grid_(grid), modes_(std::move(modes)) {
  if (modes_.size() != grid_.num_modes())
    throw InvalidArgument("modes", "length does not match num_modes");
}

SpectralField SpectralField::from_samples(GridSpec grid, const std::vector<cplx>& samples) {
  if (samples.size() != grid.num_modes())
    throw InvalidArgument("samples", "length does not match num_modes");
  std::vector<cplx> modes;
  fft::forward(samples, modes);
  return SpectralField(grid, std::move(modes));
}

std::vector<cplx> SpectralField::samples() const {
  std::vector<cplx> out;
  fft::inverse(modes_, out);
  return out;
}

bool SpectralField::all_finite() const {
  for (const auto& c : modes_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

double abs_power(double xi, double gamma) {
  if (gamma == 0.0) return 1.0;
  if (xi == 0.0) return 0.0;
  return std::pow(std::abs(xi), gamma);
}

SpectralField fractional_derivative(const SpectralField& f, double gamma) {
  return apply_multiplier(f, [gamma](double xi) { return abs_power(xi, gamma); });
}

SpectralField bessel_multiplier(const SpectralField& f, double sigma) {
  return apply_multiplier(f, [sigma](double xi) { return std::pow(1.0 + xi * xi, 0.5 * sigma); });
}

SpectralField linear_propagator(const SpectralField& f, double t, double alpha) {
  return apply_multiplier(f, [t, alpha](double xi) {
    return std::polar(1.0, t * std::pow(std::abs(xi), alpha));
  });
}

namespace {

template <class Weight>
double weighted_norm(const SpectralField& f, Weight w) {
  double acc = 0.0;
  const auto& m = f.modes();
  for (std::size_t i = 0; i < m.size(); ++i) acc += w(f.grid().wavenumber(i)) * std::norm(m[i]);
  return std::sqrt(f.grid().box_length() * acc);
}

}  // namespace

double sobolev_norm(const SpectralField& f, double s) {
  return weighted_norm(f, [s](double xi) { return std::pow(1.0 + xi * xi, s); });
}

double homogeneous_sobolev_norm(const SpectralField& f, double s) {
  return weighted_norm(f, [s](double xi) { return xi == 0.0 ? 0.0 : std::pow(std::abs(xi), 2.0 * s); });
}

double l2_norm(const SpectralField& f) { return weighted_norm(f, [](double) { return 1.0; }); }

std::size_t padded_size(const GridSpec& grid, double pad_factor) {
  if (pad_factor != 1.0 && pad_factor != 1.5 && pad_factor != 2.0)
    throw InvalidArgument("dealias_pad_factor", "must be one of 1, 1.5, 2");
  return static_cast<std::size_t>(pad_factor * static_cast<double>(grid.num_modes()));
}

std::vector<cplx> padded_samples(const SpectralField& f, std::size_t m) {
  const std::size_t n = f.grid().num_modes();
  std::vector<cplx> wide(m, cplx{});
  for (std::size_t i = 0; i < n; ++i) {
    const long k = f.grid().lattice_index(i);
    wide[k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<long>(m))] =
        f.modes()[i];
  }
  std::vector<cplx> out;
  fft::inverse(wide, out);
  return out;
}

SpectralField truncate_padded(const GridSpec& grid, const std::vector<cplx>& padded) {
  std::vector<cplx> wide;
  fft::forward(padded, wide);
  const std::size_t n = grid.num_modes();
  const long m = static_cast<long>(padded.size());
  std::vector<cplx> modes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = grid.lattice_index(i);
    modes[i] = wide[static_cast<std::size_t>(k >= 0 ? k : k + m)];
  }
  return SpectralField(grid, std::move(modes));
}

}  // namespace mmt
