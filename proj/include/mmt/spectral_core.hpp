#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace mmt {

using cplx = std::complex<double>;

// Periodic grid on [0, L) with num_modes points. Lattice frequencies are
// xi_k = 2 pi k / L, k in [-num_modes/2, num_modes/2). Modes are stored in
// FFT order: storage index i holds k = i for i < N/2 and k = i - N otherwise.
class GridSpec {
 public:
  GridSpec(std::size_t num_modes, double box_length);

  std::size_t num_modes() const { return n_; }
  double box_length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const { return dx() * static_cast<double>(j); }

  long lattice_index(std::size_t storage) const;
  std::size_t storage_index(long k) const;
  double wavenumber(std::size_t storage) const;
  // Throws InvalidArgument unless xi is (to rounding) a lattice frequency.
  long lattice_index_of(double xi) const;

  bool operator==(const GridSpec& o) const { return n_ == o.n_ && length_ == o.length_; }

 private:
  std::size_t n_;
  double length_;
};

enum class NonlinearitySign {
  AsWritten,   // i u_t + D^alpha u = +D^beta(|D^beta u|^2 D^beta u)
  Defocusing,  // i u_t + D^alpha u = -D^beta(|D^beta u|^2 D^beta u)
};

struct ModelParams {
  double alpha = 2.0;
  double beta = 0.0;
  double s = 0.0;
  NonlinearitySign sign = NonlinearitySign::AsWritten;

  // Only alpha > 1 is enforced; beta and s are checked where they matter.
  void validate() const;
  double sigma() const { return sign == NonlinearitySign::AsWritten ? 1.0 : -1.0; }
};

const char* to_string(NonlinearitySign s);
NonlinearitySign sign_from_string(const std::string& s);

// Fourier-series coefficients c_k with f(x) = sum_k c_k exp(i xi_k x).
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<cplx> modes);

  static SpectralField from_samples(GridSpec grid, const std::vector<cplx>& samples);

  const GridSpec& grid() const { return grid_; }
  const std::vector<cplx>& modes() const { return modes_; }
  std::vector<cplx>& modes() { return modes_; }
  cplx mode(long k) const { return modes_[grid_.storage_index(k)]; }
  cplx& mode(long k) { return modes_[grid_.storage_index(k)]; }

  std::vector<cplx> samples() const;
  bool all_finite() const;

 private:
  GridSpec grid_;
  std::vector<cplx> modes_;
};

// Multiply every mode by symbol(xi_k).
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& f, Symbol symbol) {
  SpectralField out = f;
  auto& m = out.modes();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] *= symbol(f.grid().wavenumber(i));
  return out;
}

// |xi|^gamma; the zero mode maps to 0 whenever gamma != 0.
double abs_power(double xi, double gamma);

SpectralField fractional_derivative(const SpectralField& f, double gamma);
SpectralField bessel_multiplier(const SpectralField& f, double sigma);
SpectralField linear_propagator(const SpectralField& f, double t, double alpha);

// (L sum_k <xi_k>^{2s} |c_k|^2)^{1/2}; equals the L^2(0, L) norm at s = 0.
double sobolev_norm(const SpectralField& f, double s);
// Same with |xi_k|^{2s} and the zero mode left out.
double homogeneous_sobolev_norm(const SpectralField& f, double s);
double l2_norm(const SpectralField& f);

// Zero-pad to M = pad * N points and return grid samples there.
std::vector<cplx> padded_samples(const SpectralField& f, std::size_t padded_size);
// Forward transform of padded samples, truncated back to the modes of grid.
SpectralField truncate_padded(const GridSpec& grid, const std::vector<cplx>& padded);
std::size_t padded_size(const GridSpec& grid, double pad_factor);

}  // namespace mmt
