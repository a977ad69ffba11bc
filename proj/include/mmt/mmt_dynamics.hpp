#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmt/errors.hpp"
#include "mmt/spectral_core.hpp"

namespace mmt {

enum class Scheme { EtdRk4, IfRk4 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double dealias_pad_factor = 2.0;
  Scheme scheme = Scheme::EtdRk4;
  std::size_t record_stride = 1;
  bool nonlinear = true;
  bool keep_snapshots = false;
  // Fault-injection hook for the self-test; +1 in every real run.
  int dispersion_sign = 1;

  void validate() const;
  std::size_t num_steps() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  // Conserved functional of the configured flow, K - sign * Q/2.
  std::vector<double> hamiltonian_series;
  std::vector<double> h_alpha_half_series;
  std::vector<SpectralField> snapshots;
};

class StepRejected : public Error {
 public:
  StepRejected(double time, TrajectoryRecord partial);
  double time() const { return time_; }
  const TrajectoryRecord& partial() const { return partial_; }

 private:
  double time_;
  TrajectoryRecord partial_;
};

// D^beta(|D^beta u|^2 D^beta u), dealiased by zero padding.
SpectralField nonlinearity(const SpectralField& u, double beta, double pad_factor = 2.0);

// Holds the exponential coefficients for one (grid, params, cfg).
class Stepper {
 public:
  Stepper(const GridSpec& grid, const ModelParams& params, const IntegratorConfig& cfg);
  SpectralField step(const SpectralField& u) const;

 private:
  SpectralField rhs(const SpectralField& u) const;

  GridSpec grid_;
  ModelParams params_;
  IntegratorConfig cfg_;
  std::vector<cplx> e_, e2_, q_, f1_, f2_, f3_;
};

SpectralField step(const SpectralField& u, const ModelParams& params, const IntegratorConfig& cfg);

double mass(const SpectralField& u);
// ||u||^2 in the homogeneous H^{alpha/2} norm.
double kinetic_energy(const SpectralField& u, double alpha);
// (1/2) integral |D^beta u|^4 by dealiased quadrature.
double quartic_energy(const SpectralField& u, double beta, double pad_factor = 2.0);
// K + (1/2) integral |D^beta u|^4.
double energy(const SpectralField& u, const ModelParams& params, double pad_factor = 2.0);
// Invariant of the configured flow: K - sign * (1/2) integral |D^beta u|^4.
double hamiltonian(const SpectralField& u, const ModelParams& params, double pad_factor = 2.0);

// Throws InvalidArgument when the zero mode is not negligible.
void require_mean_free(const SpectralField& u);

TrajectoryRecord integrate(const SpectralField& u0, const ModelParams& params,
                           const IntegratorConfig& cfg);

}  // namespace mmt
