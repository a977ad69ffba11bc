#include "mmt/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace mmt::fft {
namespace {

// Plans are created once per (size, direction) and executed with the
// new-array interface, which FFTW documents as thread-safe.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    cvec a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    // ESTIMATE keeps the algorithm choice, and therefore the bits, fixed.
    fftw_plan p = fftw_plan_dft_1d(n, pa, pb, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(const cvec& in, cvec& out, int sign) {
  const int n = static_cast<int>(in.size());
  out.resize(in.size());
  fftw_plan p = cache().get(n, sign);
  // FFTW takes a non-const input pointer but does not write to it for out-of-place plans.
  auto* pi = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* po = reinterpret_cast<fftw_complex*>(out.data());
  if (pi == po) {
    cvec tmp(in);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()), po);
  } else {
    fftw_execute_dft(p, pi, po);
  }
}

}  // namespace

void forward(const cvec& in, cvec& out) {
  run(in, out, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
}

void inverse(const cvec& in, cvec& out) { run(in, out, FFTW_BACKWARD); }

}  // namespace mmt::fft
