#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mmt::fft {

using cvec = std::vector<std::complex<double>>;

// out_k = (1/n) sum_j in_j exp(-2 pi i jk/n)
void forward(const cvec& in, cvec& out);
// out_j = sum_k in_k exp(2 pi i jk/n)
void inverse(const cvec& in, cvec& out);

}  // namespace mmt::fft
