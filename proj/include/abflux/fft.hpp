#pragma once

#include <complex>
#include <vector>

namespace abf::fft {

// Unnormalized in-place transforms over a row-major array of the given
// shape. Plans are cached per shape; execution is thread-safe.
void forward(std::complex<double>* data, const std::vector<int>& shape);
void inverse(std::complex<double>* data, const std::vector<int>& shape);

// Normalized coefficients c_k = (1/N) sum_j f_j e^{-i k theta_j}.
std::vector<std::complex<double>> coefficients(
    const std::vector<std::complex<double>>& f, const std::vector<int>& shape);

}  // namespace abf::fft
