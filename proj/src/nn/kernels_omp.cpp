#include "samo/nn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace samo::nn::kernels {

namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

}  // namespace

void dense_forward(const double* w, const double* bias, const double* in, double* out,
                   std::size_t batch, std::size_t n_in, std::size_t n_out, Activation act) {
  const auto rows = static_cast<std::int64_t>(batch);
#pragma omp parallel for schedule(static) if (batch * n_in * n_out >= kParallelWork)
  for (std::int64_t b = 0; b < rows; ++b) {
    double* o = out + b * n_out;
    const double* x = in + b * n_in;
    std::copy(bias, bias + n_out, o);
    for (std::size_t i = 0; i < n_in; ++i) {
      const double xi = x[i];
      const double* wi = w + i * n_out;
#pragma omp simd
      for (std::size_t j = 0; j < n_out; ++j) o[j] += xi * wi[j];
    }
    if (act == Activation::kTanh) {
      for (std::size_t j = 0; j < n_out; ++j) o[j] = std::tanh(o[j]);
    } else if (act == Activation::kRelu) {
      for (std::size_t j = 0; j < n_out; ++j) o[j] = o[j] > 0.0 ? o[j] : 0.0;
    }
  }
}

void activation_backward(const double* out, double* delta, std::size_t count, Activation act) {
  const auto n = static_cast<std::int64_t>(count);
  if (act == Activation::kTanh) {
#pragma omp parallel for simd schedule(static) if (count >= kParallelWork)
    for (std::int64_t k = 0; k < n; ++k) delta[k] *= 1.0 - out[k] * out[k];
  } else if (act == Activation::kRelu) {
#pragma omp parallel for simd schedule(static) if (count >= kParallelWork)
    for (std::int64_t k = 0; k < n; ++k) delta[k] = out[k] > 0.0 ? delta[k] : 0.0;
  }
}

void dense_backward_params(const double* in, const double* delta, double* dw, double* db,
                           std::size_t batch, std::size_t n_in, std::size_t n_out) {
  // Each thread owns whole rows of dw, and every element still accumulates
  // over the batch in ascending order, matching the serial reference.
  const auto rows = static_cast<std::int64_t>(n_in);
#pragma omp parallel for schedule(static) if (batch * n_in * n_out >= kParallelWork)
  for (std::int64_t i = 0; i < rows; ++i) {
    double* dwi = dw + i * n_out;
    for (std::size_t b = 0; b < batch; ++b) {
      const double xi = in[b * n_in + i];
      const double* d = delta + b * n_out;
#pragma omp simd
      for (std::size_t j = 0; j < n_out; ++j) dwi[j] += xi * d[j];
    }
  }
  for (std::size_t b = 0; b < batch; ++b) {
    const double* d = delta + b * n_out;
    for (std::size_t j = 0; j < n_out; ++j) db[j] += d[j];
  }
}

void dense_backward_input(const double* w, const double* delta, double* din, std::size_t batch,
                          std::size_t n_in, std::size_t n_out) {
  const auto rows = static_cast<std::int64_t>(batch);
#pragma omp parallel for schedule(static) if (batch * n_in * n_out >= kParallelWork)
  for (std::int64_t b = 0; b < rows; ++b) {
    const double* d = delta + b * n_out;
    for (std::size_t i = 0; i < n_in; ++i) {
      const double* wi = w + i * n_out;
      double acc = 0.0;
      for (std::size_t j = 0; j < n_out; ++j) acc += wi[j] * d[j];
      din[b * n_in + i] = acc;
    }
  }
}

}  // namespace samo::nn::kernels
