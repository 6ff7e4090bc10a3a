#include "samo/nn/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace samo::nn::serial {

void dense_forward(const double* w, const double* bias, const double* in, double* out,
                   std::size_t batch, std::size_t n_in, std::size_t n_out, Activation act) {
  for (std::size_t b = 0; b < batch; ++b) {
    double* o = out + b * n_out;
    const double* x = in + b * n_in;
    std::copy(bias, bias + n_out, o);
    for (std::size_t i = 0; i < n_in; ++i) {
      const double xi = x[i];
      const double* wi = w + i * n_out;
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
  if (act == Activation::kTanh) {
    for (std::size_t k = 0; k < count; ++k) delta[k] *= 1.0 - out[k] * out[k];
  } else if (act == Activation::kRelu) {
    for (std::size_t k = 0; k < count; ++k) delta[k] = out[k] > 0.0 ? delta[k] : 0.0;
  }
}

void dense_backward_params(const double* in, const double* delta, double* dw, double* db,
                           std::size_t batch, std::size_t n_in, std::size_t n_out) {
  for (std::size_t b = 0; b < batch; ++b) {
    const double* x = in + b * n_in;
    const double* d = delta + b * n_out;
    for (std::size_t i = 0; i < n_in; ++i) {
      const double xi = x[i];
      double* dwi = dw + i * n_out;
      for (std::size_t j = 0; j < n_out; ++j) dwi[j] += xi * d[j];
    }
    for (std::size_t j = 0; j < n_out; ++j) db[j] += d[j];
  }
}

void dense_backward_input(const double* w, const double* delta, double* din, std::size_t batch,
                          std::size_t n_in, std::size_t n_out) {
  for (std::size_t b = 0; b < batch; ++b) {
    const double* d = delta + b * n_out;
    for (std::size_t i = 0; i < n_in; ++i) {
      const double* wi = w + i * n_out;
      double acc = 0.0;
      for (std::size_t j = 0; j < n_out; ++j) acc += wi[j] * d[j];
      din[b * n_in + i] = acc;
    }
  }
}

}  // namespace samo::nn::serial
