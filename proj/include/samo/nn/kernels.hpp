#pragma once

#include <cstddef>

// Dense-layer kernels. Weights are stored input-major: w[i * n_out + j]
// connects input i to output j, so the innermost loops run over contiguous
// outputs and vectorize without reassociating any sum.
//
// `samo::nn::kernels` is the OpenMP build used by DenseNet; `samo::nn::serial`
// is the single-threaded reference with identical per-element accumulation
// order. Both must produce bit-identical results for any thread count.

namespace samo::nn {

enum class Activation { kIdentity, kTanh, kRelu };

namespace kernels {

// out[b, j] = act(bias[j] + sum_i in[b, i] * w[i, j])
void dense_forward(const double* w, const double* bias, const double* in, double* out,
                   std::size_t batch, std::size_t n_in, std::size_t n_out, Activation act);

// delta[b, j] *= act'(out[b, j]) given the post-activation output.
void activation_backward(const double* out, double* delta, std::size_t count, Activation act);

// dw[i, j] += sum_b in[b, i] * delta[b, j];  db[j] += sum_b delta[b, j]
void dense_backward_params(const double* in, const double* delta, double* dw, double* db,
                           std::size_t batch, std::size_t n_in, std::size_t n_out);

// din[b, i] = sum_j w[i, j] * delta[b, j]
void dense_backward_input(const double* w, const double* delta, double* din, std::size_t batch,
                          std::size_t n_in, std::size_t n_out);

}  // namespace kernels

namespace serial {

void dense_forward(const double* w, const double* bias, const double* in, double* out,
                   std::size_t batch, std::size_t n_in, std::size_t n_out, Activation act);
void activation_backward(const double* out, double* delta, std::size_t count, Activation act);
void dense_backward_params(const double* in, const double* delta, double* dw, double* db,
                           std::size_t batch, std::size_t n_in, std::size_t n_out);
void dense_backward_input(const double* w, const double* delta, double* din, std::size_t batch,
                          std::size_t n_in, std::size_t n_out);

}  // namespace serial

}  // namespace samo::nn
