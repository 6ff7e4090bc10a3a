#include <benchmark/benchmark.h>

#include <vector>

#include "samo/nn/kernels.hpp"
#include "samo/rng.hpp"

namespace nn = samo::nn;

namespace {

struct Buffers {
  std::vector<double> w, bias, in, out, delta, dw, db, din;
  Buffers(std::size_t batch, std::size_t n_in, std::size_t n_out)
      : w(n_in * n_out), bias(n_out), in(batch * n_in), out(batch * n_out), delta(batch * n_out),
        dw(n_in * n_out), db(n_out), din(batch * n_in) {
    samo::Rng rng(1);
    for (auto* v : {&w, &bias, &in, &delta}) {
      for (auto& x : *v) x = samo::uniform01(rng) - 0.5;
    }
  }
};

// Args: batch, fan-in, fan-out.
template <auto Forward>
void forward(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const auto i = static_cast<std::size_t>(state.range(1));
  const auto o = static_cast<std::size_t>(state.range(2));
  Buffers buf(b, i, o);
  for (auto _ : state) {
    Forward(buf.w.data(), buf.bias.data(), buf.in.data(), buf.out.data(), b, i, o, nn::Activation::kRelu);
    benchmark::DoNotOptimize(buf.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(b * i * o));
}

template <auto Params, auto Input>
void backward(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const auto i = static_cast<std::size_t>(state.range(1));
  const auto o = static_cast<std::size_t>(state.range(2));
  Buffers buf(b, i, o);
  for (auto _ : state) {
    Params(buf.in.data(), buf.delta.data(), buf.dw.data(), buf.db.data(), b, i, o);
    Input(buf.w.data(), buf.delta.data(), buf.din.data(), b, i, o);
    benchmark::DoNotOptimize(buf.din.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * b * i * o));
}

void shapes(benchmark::internal::Benchmark* bm) {
  bm->Args({1, 100, 256})->Args({16, 100, 256})->Args({16, 256, 256})->Args({256, 256, 256});
}

}  // namespace

BENCHMARK(forward<nn::serial::dense_forward>)->Name("forward/serial")->Apply(shapes);
BENCHMARK(forward<nn::kernels::dense_forward>)->Name("forward/omp")->Apply(shapes);
BENCHMARK(backward<nn::serial::dense_backward_params, nn::serial::dense_backward_input>)
    ->Name("backward/serial")
    ->Apply(shapes);
BENCHMARK(backward<nn::kernels::dense_backward_params, nn::kernels::dense_backward_input>)
    ->Name("backward/omp")
    ->Apply(shapes);

BENCHMARK_MAIN();
