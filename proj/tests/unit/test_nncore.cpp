#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "samo/errors.hpp"
#include "samo/nn/adam.hpp"
#include "samo/nn/dense_net.hpp"
#include "samo/nn/kernels.hpp"
#include "samo/nn/serialize.hpp"
#include "support/gradcheck.hpp"

using namespace samo;
using namespace samo::nn;

TEST_CASE("analytic gradients match central differences on random nets") {
  Rng rng(7);
  for (int n = 0; n < 100; ++n) {
    auto c = testing::random_case(rng);
    const auto r = testing::check_gradients(c.net, c.in, c.coeff);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("single-sample backward returns parameter and input gradients") {
  Rng rng(3);
  DenseNet net({3, 4, 2}, Activation::kTanh, rng);
  const std::vector<double> x = {0.1, -0.4, 0.7};
  const std::vector<double> up = {1.0, -2.0};
  const auto g = net.backward(x, up);
  REQUIRE(g.input.size() == 3);
  const double h = 1e-6;
  for (std::size_t i = 0; i < 3; ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const auto op = net.forward(xp), om = net.forward(xm);
    const double num = ((op[0] - om[0]) * up[0] + (op[1] - om[1]) * up[1]) / (2 * h);
    CHECK(g.input[i] == doctest::Approx(num).epsilon(1e-6));
  }
}

TEST_CASE("a 1-1 identity layer computes w x + b") {
  DenseNet net({1, 1}, Activation::kIdentity);
  net.params()[net.weight_offset(0)] = 2.0;
  net.params()[net.bias_offset(0)] = 0.5;
  CHECK(net.forward(std::vector<double>{3.0})[0] == 6.5);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  Rng rng(11);
  // Large enough to cross the parallel threshold.
  const std::size_t batch = 64, n_in = 96, n_out = 80;
  std::vector<double> w(n_in * n_out), b(n_out), in(batch * n_in), delta(batch * n_out);
  for (auto* v : {&w, &b, &in, &delta}) {
    for (auto& x : *v) x = 2.0 * uniform01(rng) - 1.0;
  }
  for (auto act : {Activation::kIdentity, Activation::kTanh, Activation::kRelu}) {
    std::vector<double> o1(batch * n_out), o2(batch * n_out);
    kernels::dense_forward(w.data(), b.data(), in.data(), o1.data(), batch, n_in, n_out, act);
    serial::dense_forward(w.data(), b.data(), in.data(), o2.data(), batch, n_in, n_out, act);
    CHECK(o1 == o2);
    auto d1 = delta, d2 = delta;
    kernels::activation_backward(o1.data(), d1.data(), d1.size(), act);
    serial::activation_backward(o2.data(), d2.data(), d2.size(), act);
    CHECK(d1 == d2);
  }
  std::vector<double> dw1(n_in * n_out, 0.5), db1(n_out, 0.25), dw2 = dw1, db2 = db1;
  kernels::dense_backward_params(in.data(), delta.data(), dw1.data(), db1.data(), batch, n_in, n_out);
  serial::dense_backward_params(in.data(), delta.data(), dw2.data(), db2.data(), batch, n_in, n_out);
  CHECK(dw1 == dw2);
  CHECK(db1 == db2);
  std::vector<double> di1(batch * n_in), di2(batch * n_in);
  kernels::dense_backward_input(w.data(), delta.data(), di1.data(), batch, n_in, n_out);
  serial::dense_backward_input(w.data(), delta.data(), di2.data(), batch, n_in, n_out);
  CHECK(di1 == di2);
}

TEST_CASE("adam first step on a scalar") {
  std::vector<double> p = {1.0};
  AdamState st(1);
  adam_step(p, std::vector<double>{0.5}, st, 0.1);
  // Bias-corrected m/sqrt(v) is sign(g) on the first step.
  CHECK(p[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-12));
  CHECK(st.step == 1);
  adam_step(p, std::vector<double>{-0.25}, st, 0.1);
  const double m = 0.9 * 0.05 + 0.1 * -0.25;
  const double v = 0.999 * 0.00025 + 0.001 * 0.0625;
  const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
  CHECK(p[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8) - 0.1 * mh / (std::sqrt(vh) + 1e-8))
                    .epsilon(1e-12));
}

TEST_CASE("adam rejects non-finite gradients without touching state") {
  std::vector<double> p = {1.0, 2.0};
  AdamState st(2);
  const std::vector<double> bad = {0.1, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(adam_step(p, bad, st, 0.1), NumericError);
  CHECK(p == std::vector<double>{1.0, 2.0});
  CHECK(st.step == 0);
  CHECK(st.m == std::vector<double>{0.0, 0.0});
}

TEST_CASE("soft update with tau 1 copies and with tau 0.5 averages") {
  Rng rng(5);
  DenseNet a({2, 3, 1}, Activation::kRelu, rng), b({2, 3, 1}, Activation::kRelu, rng);
  DenseNet t = a;
  soft_update(t, b, 1.0);
  CHECK(t == b);
  DenseNet u = a;
  soft_update(u, b, 0.5);
  for (std::size_t i = 0; i < u.param_count(); ++i) {
    CHECK(u.params()[i] == doctest::Approx(0.5 * a.params()[i] + 0.5 * b.params()[i]));
  }
}

TEST_CASE("net fragments round-trip exactly") {
  Rng rng(9);
  DenseNet net({4, 5, 3}, Activation::kTanh, rng);
  std::stringstream ss;
  write_net(ss, net);
  const DenseNet back = read_net(ss);
  CHECK(back == net);
  CHECK(back.checksum() == net.checksum());
}

TEST_CASE("truncated fragments are rejected") {
  Rng rng(9);
  DenseNet net({2, 2}, Activation::kTanh, rng);
  std::stringstream ss;
  write_net(ss, net);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 3);
  std::stringstream cut(bytes);
  CHECK_THROWS_AS(read_net(cut), FormatError);
}

TEST_CASE("bad layer sizes are rejected") {
  CHECK_THROWS_AS(DenseNet({3}, Activation::kTanh), ConfigError);
  CHECK_THROWS_AS(DenseNet({3, 0, 1}, Activation::kTanh), ConfigError);
}
