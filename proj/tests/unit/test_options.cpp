#include <doctest.h>

#include <cmath>

#include "samo/errors.hpp"
#include "samo/options.hpp"
#include "support/scripted.hpp"

using namespace samo;
using namespace samo::options;

namespace {

const ActionSpace kBox = ActionSpace::continuous_box(1);

// Constant-output termination function over a 2-d state and 1-d action.
TerminationFn constant_fn(double probability, int prefix = 1) {
  nn::DenseNet net({3, 1}, nn::Activation::kTanh);
  net.params()[net.bias_offset(0)] = std::log(probability / (1.0 - probability));
  return TerminationFn(kBox, net, prefix);
}

const std::vector<double> kS = {0.1, 0.2};
const std::vector<double> kA = {0.3};

Transition survival(double r_beta = 0.0, bool done = false) {
  Transition t;
  t.state = kS;
  t.action = kA;
  t.next_state = kS;
  t.next_action = kA;
  t.termination_reward = r_beta;
  t.done = done;
  return t;
}

}  // namespace

TEST_CASE("hard classification against the threshold") {
  CHECK(constant_fn(0.9).classify(kS, kA) == 1);
  CHECK(constant_fn(0.1).classify(kS, kA) == 0);
  nn::DenseNet zero({3, 1}, nn::Activation::kTanh);
  CHECK(TerminationFn(kBox, zero, 1).classify(kS, kA) == 1);  // sigmoid(0) is the tie
}

TEST_CASE("eligibility truth table") {
  for (int prev = 0; prev <= 1; ++prev) {
    for (int own = 0; own <= 1; ++own) {
      testing::MockSource src(3);
      src.verdicts[{1, 2}] = prev;
      src.verdicts[{2, 2}] = own;
      src.verdicts[{3, 2}] = 0;
      const bool expect = prev == 1 && own == 0;
      CHECK(eligible(src, 2, kS, std::vector<double>{2.0}) == expect);
    }
  }
}

TEST_CASE("first option and last-option fallback") {
  testing::MockSource src(2);
  src.verdicts[{1, 1}] = 0;
  CHECK(eligible(src, 1, kS, std::vector<double>{1.0}));
  src.verdicts[{1, 1}] = 1;
  CHECK_FALSE(eligible(src, 1, kS, std::vector<double>{1.0}));
  // Every prefix says termination: the last option may still act.
  src.verdicts.clear();
  CHECK(eligible(src, 2, kS, std::vector<double>{2.0}));
  CHECK_THROWS_AS(eligible(src, 3, kS, std::vector<double>{2.0}), ConfigError);
}

TEST_CASE("td targets") {
  const auto fn = constant_fn(0.8);
  const auto batch = make_batch(std::vector<Transition>{survival(), survival(1.0, true),
                                                        survival(0.0, true), survival(1.0)});
  const auto y = td_targets(fn, batch, 0.95);
  CHECK(y[0] == doctest::Approx(0.76).epsilon(1e-12));
  CHECK(y[1] == 1.0);
  CHECK(y[2] == 0.0);
  CHECK(y[3] == 1.0);  // clamped
  const auto zero = constant_fn(1e-12);
  CHECK(td_targets(zero, make_batch(std::vector<Transition>{survival()}), 0.95)[0] < 1e-11);
}

TEST_CASE("td update moves beta toward its target") {
  auto fn = constant_fn(0.5);
  const auto batch = make_batch(std::vector<Transition>{survival(1.0, true)});
  const double before = fn.probability(kS, kA);
  td_update_beta(fn, batch, 0.95, 1e-2);
  CHECK(fn.probability(kS, kA) > before);
}

TEST_CASE("geometric labels") {
  const auto y = geometric_labels(5, 0.95, true);
  const std::vector<double> expect = {0.81450625, 0.857375, 0.9025, 0.95, 1.0};
  REQUIRE(y.size() == 5);
  for (int t = 0; t < 5; ++t) CHECK(std::abs(y[t] - expect[t]) < 1e-12);
  CHECK(geometric_labels(1, 0.95, true) == std::vector<double>{1.0});
  CHECK(geometric_labels(5, 0.95, false) == std::vector<double>(5, 0.0));
}

TEST_CASE("bce loss at the label equals the binary entropy") {
  const auto fn = constant_fn(0.95);
  std::vector<LabeledSample> s = {{{0.1, 0.2, 0.3}, 0.95}};
  const double h = -(0.95 * std::log(0.95) + 0.05 * std::log(0.05));
  CHECK(bce_loss(fn, s) == doctest::Approx(h).epsilon(1e-12));
  CHECK(h == doctest::Approx(0.1985).epsilon(1e-3));
}

TEST_CASE("bce learns a separable pool") {
  Rng rng(3);
  TerminationFn fn(kBox, 2, {8}, 1, rng);
  LabelPool pool;
  for (int i = 0; i < 200; ++i) {
    const double bit = i % 2;
    pool.push({{bit, uniform01(rng), 2 * uniform01(rng) - 1}, bit});
  }
  const auto r = bce_train_beta(fn, pool, 200, 32, 1e-2, rng);
  CHECK_FALSE(r.skipped);
  int correct = 0;
  for (const auto& s : pool.items()) {
    const std::vector<double> st(s.input.begin(), s.input.begin() + 2), a(s.input.begin() + 2, s.input.end());
    correct += fn.classify(st, a) == static_cast<int>(s.label);
  }
  CHECK(correct == 200);
}

TEST_CASE("bce with only termination labels drives beta up") {
  Rng rng(4);
  TerminationFn fn(kBox, 2, {8}, 1, rng);
  LabelPool pool;
  for (int i = 0; i < 100; ++i) pool.push({{uniform01(rng), uniform01(rng), 0.0}, 1.0});
  const auto r = bce_train_beta(fn, pool, 50, 32, 1e-2, rng);
  CHECK_FALSE(r.skipped);
  CHECK_FALSE(r.warning.empty());
  const auto p = fn.probabilities([&] {
    nn::Matrix m(pool.size(), 3);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      std::copy(pool.items()[i].input.begin(), pool.items()[i].input.end(), m.row(i).begin());
    }
    return m;
  }());
  double mean = 0;
  for (double x : p) mean += x;
  CHECK(mean / p.size() > 0.9);
}

TEST_CASE("bce on an empty pool is skipped with a warning") {
  Rng rng(5);
  TerminationFn fn(kBox, 2, {4}, 1, rng);
  const auto before = fn.net();
  const auto r = bce_train_beta(fn, LabelPool{}, 10, 32, 1e-2, rng);
  CHECK(r.skipped);
  CHECK_FALSE(r.warning.empty());
  CHECK(fn.net() == before);
}

TEST_CASE("label pool is FIFO with a capacity") {
  LabelPool pool(3);
  for (int i = 0; i < 5; ++i) pool.push({{double(i)}, 0.0});
  CHECK(pool.size() == 3);
  CHECK(pool.items().front().input[0] == 2.0);
  CHECK(pool.full());
  CHECK(LabelPool().capacity() == 1000);
}

TEST_CASE("warm start copies the previous prefix function") {
  Rng rng(6);
  OptionSet set(kBox, 2, 0.95);
  const auto first = warm_start_prefix(set, {4}, rng);
  CHECK(first.prefix_length() == 1);
  Option opt{policy::make_head(kBox, 2, {4}, rng), 0.05, true};
  set.append(opt, first);
  const auto second = warm_start_prefix(set, {4}, rng);
  CHECK(second.prefix_length() == 2);
  CHECK(second.net() == set.termination(1).net());
}

TEST_CASE("option set append checks the prefix length") {
  Rng rng(7);
  OptionSet set(kBox, 2, 0.95);
  Option opt{policy::make_head(kBox, 2, {4}, rng), 0.05, true};
  CHECK_THROWS_AS(set.append(opt, TerminationFn(kBox, 2, {4}, 2, rng)), ConfigError);
  set.append(opt, TerminationFn(kBox, 2, {4}, 1, rng));
  CHECK(set.size() == 1);
  CHECK_THROWS_AS(set.option(2), ConfigError);
}
