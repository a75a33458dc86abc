#include <cmath>
#include <limits>
#include <vector>

#include "curio/core.hpp"
#include "curio/rng.hpp"
#include "doctest.h"

using namespace curio;

namespace {

RecognitionState state(double mu, double p) {
  RecognitionState s;
  s.mu = {mu, mu};
  s.p = {p, p};
  return s;
}

ModelParams params(double sigma_w = 0.4, double p0 = 0.8) {
  ModelParams m;
  m.sigma_w = sigma_w;
  m.p0 = p0;
  return m;
}

double entropy(double p) {
  return -(p * std::log(p) + (1.0 - p) * std::log(1.0 - p));
}

// Monte Carlo reference for the Taylor-approximated quantities: draws
// w ~ N(mu, 1/p + sigma_w^2) and averages f(w) and the outcome entropy
// H(o|w) pointwise.
struct McRef {
  double p1 = 0.0;      // E[f(w)]
  double cond = 0.0;    // E[H(f(w))]
};

McRef mc_reference(double mu, double p, double sigma_w, int n,
                   std::uint64_t stream_index) {
  rng::Stream s(2024, rng::Tag::Oracle, stream_index);
  const double sd = std::sqrt(1.0 / p + sigma_w * sigma_w);
  McRef r;
  for (int i = 0; i < n; ++i) {
    const double w = mu + sd * s.next_normal();
    const double f = logistic(w);
    r.p1 += f;
    r.cond += entropy(f);
  }
  r.p1 /= n;
  r.cond /= n;
  return r;
}

}  // namespace

TEST_CASE("logistic worked values and stability") {
  CHECK(logistic(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(logistic(std::log(4.0)) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(logistic(-std::log(4.0)) == doctest::Approx(0.2).epsilon(1e-12));

  rng::Stream s(3, rng::Tag::Misc, 0);
  for (int i = 0; i < 200; ++i) {
    const double x = s.next_uniform(-30.0, 30.0);
    CHECK(logistic(-x) == doctest::Approx(1.0 - logistic(x)).epsilon(1e-9));
  }
  // clamped, never exactly 0 or 1
  CHECK(logistic(-1000.0) >= 1e-9);
  CHECK(logistic(1000.0) <= 1.0 - 1e-9);
  CHECK_THROWS(logistic(std::nan("")));
  CHECK_THROWS(logistic(std::numeric_limits<double>::infinity()));
}

TEST_CASE("log_logistic tracks log(logistic) without overflow") {
  rng::Stream s(4, rng::Tag::Misc, 0);
  for (int i = 0; i < 200; ++i) {
    const double x = s.next_uniform(-25.0, 25.0);
    CHECK(log_logistic(x) ==
          doctest::Approx(std::log(1.0 / (1.0 + std::exp(-x)))).epsilon(1e-9));
  }
  CHECK(log_logistic(-1000.0) == doctest::Approx(-1000.0).epsilon(1e-12));
  CHECK(log_logistic(1000.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("reward intensity") {
  CHECK(reward_intensity(0, 0.8) == 0.0);
  CHECK(reward_intensity(1, 0.8) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(reward_intensity(1, 0.8) == doctest::Approx(1.38629).epsilon(1e-5));
  CHECK(reward_intensity(1, 0.5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("predicted outcome probability: worked values") {
  const auto m = params();
  // correction vanishes at mu = 0 for any precision
  for (double p : {0.3, 1.0, 4.0, 50.0})
    CHECK(predict_outcome_prob(state(0.0, p), Action::Rest, m, 1) ==
          doctest::Approx(0.5).epsilon(1e-12));
  // near-degenerate belief and drift: collapses to logistic(mu)
  CHECK(predict_outcome_prob(state(1.0, 1e12), Action::Rest, params(1e-6), 1) ==
        doctest::Approx(logistic(1.0)).epsilon(1e-9));
  // mu=1, p=4, sigma_w=0.4
  const double p1 = predict_outcome_prob(state(1.0, 4.0), Action::Rest, m, 1);
  CHECK(std::fabs(p1 - 0.7125) < 1e-3);
  CHECK(p1 == doctest::Approx(0.7124327403570505).epsilon(1e-12));
  // complement
  CHECK(predict_outcome_prob(state(1.0, 4.0), Action::Rest, m, 0) ==
        doctest::Approx(1.0 - p1).epsilon(1e-12));
}

TEST_CASE("Taylor terms agree with a million-sample Monte Carlo oracle") {
  const auto m = params();
  rng::Stream pick(77, rng::Tag::Oracle, 999);
  const int kDraws = 1000000;
  for (int i = 0; i < 20; ++i) {
    const double mu = pick.next_uniform(-3.0, 3.0);
    const double p = pick.next_uniform(2.0, 50.0);
    const auto ref = mc_reference(mu, p, m.sigma_w, kDraws, 100 + i);
    const auto st = state(mu, p);

    const double taylor_p = predict_outcome_prob(st, Action::Rest, m, 1);
    CHECK(std::fabs(taylor_p - ref.p1) < 0.02);

    const auto ig = expected_info_gain(st, Action::Rest, m);
    CHECK(std::fabs(ig.marginal_entropy - entropy(ref.p1)) < 0.05);
    CHECK(std::fabs(ig.conditional_entropy - ref.cond) < 0.05);
  }
}

TEST_CASE("expected reward: worked values") {
  const auto m = params();
  CHECK(expected_reward(state(0.0, 4.0), Action::Rest, m) ==
        doctest::Approx(0.69315).epsilon(1e-4));
  CHECK(expected_reward(state(1.7, 3.0), Action::Rest, params(0.4, 0.5)) ==
        doctest::Approx(0.0).scale(1.0));
  const double er = expected_reward(state(1.0, 4.0), Action::Rest, m);
  CHECK(er == doctest::Approx(0.9878).epsilon(5e-4));
  // consistency with its own factors
  CHECK(er == doctest::Approx(
                  predict_outcome_prob(state(1.0, 4.0), Action::Rest, m, 1) *
                  reward_intensity(1, 0.8))
                  .epsilon(1e-12));
}

TEST_CASE("expected information gain: worked values") {
  const auto m = params();
  // perfectly known latent cause: nothing to learn
  const auto tight = expected_info_gain(state(0.7, 1e12), Action::Rest, params(1e-6));
  CHECK(tight.expected_info == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

  const auto ig = expected_info_gain(state(0.0, 4.0), Action::Rest, m);
  CHECK(ig.marginal_entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(ig.expected_info == doctest::Approx(0.05125).epsilon(1e-12));
  CHECK(ig.expected_info ==
        doctest::Approx(0.125 * (0.25 + 0.16)).epsilon(1e-12));
}

TEST_CASE("net utility composes reward and curiosity-weighted info") {
  const auto m = params();
  const auto st = state(0.0, 4.0);
  const auto u0 = net_utility(st, Action::Rest, 0.0, m);
  CHECK(u0.net_utility ==
        doctest::Approx(expected_reward(st, Action::Rest, m)).epsilon(1e-12));
  CHECK(net_utility(st, Action::Rest, 1.0, m).net_utility ==
        doctest::Approx(0.74440).epsilon(1e-4));
  CHECK(net_utility(st, Action::Rest, -1.0, m).net_utility ==
        doctest::Approx(0.64190).epsilon(1e-4));

  // field consistency on random states
  rng::Stream s(11, rng::Tag::Misc, 4);
  for (int i = 0; i < 300; ++i) {
    const auto r = state(s.next_uniform(-6.0, 6.0), s.next_uniform(0.2, 60.0));
    const double c = s.next_uniform(-5.0, 5.0);
    const auto u = net_utility(r, Action::Accelerate, c, m);
    CHECK(u.expected_info ==
          doctest::Approx(std::max(0.0, u.expected_info_raw)).epsilon(1e-12));
    CHECK(u.expected_info_raw ==
          doctest::Approx(u.marginal_entropy - u.conditional_entropy)
              .scale(1.0)
              .epsilon(1e-12));
    CHECK(u.net_utility ==
          doctest::Approx(u.expected_reward + c * u.expected_info)
              .scale(1.0)
              .epsilon(1e-12));
  }
}

TEST_CASE("entropy bounds hold on 10^4 random states") {
  const auto m = params();
  rng::Stream s(13, rng::Tag::Misc, 5);
  for (int i = 0; i < 10000; ++i) {
    const auto st = state(s.next_uniform(-6.0, 6.0), s.next_uniform(0.2, 50.0));
    const auto ig = expected_info_gain(st, Action::Rest, m);
    CHECK(ig.marginal_entropy >= 0.0);
    CHECK(ig.marginal_entropy <= std::log(2.0) + 1e-12);
    CHECK(ig.conditional_entropy <= ig.marginal_entropy + 0.02);
  }
}

TEST_CASE("info gain never increases with precision") {
  const auto m = params();
  for (double mu : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double p = 0.3; p < 200.0; p *= 1.4) {
      const double info =
          expected_info_gain(state(mu, p), Action::Rest, m).expected_info;
      CHECK(info <= prev + 1e-12);
      prev = info;
    }
  }
}

TEST_CASE("action probability: symmetry, closed form, monotonicity in c") {
  const auto m = params();
  CHECK(action_probability(state(0.7, 2.0), 1.3, m) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // beta * dU = 2 maps through the logistic: 1/(1+e^-2)
  CHECK(logistic(2.0) == doctest::Approx(0.88080).epsilon(1e-4));

  ModelParams flat = m;
  flat.beta = 0.0;
  RecognitionState asym;
  asym.mu = {-1.0, 2.0};
  asym.p = {1.0, 8.0};
  CHECK(action_probability(asym, 2.0, flat) == doctest::Approx(0.5).epsilon(1e-12));

  // identity with the utility difference
  rng::Stream s(17, rng::Tag::Misc, 6);
  for (int i = 0; i < 200; ++i) {
    RecognitionState r;
    r.mu = {s.next_uniform(-3.0, 3.0), s.next_uniform(-3.0, 3.0)};
    r.p = {s.next_uniform(0.5, 20.0), s.next_uniform(0.5, 20.0)};
    const double c = s.next_uniform(-4.0, 4.0);
    const double du = net_utility(r, Action::Accelerate, c, m).net_utility -
                      net_utility(r, Action::Rest, c, m).net_utility;
    CHECK(action_probability(r, c, m) ==
          doctest::Approx(logistic(m.beta * du)).epsilon(1e-9));
  }

  // with the accelerate option less certain, its info gain is larger, so
  // raising curiosity must raise P(accelerate)
  RecognitionState unc;
  unc.mu = {0.0, 0.0};
  unc.p = {50.0, 1.0};
  double prev = 0.0;
  for (double c = -3.0; c <= 3.0; c += 0.5) {
    const double pa = action_probability(unc, c, m);
    if (c > -3.0) CHECK(pa > prev);
    prev = pa;
  }
}

TEST_CASE("recognition update: worked values") {
  ModelParams m = params();
  m.alpha = 0.05;
  auto st = state(0.0, 5.0);
  const auto next = update_recognition(st, Action::Rest, 1, m);
  CHECK(next.p[0] == doctest::Approx(3.02778).epsilon(1e-5));
  CHECK(next.mu[0] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(next.p[1] == doctest::Approx(2.77778).epsilon(1e-5));
  CHECK(next.mu[1] == doctest::Approx(0.0).scale(1.0));

  // no drift, unchosen precision survives
  const auto frozen = update_recognition(st, Action::Rest, 1, params(1e-9));
  CHECK(frozen.p[1] == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("chosen precision equals the curvature of the one-step log posterior") {
  // Independent oracle: the posterior over the chosen latent cause after one
  // outcome is N(mu_pred, K) * Bernoulli(f(w))^o(...)^(1-o); the update's
  // precision must match the negative second derivative of its log at the
  // predicted mean, evaluated numerically.
  const ModelParams m = params();
  rng::Stream s(19, rng::Tag::Misc, 7);
  for (int i = 0; i < 50; ++i) {
    const double mu = s.next_uniform(-2.0, 2.0);
    const double p = s.next_uniform(0.5, 20.0);
    const int o = s.next_u64() & 1;
    const double K = m.sigma_w * m.sigma_w + 1.0 / p;

    auto log_post = [&](double w) {
      const double f = logistic(w);
      return -0.5 * (w - mu) * (w - mu) / K + o * std::log(f) +
             (1 - o) * std::log(1.0 - f);
    };
    const double h = 1e-5;
    const double curvature =
        -(log_post(mu + h) - 2.0 * log_post(mu) + log_post(mu - h)) / (h * h);

    const auto next = update_recognition(state(mu, p), Action::Accelerate, o, m);
    CHECK(next.p[1] == doctest::Approx(curvature).epsilon(1e-4));
  }
}

TEST_CASE("confidence: worked values and symmetry") {
  CHECK(confidence(state(0.0, 1.0), Action::Rest) ==
        doctest::Approx(16.0).epsilon(1e-9));
  rng::Stream s(23, rng::Tag::Misc, 8);
  for (int i = 0; i < 100; ++i) {
    const double mu = s.next_uniform(0.0, 4.0);
    const double p = s.next_uniform(0.2, 30.0);
    CHECK(confidence(state(mu, p), Action::Rest) ==
          doctest::Approx(confidence(state(-mu, p), Action::Rest)).epsilon(1e-9));
    CHECK(confidence(state(mu, 2.0 * p), Action::Rest) ==
          doctest::Approx(2.0 * confidence(state(mu, p), Action::Rest))
              .epsilon(1e-9));
  }
}

TEST_CASE("confidence grows for the repeatedly chosen option and decays for the other") {
  const ModelParams m = params();
  rng::Stream outcomes(29, rng::Tag::Misc, 9);
  RecognitionState st = state(0.0, 1.0);
  std::vector<double> chosen, unchosen;
  chosen.push_back(confidence(st, Action::Rest));
  unchosen.push_back(confidence(st, Action::Accelerate));
  for (int t = 0; t < 12; ++t) {
    const int o = outcomes.next_uniform() < 0.8 ? 1 : 0;
    st = update_recognition(st, Action::Rest, o, m);
    // unchosen confidence falls on every single diffusion step
    CHECK(confidence(st, Action::Accelerate) < unchosen.back());
    chosen.push_back(confidence(st, Action::Rest));
    unchosen.push_back(confidence(st, Action::Accelerate));
  }
  auto mean = [](const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s / (hi - lo);
  };
  CHECK(mean(chosen, 8, chosen.size()) > mean(chosen, 0, 5));
  CHECK(confidence(st, Action::Rest) > chosen.front());
}

TEST_CASE("model params validate") {
  ModelParams m;
  CHECK_NOTHROW(m.validate());
  ModelParams bad = m;
  bad.alpha = 0.0;
  CHECK_THROWS(bad.validate());
  bad = m;
  bad.p0 = 1.0;
  CHECK_THROWS(bad.validate());
  bad = m;
  bad.sigma_w = 0.0;
  CHECK_THROWS(bad.validate());
  bad = m;
  bad.beta = -0.1;
  CHECK_THROWS(bad.validate());
}
