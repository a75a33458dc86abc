#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "curio/pipeline.hpp"
#include "curio/sim.hpp"
#include "doctest.h"

using namespace curio;

namespace {

RawSession flat_session(double duration_s, double speed = 1.0,
                        double eda = 2.0) {
  RawSession s;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * 4.0));
  for (std::size_t i = 0; i < n; ++i) {
    s.time_s.push_back(i * 0.25);
    s.speed_mps.push_back(speed);
    s.eda_us.push_back(eda);
  }
  s.participant_id = "p";
  return s;
}

}  // namespace

TEST_CASE("trial segmentation") {
  SUBCASE("240 s at 4 Hz gives 30 full windows") {
    const auto w = segment_trials(flat_session(240.0, 1.0), 8.0);
    REQUIRE(w.size() == 30);
    for (std::size_t k = 0; k < w.size(); ++k) {
      CHECK(w[k].index == static_cast<int>(k));
      CHECK(w[k].mean_speed == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(w[k].msdv == 0.0);
    }
  }
  SUBCASE("trailing remainder is dropped") {
    CHECK(segment_trials(flat_session(239.0), 8.0).size() == 29);
  }
  SUBCASE("shorter than one window") {
    CHECK_THROWS_AS(segment_trials(flat_session(7.0), 8.0),
                    std::invalid_argument);
  }
  SUBCASE("bad window") {
    CHECK_THROWS_AS(segment_trials(flat_session(64.0), 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("msdv") {
  SUBCASE("constant speed has zero jerk") {
    std::vector<double> t, v;
    for (int i = 0; i < 33; ++i) {
      t.push_back(i * 0.25);
      v.push_back(2.5);
    }
    CHECK(msdv(v, t) == 0.0);
  }
  SUBCASE("uniform acceleration over the window") {
    // a = 0.25 m/s^2 for 8 s: sqrt(0.0625 * 8) = sqrt(0.5)
    std::vector<double> t, v;
    for (int i = 0; i <= 32; ++i) {
      t.push_back(i * 0.25);
      v.push_back(0.25 * t.back());
    }
    CHECK(msdv(v, t) == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(msdv(v, t) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  }
  SUBCASE("unit acceleration for one second") {
    std::vector<double> t, v;
    for (int i = 0; i <= 4; ++i) {
      t.push_back(i * 0.25);
      v.push_back(t.back());
    }
    CHECK(msdv(v, t) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("errors") {
    std::vector<double> t{0.0, 0.25}, v{1.0};
    CHECK_THROWS_AS(msdv(v, t), std::invalid_argument);
    std::vector<double> one{0.0};
    CHECK_THROWS_AS(msdv(one, one), std::invalid_argument);
  }
}

TEST_CASE("action labeling") {
  CHECK(label_action(1.0) == Action::Rest);
  CHECK(label_action(1.5) == Action::Accelerate);
  CHECK(label_action(1.3) == Action::Accelerate);  // boundary accelerates
  CHECK(label_action(1.2999) == Action::Rest);
  CHECK(label_action(1.5, 2.0) == Action::Rest);
  CHECK_THROWS_AS(label_action(-0.1), std::invalid_argument);
}

TEST_CASE("outcome labeling") {
  CHECK(label_outcome(0.30) == 0);
  CHECK(label_outcome(0.70) == 1);
  CHECK(label_outcome(0.45) == 1);  // boundary is sick
  CHECK(label_outcome(0.4499) == 0);
  CHECK(label_outcome(0.5, 0.6) == 0);
  CHECK_THROWS_AS(label_outcome(-0.1), std::invalid_argument);
}

TEST_CASE("scr extraction") {
  SUBCASE("constant input has no phasic component") {
    std::vector<double> eda(240, 2.0);
    const auto phasic = extract_scr(eda, 4.0);
    REQUIRE(phasic.size() == eda.size());
    for (double v : phasic) CHECK(v == 0.0);
  }
  SUBCASE("a single pulse is recovered near its amplitude") {
    const double rate = 4.0, amp = 0.3, onset = 10.0;
    std::vector<double> eda;
    for (int i = 0; i < 240; ++i) {
      const double t = i / rate;
      eda.push_back(2.0 + amp * bateman_kernel(t - onset));
    }
    const auto phasic = extract_scr(eda, rate);
    REQUIRE(phasic.size() == eda.size());
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < phasic.size(); ++i)
      if (phasic[i] > peak) {
        peak = phasic[i];
        arg = i;
      }
    CHECK(peak > 0.9 * amp * 0.9);  // within ~10% of the pulse height
    CHECK(peak < amp * 1.05);
    const double peak_t = arg / rate;
    CHECK(peak_t > onset);
    CHECK(peak_t < onset + 3.0);
    // quiet before the pulse
    for (std::size_t i = 0; i < static_cast<std::size_t>((onset - 3.0) * rate);
         ++i)
      CHECK(phasic[i] < 1e-9);
  }
  SUBCASE("errors") {
    std::vector<double> too_short(16, 2.0);
    CHECK_THROWS_AS(extract_scr(too_short, 4.0), std::invalid_argument);
    std::vector<double> ok(64, 2.0);
    CHECK_THROWS_AS(extract_scr(ok, 0.0), std::invalid_argument);
  }
}

TEST_CASE("scr normalization") {
  std::vector<double> ident{0.0, 0.5, 1.0};
  const auto a = scr_to_probability(ident);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a[2] == 1.0);

  std::vector<double> shifted{2.0, 3.0, 4.0};
  const auto b = scr_to_probability(shifted);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b[2] == 1.0);

  std::vector<double> constant{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(scr_to_probability(constant), std::invalid_argument);
  std::vector<double> empty;
  CHECK_THROWS_AS(scr_to_probability(empty), std::invalid_argument);
}

TEST_CASE("ssq scoring") {
  const auto m = ssq(10.0, 49.89);
  CHECK(m.score == doctest::Approx(39.89).epsilon(1e-12));
  CHECK(m.severity == Severity::Moderate);
  CHECK_FALSE(m.negative_flagged);

  CHECK(ssq(0.0, 0.0).severity == Severity::Negligible);
  CHECK(ssq(0.0, 45.0).severity == Severity::High);

  const auto neg = ssq(20.0, 15.0);
  CHECK(neg.severity == Severity::Negligible);
  CHECK(neg.negative_flagged);

  // class boundaries are inclusive on the left class
  CHECK(ssq(0.0, 5.0).severity == Severity::Negligible);
  CHECK(ssq(0.0, 5.1).severity == Severity::Low);
  CHECK(ssq(0.0, 20.0).severity == Severity::Low);
  CHECK(ssq(0.0, 20.1).severity == Severity::Moderate);
  CHECK(ssq(0.0, 40.0).severity == Severity::Moderate);
  CHECK(ssq(0.0, 40.1).severity == Severity::High);

  CHECK(to_string(Severity::Moderate) == "moderate");
  CHECK_THROWS_AS(ssq(0.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("raw session validation") {
  auto good = flat_session(64.0);
  CHECK_NOTHROW(good.validate());

  auto uneven = good;
  uneven.eda_us.pop_back();
  CHECK_THROWS_AS(uneven.validate(), std::invalid_argument);

  auto backwards = good;
  std::swap(backwards.time_s[3], backwards.time_s[4]);
  CHECK_THROWS_AS(backwards.validate(), std::invalid_argument);

  auto negative = good;
  negative.speed_mps[5] = -1.0;
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);

  auto slow = good;
  for (std::size_t i = 0; i < slow.time_s.size(); ++i) slow.time_s[i] = i * 0.5;
  CHECK_THROWS_AS(slow.validate(), std::invalid_argument);

  auto bad_task = good;
  bad_task.task_index = 0;
  CHECK_THROWS_AS(bad_task.validate(), std::invalid_argument);
}

TEST_CASE("full session processing wires the labels together") {
  SimConfig sc;
  sc.trials = 30;
  sc.seed = 23;
  sc.schedule = EnvSchedule::default_protocol(sc.trials);
  const auto trace = simulate_recu(sc);
  const auto synth = synth_session(trace);

  RawSession session;
  session.time_s = synth.time_s;
  session.speed_mps = synth.speed_mps;
  session.eda_us = synth.eda_us;
  session.participant_id = "p07";
  session.task_index = 3;

  const auto recs = process_session(session);
  REQUIRE(recs.size() == 30);
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto& r = recs[k];
    CHECK(r.participant_id == "p07");
    CHECK(r.task_index == 3);
    CHECK(r.trial == static_cast<int>(k));
    CHECK(r.action == label_action(r.mean_speed));
    CHECK(r.outcome == label_outcome(r.msdv));
    CHECK(r.scr_mean >= 0.0);
    CHECK(r.sick_prob_truth >= 0.0);
    CHECK(r.sick_prob_truth <= 1.0);
    lo = std::min(lo, r.sick_prob_truth);
    hi = std::max(hi, r.sick_prob_truth);
  }
  // min-max normalization pins the extremes
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
}
