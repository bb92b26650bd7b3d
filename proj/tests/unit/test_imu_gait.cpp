// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "imu_gait.hpp"
#include "synth.hpp"

using namespace gaitug;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected gaitug::Error");
  return ErrorKind::kIo;
}

// Half-rectified gyro bursts per foot, half a cycle apart, with a contact
// spike 0.1 s after each burst peak.
ImuRecording alternating_bursts(double seconds, double gyro_scale = 200.0, double freq = 1.2) {
  ImuRecording rec;
  rec.participant_id = "P01";
  rec.fps = 60.0;
  const auto n = static_cast<std::size_t>(seconds * rec.fps);
  const double w = 2.0 * std::numbers::pi * freq;
  for (Side side : {Side::kLeft, Side::kRight}) {
    ImuChannels& ch = side == Side::kLeft ? rec.left : rec.right;
    const double phase = side == Side::kLeft ? 0.0 : std::numbers::pi;
    for (auto& c : ch.accel) c.assign(n, 0.0);
    for (auto& c : ch.gyro) c.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / rec.fps;
      ch.gyro[2][i] = gyro_scale * std::max(0.0, std::sin(w * t - phase));
      const double since_peak = std::fmod(t - (0.25 + phase / (2.0 * std::numbers::pi)) / freq + 10.0 / freq, 1.0 / freq);
      const double d = (since_peak - 0.1) / 0.02;
      ch.accel[2][i] = 9.81 + 12.0 * std::exp(-0.5 * d * d);
    }
  }
  return rec;
}

ImuRecording shifted(const ImuRecording& rec, std::size_t k) {
  ImuRecording out = rec;
  for (ImuChannels* ch : {&out.left, &out.right}) {
    for (auto& c : ch->gyro) c.insert(c.begin(), k, c.front());
    for (auto& c : ch->accel) c.insert(c.begin(), k, c.front());
  }
  return out;
}

}  // namespace

TEST_SUITE("imu_gait") {

TEST_CASE("alternating bursts give the cadence step time") {
  const ImuStepSeries s = imu_step_times(alternating_bursts(10.0));
  REQUIRE(s.step_times.size() >= 20);
  CHECK_FALSE(s.non_alternating());
  for (double st : s.step_times) CHECK(std::abs(st - 1.0 / 2.4) <= 1.0 / 60.0 + 1e-12);
  CHECK(trial_mean_step_time(s) == doctest::Approx(1.0 / 2.4).epsilon(0.01));
  for (std::size_t i = 1; i < s.merged.size(); ++i) CHECK(s.merged[i].sample > s.merged[i - 1].sample);
}

TEST_CASE("flat channels and uncorroborated swings are detection errors") {
  ImuRecording flat = alternating_bursts(5.0);
  for (ImuChannels* ch : {&flat.left, &flat.right}) {
    for (auto& c : ch->gyro) c.assign(c.size(), 0.0);
    for (auto& c : ch->accel) c.assign(c.size(), 9.81);
  }
  CHECK(kind_of([&] { imu_step_times(flat); }) == ErrorKind::kDetection);

  ImuRecording no_contact = alternating_bursts(5.0);
  for (auto& c : no_contact.right.accel) c.assign(c.size(), 9.81);
  CHECK(kind_of([&] { imu_step_times(no_contact); }) == ErrorKind::kDetection);

  CHECK(kind_of([] { imu_step_times(alternating_bursts(1.5)); }) == ErrorKind::kDomain);
}

TEST_CASE("corroboration window is configurable") {
  AnalysisOptions narrow;
  narrow.imu_window_s = 0.05;  // contact spikes trail the swing peak by 0.1 s
  CHECK(kind_of([&] { imu_step_times(alternating_bursts(5.0), narrow); }) == ErrorKind::kDetection);
}

TEST_CASE("same-foot neighbours are flagged and skipped") {
  ImuRecording rec = alternating_bursts(6.0);
  // Silence one right burst so two left events become neighbours.
  for (std::size_t i = 150; i < 200; ++i) rec.right.gyro[2][i] = 0.0;
  const ImuStepSeries s = imu_step_times(rec);
  CHECK(s.non_alternating());
  CHECK(s.same_foot_pairs == 1);
  CHECK(s.step_times.size() + s.same_foot_pairs + 1 == s.merged.size());
  for (double st : s.step_times) CHECK(std::abs(st - 1.0 / 2.4) <= 1.0 / 60.0 + 1e-12);
}

// At 1.25 Hz each burst maximum falls on a sample, so no two samples tie.
TEST_CASE("gyro scaling leaves events unchanged") {
  const ImuStepSeries a = imu_step_times(alternating_bursts(8.0, 200.0, 1.25));
  for (double s : {0.01, 0.5, 3.0, 1000.0}) {
    const ImuStepSeries b = imu_step_times(alternating_bursts(8.0, 200.0 * s, 1.25));
    CHECK(a.left_events == b.left_events);
    CHECK(a.right_events == b.right_events);
  }
}

TEST_CASE("shifting the stream shifts the events") {
  const ImuRecording rec = alternating_bursts(8.0, 200.0, 1.25);
  const ImuStepSeries a = imu_step_times(rec);
  for (std::size_t k : {1u, 7u, 33u}) {
    const ImuStepSeries b = imu_step_times(shifted(rec, k));
    REQUIRE(a.left_events.size() == b.left_events.size());
    REQUIRE(a.right_events.size() == b.right_events.size());
    for (std::size_t i = 0; i < a.left_events.size(); ++i) CHECK(b.left_events[i] == a.left_events[i] + k);
    for (std::size_t i = 0; i < a.right_events.size(); ++i) CHECK(b.right_events[i] == a.right_events[i] + k);
    CHECK(a.step_times == b.step_times);
  }
}

TEST_CASE("synthetic insole contacts") {
  synth::SynthConfig c;
  const synth::SynthTrial syn = synth::generate(c);
  const ImuStepSeries s = imu_step_times(syn.imu);
  std::size_t matched = 0;
  for (const ImuStepEvent& e : s.merged) {
    for (const synth::TruthImuContact& t : syn.truth.imu_contacts) {
      if (t.foot == e.foot && std::abs(static_cast<int>(t.swing_peak_sample) - static_cast<int>(e.sample)) <= 1) {
        ++matched;
        break;
      }
    }
  }
  CHECK(matched == s.merged.size());
  CHECK(s.merged.size() >= syn.truth.steps.size());
}

TEST_CASE("trial mean step time") {
  ImuStepSeries s;
  s.step_times = {0.5, 0.5, 0.6};
  CHECK(trial_mean_step_time(s) == doctest::Approx(0.5333333333333333));
  s.step_times = {0.48};
  CHECK(trial_mean_step_time(s) == doctest::Approx(0.48));
  s.step_times.clear();
  CHECK(kind_of([&] { trial_mean_step_time(s); }) == ErrorKind::kPrecondition);
}

}  // TEST_SUITE
