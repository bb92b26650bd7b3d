// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// Whole-trial invariants on synthetic trials.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gait_metrics.hpp"
#include "segmentation.hpp"
#include "signal.hpp"
#include "synth.hpp"
#include "trials.hpp"

using namespace gaitug;

namespace {

struct Run {
  SegmentationResult seg;
  GaitMetrics metrics;
};

Run run(const TrialRecording& trial) {
  Run r;
  r.seg = segment_trial(trial, AnalysisOptions{});
  r.metrics = compute_gait_metrics(trial, r.seg.segmentation, AnalysisOptions{});
  return r;
}

std::vector<TrialRecording> sample_trials(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<TrialRecording> out;
  for (int i = 0; i < count; ++i) out.push_back(synth::generate(test::random_config(rng, 0.002)).trial);
  return out;
}

void check_same_frames(const SubtaskEvent& a, const SubtaskEvent& b) {
  CHECK(a.peak.start_frame == b.peak.start_frame);
  CHECK(a.peak.peak_frame == b.peak.peak_frame);
  CHECK(a.peak.end_frame == b.peak.end_frame);
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double scale, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(scale * a[i]).epsilon(tol));
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("horizontal rotation leaves step metrics unchanged") {
  for (const auto& trial : sample_trials(21, 6)) {
    const Run base = run(trial);
    for (double angle : {0.3, std::numbers::pi / 2, 2.5, -1.1}) {
      const Run rot = run(test::rotated(trial, angle));
      check_same_frames(base.seg.segmentation.sts1, rot.seg.segmentation.sts1);
      check_same_frames(base.seg.segmentation.turn2, rot.seg.segmentation.turn2);
      check_close(base.metrics.step_length.values, rot.metrics.step_length.values, 1.0, 1e-6);
      check_close(base.metrics.step_width.values, rot.metrics.step_width.values, 1.0, 1e-6);
      check_close(base.metrics.step_time.values, rot.metrics.step_time.values, 1.0, 1e-12);
    }
  }
}

TEST_CASE("uniform scaling scales lengths and keeps times") {
  for (const auto& trial : sample_trials(22, 6)) {
    const Run base = run(trial);
    for (double s : {0.6, 1.7}) {
      const TrialRecording big = test::scaled(trial, s);
      const Run r = run(big);
      // Exact given the same subtask frames.
      const GaitMetrics fixed = compute_gait_metrics(big, base.seg.segmentation, AnalysisOptions{});
      check_close(base.metrics.step_time.values, fixed.step_time.values, 1.0, 1e-12);
      check_close(base.metrics.step_length.values, fixed.step_length.values, s, 1e-6);
      check_close(base.metrics.step_width.values, fixed.step_width.values, s, 1e-6);
      // End to end, a one-frame STS shift moves the walking-window axes slightly.
      check_close(base.metrics.step_time.values, r.metrics.step_time.values, 1.0, 1e-12);
      check_close(base.metrics.step_length.values, r.metrics.step_length.values, s, 1e-2);
      check_close(base.metrics.step_width.values, r.metrics.step_width.values, s, 1e-2);

      const CompositeSignals sa = compute_signals(trial, JointIndexTable{}, {}, base.seg.signals.anterior);
      const CompositeSignals sb = compute_signals(big, JointIndexTable{}, {}, base.seg.signals.anterior);
      check_close(sa.hip_line_velocity, sb.hip_line_velocity, s, 1e-6);
      check_close(sa.vertical_hip_velocity, sb.vertical_hip_velocity, s, 1e-6);
      check_close(sa.shoulder_anterior_velocity, sb.shoulder_anterior_velocity, s, 1e-6);
      check_close(sa.trunk_angle, sb.trunk_angle, 1.0, 1e-9);
      check_same_frames(base.seg.segmentation.turn1, r.seg.segmentation.turn1);
      check_same_frames(base.seg.segmentation.turn2, r.seg.segmentation.turn2);
      for (auto pick : {&SubtaskSegmentation::sts1, &SubtaskSegmentation::sts2}) {
        const auto& a = (base.seg.segmentation.*pick).peak;
        const auto& b = (r.seg.segmentation.*pick).peak;
        CHECK(std::abs(static_cast<long>(a.start_frame) - static_cast<long>(b.start_frame)) <= 1);
        CHECK(std::abs(static_cast<long>(a.end_frame) - static_cast<long>(b.end_frame)) <= 1);
      }
    }
  }
}

TEST_CASE("time reversal swaps the transfers") {
  for (const auto& trial : sample_trials(23, 8)) {
    const auto fwd = segment_trial(trial, AnalysisOptions{}).segmentation;
    const auto rev = segment_trial(test::time_reversed(trial), AnalysisOptions{}).segmentation;
    const auto last = static_cast<long>(trial.size()) - 1;
    CHECK(std::abs(last - static_cast<long>(fwd.sts1.peak.peak_frame) -
                   static_cast<long>(rev.sts2.peak.peak_frame)) <= 1);
    CHECK(std::abs(last - static_cast<long>(fwd.sts2.peak.peak_frame) -
                   static_cast<long>(rev.sts1.peak.peak_frame)) <= 1);
  }
}

TEST_CASE("negated hip line swaps the turns and keeps their intervals") {
  for (const auto& trial : sample_trials(24, 8)) {
    const auto r = segment_trial(trial, AnalysisOptions{});
    const auto& seg = r.segmentation;
    const std::size_t lo = seg.sts1.peak.end_frame;
    const std::size_t hi = seg.sts2.peak.start_frame;
    std::vector<double> window(r.signals.hip_line_velocity.begin() + static_cast<long>(lo),
                               r.signals.hip_line_velocity.begin() + static_cast<long>(hi) + 1);
    std::vector<double> negated(window);
    for (double& v : negated) v = -v;
    const auto one = [](std::span<const double> w, signal::Polarity p) {
      auto params = signal::adaptive_peak_params(w, p);
      params.max_peaks = 1;
      return signal::find_peaks(w, params, p).at(0);
    };
    const signal::Peak as_turn1 = one(negated, signal::Polarity::kPositive);
    const signal::Peak as_turn2 = one(negated, signal::Polarity::kNegative);
    CHECK(as_turn1.start_frame + lo == seg.turn2.peak.start_frame);
    CHECK(as_turn1.peak_frame + lo == seg.turn2.peak.peak_frame);
    CHECK(as_turn1.end_frame + lo == seg.turn2.peak.end_frame);
    CHECK(as_turn2.start_frame + lo == seg.turn1.peak.start_frame);
    CHECK(as_turn2.peak_frame + lo == seg.turn1.peak.peak_frame);
    CHECK(as_turn2.end_frame + lo == seg.turn1.peak.end_frame);
  }
}

TEST_CASE("doubling the frame rate by repetition") {
  for (const auto& trial : sample_trials(25, 6)) {
    const Run base = run(trial);
    const Run twice = run(test::frame_doubled(trial));
    const double frame = 1.0 / trial.fps();
    CHECK(twice.metrics.step_time.mean == doctest::Approx(base.metrics.step_time.mean).epsilon(frame));
    CHECK(std::abs(twice.metrics.step_time.mean - base.metrics.step_time.mean) <= frame);
    CHECK(twice.metrics.step_length.mean == doctest::Approx(base.metrics.step_length.mean).epsilon(0.02));
    CHECK(twice.metrics.step_width.mean == doctest::Approx(base.metrics.step_width.mean).epsilon(0.02));
  }
}

}  // TEST_SUITE
