// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "error.hpp"
#include "gait_metrics.hpp"
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

StepEvent ev(Side foot, std::size_t frame, Vec3 p, WalkPhase phase = WalkPhase::kOutbound) {
  return {foot, frame, p, phase};
}

std::array<PhaseAxes, 2> axes_along_z() {
  return {{{WalkPhase::kOutbound, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}},
           {WalkPhase::kInbound, {0.0, 0.0, -1.0}, {-1.0, 0.0, 0.0}}}};
}

SubtaskEvent event_at(std::size_t start, std::size_t end) {
  SubtaskEvent e;
  e.peak.start_frame = start;
  e.peak.peak_frame = (start + end) / 2;
  e.peak.end_frame = end;
  return e;
}

}  // namespace

TEST_SUITE("gait_metrics") {

TEST_CASE("step times between opposite feet") {
  const std::vector<StepEvent> e{ev(Side::kLeft, 10, {}), ev(Side::kRight, 25, {})};
  const auto st = step_times(e, 30.0);
  REQUIRE(st.size() == 1);
  CHECK(st[0] == doctest::Approx(0.5));
  CHECK(step_times({ev(Side::kLeft, 10, {})}, 30.0).empty());
  // Same-foot neighbours and phase changes break the chain.
  const std::vector<StepEvent> mixed{ev(Side::kLeft, 10, {}), ev(Side::kLeft, 20, {}),
                                     ev(Side::kRight, 35, {}),
                                     ev(Side::kLeft, 80, {}, WalkPhase::kInbound),
                                     ev(Side::kRight, 95, {}, WalkPhase::kInbound)};
  const auto mt = step_times(mixed, 30.0);
  REQUIRE(mt.size() == 2);
  CHECK(mt[0] == doctest::Approx(0.5));
  CHECK(mt[1] == doctest::Approx(0.5));
}

TEST_CASE("length and width are projections") {
  const std::vector<StepEvent> lateral{ev(Side::kLeft, 0, {0.1, 0.0, 1.0}),
                                       ev(Side::kRight, 15, {-0.05, 0.0, 1.0})};
  const auto lw = step_length_width(lateral, axes_along_z());
  CHECK(lw.lengths[0] == doctest::Approx(0.0));
  CHECK(lw.widths[0] == doctest::Approx(0.15));

  const std::vector<StepEvent> out{ev(Side::kLeft, 0, {0.05, 0.0, 1.0}),
                                   ev(Side::kRight, 15, {-0.05, 0.0, 1.6})};
  std::vector<StepEvent> back = out;
  for (auto& e : back) e.phase = WalkPhase::kInbound;
  const auto a = step_length_width(out, axes_along_z());
  const auto b = step_length_width(back, axes_along_z());
  CHECK(a.lengths[0] == doctest::Approx(0.6));
  CHECK(b.lengths[0] == doctest::Approx(0.6));
  CHECK(a.widths[0] == doctest::Approx(0.1));
  CHECK(b.widths[0] == doctest::Approx(0.1));

  auto bad = axes_along_z();
  bad[0].anterior = {0.0, 0.0, 0.0};
  CHECK(kind_of([&] { step_length_width(out, bad); }) == ErrorKind::kDirection);
}

TEST_CASE("summaries") {
  const auto flat = summarize({0.6, 0.6, 0.6}, {Side::kLeft, Side::kRight, Side::kLeft});
  CHECK(flat.mean == doctest::Approx(0.6));
  REQUIRE(flat.sd.has_value());
  CHECK(*flat.sd == doctest::Approx(0.0));
  REQUIRE(flat.symmetry.has_value());
  CHECK(*flat.symmetry == doctest::Approx(0.0));

  const auto two = summarize({0.5, 0.7}, {Side::kLeft, Side::kRight});
  CHECK(*two.sd == doctest::Approx(0.14142135623730953));
  CHECK(*two.symmetry == doctest::Approx(0.2 / 0.6 * 100.0));

  const auto one = summarize({0.5}, {Side::kLeft});
  CHECK_FALSE(one.sd.has_value());
  CHECK_FALSE(one.symmetry.has_value());
  CHECK(kind_of([] { summarize({}, {}); }) == ErrorKind::kInsufficientSteps);
}

TEST_CASE("standing still yields no steps") {
  std::vector<JointFrame> frames(150);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frames[i].frame_index = i;
    frames[i].positions[7] = {0.1, 0.08, 0.0};
    frames[i].positions[8] = {-0.1, 0.08, 0.0};
  }
  const TrialRecording trial("P01", 1, 30.0, frames);
  SubtaskSegmentation seg;
  seg.sts1 = event_at(5, 20);
  seg.turn1 = event_at(60, 80);
  seg.turn2 = event_at(110, 125);
  seg.sts2 = event_at(130, 145);
  CHECK(kind_of([&] { detect_steps(trial, seg); }) == ErrorKind::kInsufficientSteps);
}

TEST_CASE("detected steps match the scripted contacts") {
  synth::SynthConfig c;
  const synth::SynthTrial syn = synth::generate(c);
  const SegmentationResult r = segment_trial(syn.trial, AnalysisOptions{});
  const auto events = detect_steps(syn.trial, r.segmentation);
  REQUIRE(events.size() >= 4);
  for (const StepEvent& e : events) {
    bool matched = false;
    for (const synth::TruthStep& s : syn.truth.steps) {
      if (s.foot == e.foot && s.phase == e.phase && std::abs(static_cast<int>(s.frame) - static_cast<int>(e.frame)) <= 1) {
        matched = true;
      }
    }
    CHECK_MESSAGE(matched, "unmatched event at frame ", e.frame);
    CHECK_FALSE((e.frame > r.segmentation.turn1.peak.start_frame && e.frame < r.segmentation.turn1.peak.end_frame));
    CHECK_FALSE((e.frame > r.segmentation.turn2.peak.start_frame && e.frame < r.segmentation.turn2.peak.end_frame));
  }
  const auto windows = walking_windows(r.segmentation);
  for (const synth::TruthStep& s : syn.truth.steps) {
    const auto [lo, hi] = windows[static_cast<std::size_t>(s.phase)];
    if (s.frame < lo + 2 || s.frame + 2 > hi) continue;
    bool found = false;
    for (const StepEvent& e : events) {
      if (e.foot == s.foot && std::abs(static_cast<int>(s.frame) - static_cast<int>(e.frame)) <= 1) found = true;
    }
    CHECK_MESSAGE(found, "missed scripted step at frame ", s.frame);
  }
  for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].frame > events[i - 1].frame);
}

TEST_CASE("synthetic gait parameters are recovered") {
  synth::SynthConfig c;
  c.step_length = 0.60;
  c.step_width = 0.10;
  c.cadence = 2.0;
  const synth::SynthTrial syn = synth::generate(c);
  const SegmentationResult r = segment_trial(syn.trial, AnalysisOptions{});
  const GaitMetrics m = compute_gait_metrics(syn.trial, r.segmentation);
  CHECK(std::abs(m.step_length.mean - 0.60) / 0.60 < 0.05);
  CHECK(std::abs(m.step_width.mean - 0.10) / 0.10 < 0.05);
  for (const StepRecord& s : m.steps) {
    CHECK(std::abs(s.time_s - 0.5) <= 1.0 / 30.0 + 1e-9);
    CHECK(s.time_s > 0.0);
  }
  CHECK(m.n_steps() == m.step_length.values.size());
  CHECK(*m.step_length.sd >= 0.0);
}

TEST_CASE("phase axes follow the net hip displacement") {
  synth::SynthConfig c;
  const synth::SynthTrial syn = synth::generate(c);
  const SegmentationResult r = segment_trial(syn.trial, AnalysisOptions{});
  const auto axes = phase_axes(syn.trial, r.segmentation, JointIndexTable{});
  CHECK(axes[0].anterior.z == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(axes[1].anterior.z == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(axes[0].lateral.x == doctest::Approx(1.0).epsilon(1e-3));
}

}  // TEST_SUITE
