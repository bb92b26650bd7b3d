// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "gait_metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "error.hpp"
#include "signal.hpp"

namespace gaitug {

const char* to_string(WalkPhase phase) noexcept {
  return phase == WalkPhase::kOutbound ? "outbound" : "inbound";
}

std::array<std::pair<std::size_t, std::size_t>, 2> walking_windows(const SubtaskSegmentation& seg) {
  return {{{seg.sts1.peak.end_frame, seg.turn1.peak.start_frame},
           {seg.turn1.peak.end_frame, seg.turn2.peak.start_frame}}};
}

std::vector<StepEvent> detect_steps(const TrialRecording& trial, const SubtaskSegmentation& seg,
                                    const AnalysisOptions& options) {
  const double fps = trial.fps();
  const auto kernel = signal::make_gaussian_kernel(options.filter.sigma);
  const auto min_distance = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(options.step_min_interval_s * fps + 0.5)));
  const auto windows = walking_windows(seg);

  std::vector<StepEvent> events;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto phase = static_cast<WalkPhase>(w);
    const auto [lo, hi] = windows[w];
    std::size_t kept = 0;
    if (hi > lo && hi - lo + 1 >= 3) {
      for (Side foot : {Side::kLeft, Side::kRight}) {
        const std::size_t joint = options.joints.resolve(
            foot == Side::kLeft ? JointName::kLeftAnkle : JointName::kRightAnkle);
        const auto track = trial.joint_track(joint);
        signal::Samples height(track.size());
        for (std::size_t i = 0; i < track.size(); ++i) height[i] = track[i].y;
        const auto smoothed = signal::smooth(height, kernel);
        const std::span<const double> window(smoothed.data() + lo, hi - lo + 1);

        signal::PeakParams params;
        try {
          params = signal::adaptive_peak_params(window, signal::Polarity::kNegative, options.peaks);
        } catch (const Error&) {
          continue;  // flat ankle: no contacts on this foot
        }
        // Gait is periodic, so spacing comes from the contact interval and
        // shallow wobbles are rejected by prominence.
        params.min_distance = min_distance;
        params.min_prominence = options.peaks.height_k * signal::sample_sd(window);
        for (const signal::Peak& p : signal::find_peaks(window, params, signal::Polarity::kNegative)) {
          const std::size_t frame = p.peak_frame + lo;
          events.push_back({foot, frame, track[frame], phase});
          ++kept;
        }
      }
    }
    if (kept < 2) {
      throw Error(ErrorKind::kInsufficientSteps,
                  fmt::format("{} walking phase (frames {}..{}) has {} step event(s); at least 2 "
                              "required",
                              to_string(phase), lo, hi, kept));
    }
  }
  std::sort(events.begin(), events.end(), [](const StepEvent& a, const StepEvent& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.foot < b.foot;
  });
  return events;
}

std::array<PhaseAxes, 2> phase_axes(const TrialRecording& trial, const SubtaskSegmentation& seg,
                                    const JointIndexTable& joints) {
  const auto left = trial.joint_track(joints.resolve(JointName::kLeftHip));
  const auto right = trial.joint_track(joints.resolve(JointName::kRightHip));
  const auto windows = walking_windows(seg);
  std::array<PhaseAxes, 2> axes{};
  for (std::size_t w = 0; w < 2; ++w) {
    const auto [lo, hi] = windows[w];
    if (hi <= lo) {
      throw Error(ErrorKind::kDirection,
                  fmt::format("{} walking phase is empty", to_string(static_cast<WalkPhase>(w))));
    }
    const Vec3 start = 0.5 * (left[lo] + right[lo]);
    const Vec3 end = 0.5 * (left[hi] + right[hi]);
    const Vec3 d = (end - start).horizontal();
    const double len = d.norm();
    if (!(len > 1e-9)) {
      throw Error(ErrorKind::kDirection,
                  fmt::format("{} walking phase has no net hip displacement",
                              to_string(static_cast<WalkPhase>(w))));
    }
    axes[w].phase = static_cast<WalkPhase>(w);
    axes[w].anterior = (1.0 / len) * d;
    axes[w].lateral = kUp.cross(axes[w].anterior);
  }
  return axes;
}

namespace {

template <typename Fn>
void for_each_pair(const std::vector<StepEvent>& events, Fn&& fn) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    const StepEvent& a = events[i - 1];
    const StepEvent& b = events[i];
    if (a.phase != b.phase || a.foot == b.foot) continue;
    fn(a, b);
  }
}

}  // namespace

std::vector<double> step_times(const std::vector<StepEvent>& events, double fps) {
  std::vector<double> out;
  for_each_pair(events, [&](const StepEvent& a, const StepEvent& b) {
    out.push_back(static_cast<double>(b.frame - a.frame) / fps);
  });
  return out;
}

LengthWidth step_length_width(const std::vector<StepEvent>& events,
                              const std::array<PhaseAxes, 2>& axes) {
  for (const PhaseAxes& ax : axes) {
    if (!(std::abs(ax.anterior.norm() - 1.0) < 1e-9)) {
      throw Error(ErrorKind::kDirection, "anterior axis is not unit length");
    }
  }
  LengthWidth out;
  for_each_pair(events, [&](const StepEvent& a, const StepEvent& b) {
    const PhaseAxes& ax = axes[static_cast<std::size_t>(b.phase)];
    const Vec3 d = b.ankle_position - a.ankle_position;
    out.lengths.push_back(std::abs(d.dot(ax.anterior)));
    out.widths.push_back(std::abs(d.dot(ax.lateral)));
  });
  return out;
}

std::vector<StepRecord> step_records(const std::vector<StepEvent>& events, double fps,
                                     const std::array<PhaseAxes, 2>& axes) {
  const auto times = step_times(events, fps);
  const auto lw = step_length_width(events, axes);
  std::vector<StepRecord> out;
  std::size_t k = 0;
  for_each_pair(events, [&](const StepEvent&, const StepEvent& b) {
    out.push_back({b.phase, b.foot, times[k], lw.lengths[k], lw.widths[k]});
    ++k;
  });
  return out;
}

MetricSummary summarize(const std::vector<double>& values, const std::vector<Side>& feet) {
  if (values.empty()) throw Error(ErrorKind::kInsufficientSteps, "no steps to summarize");
  MetricSummary s;
  s.values = values;
  s.mean = signal::mean(values);
  if (values.size() >= 2) s.sd = signal::sample_sd(values);
  std::vector<double> left, right;
  for (std::size_t i = 0; i < values.size() && i < feet.size(); ++i) {
    (feet[i] == Side::kLeft ? left : right).push_back(values[i]);
  }
  if (!left.empty() && !right.empty()) {
    const double ml = signal::mean(left);
    const double mr = signal::mean(right);
    const double denom = 0.5 * (ml + mr);
    if (denom != 0.0) s.symmetry = std::abs(ml - mr) / denom * 100.0;
  }
  return s;
}

GaitMetrics compute_gait_metrics(const TrialRecording& trial, const SubtaskSegmentation& seg,
                                 const AnalysisOptions& options) {
  const auto events = detect_steps(trial, seg, options);
  const auto axes = phase_axes(trial, seg, options.joints);
  GaitMetrics m;
  m.steps = step_records(events, trial.fps(), axes);
  if (m.steps.empty()) {
    throw Error(ErrorKind::kInsufficientSteps, "no opposite-foot step pairs found");
  }
  std::vector<double> st, sl, sw;
  std::vector<Side> feet;
  for (const StepRecord& r : m.steps) {
    st.push_back(r.time_s);
    sl.push_back(r.length_m);
    sw.push_back(r.width_m);
    feet.push_back(r.foot);
  }
  m.step_time = summarize(st, feet);
  m.step_length = summarize(sl, feet);
  m.step_width = summarize(sw, feet);
  return m;
}

}  // namespace gaitug
