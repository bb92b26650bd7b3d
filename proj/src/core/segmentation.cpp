// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmentation.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "error.hpp"

namespace gaitug {

namespace {

using signal::Samples;

struct BodyTracks {
  std::vector<Vec3> hip_mid;
  std::vector<Vec3> shoulder_mid;
  std::vector<Vec3> left_hip;
  std::vector<Vec3> right_hip;
};

BodyTracks body_tracks(const TrialRecording& trial, const JointIndexTable& joints) {
  BodyTracks t;
  t.left_hip = trial.joint_track(joints.resolve(JointName::kLeftHip));
  t.right_hip = trial.joint_track(joints.resolve(JointName::kRightHip));
  const auto ls = trial.joint_track(joints.resolve(JointName::kLeftShoulder));
  const auto rs = trial.joint_track(joints.resolve(JointName::kRightShoulder));
  const std::size_t n = trial.size();
  t.hip_mid.resize(n);
  t.shoulder_mid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.hip_mid[i] = 0.5 * (t.left_hip[i] + t.right_hip[i]);
    t.shoulder_mid[i] = 0.5 * (ls[i] + rs[i]);
  }
  return t;
}

double farthest_horizontal_distance(const std::vector<Vec3>& track, Vec3* direction) {
  double best = 0.0;
  Vec3 dir{0.0, 0.0, 1.0};
  for (const Vec3& p : track) {
    const Vec3 d = (p - track.front()).horizontal();
    const double len = d.norm();
    if (len > best) {
      best = len;
      dir = (1.0 / len) * d;
    }
  }
  if (direction) *direction = dir;
  return best;
}

constexpr double kStationaryRadius = 0.05;  // metres

SubtaskEvent detect_event(std::span<const double> sig, signal::Polarity polarity,
                          std::size_t offset, double fps, const signal::AdaptiveRule& rule,
                          const char* name) {
  signal::PeakParams params;
  try {
    params = signal::adaptive_peak_params(sig, polarity, rule);
  } catch (const Error& e) {
    throw Error(ErrorKind::kSegmentation, fmt::format("{} not detected: {}", name, e.what()));
  }
  params.max_peaks = 1;
  const auto peaks = signal::find_peaks(sig, params, polarity);
  if (peaks.empty()) {
    throw Error(ErrorKind::kSegmentation,
                fmt::format("{} not detected: no peak above threshold", name));
  }
  SubtaskEvent ev;
  ev.peak = peaks.front();
  ev.peak.start_frame += offset;
  ev.peak.peak_frame += offset;
  ev.peak.end_frame += offset;
  ev.duration_s = static_cast<double>(ev.peak.end_frame - ev.peak.start_frame) / fps;
  if (!(ev.duration_s > 0.0)) {
    throw Error(ErrorKind::kSegmentation, fmt::format("{} has zero duration", name));
  }
  return ev;
}

}  // namespace

Samples smooth_and_filter(std::span<const double> samples, double fps,
                          const FilterOptions& filter) {
  const auto kernel = signal::make_gaussian_kernel(filter.sigma);
  const signal::ButterworthLowPass butter(filter.butter_order, filter.butter_cutoff_hz, fps);
  return signal::butterworth_filtfilt(signal::smooth(samples, kernel), butter);
}

Vec3 provisional_anterior_axis(const TrialRecording& trial, const JointIndexTable& joints) {
  const BodyTracks t = body_tracks(trial, joints);
  Vec3 dir;
  const double dist = farthest_horizontal_distance(t.hip_mid, &dir);
  return dist > kStationaryRadius ? dir : Vec3{0.0, 0.0, 1.0};
}

CompositeSignals compute_signals(const TrialRecording& trial, const JointIndexTable& joints,
                                 const FilterOptions& filter, std::optional<Vec3> anterior) {
  const std::size_t n = trial.size();
  const double fps = trial.fps();
  const signal::ButterworthLowPass butter(filter.butter_order, filter.butter_cutoff_hz, fps);
  if (n < 3 * butter.warmup_length() || n < 3) {
    throw Error(ErrorKind::kDomain,
                fmt::format("trial of {} frames is shorter than the filter warm-up ({} frames)",
                            n, 3 * butter.warmup_length()));
  }

  const BodyTracks t = body_tracks(trial, joints);
  CompositeSignals out;
  if (anterior) {
    const Vec3 h = anterior->horizontal();
    if (!(h.norm() > 1e-9)) throw Error(ErrorKind::kDirection, "anterior axis has no horizontal extent");
    out.anterior = (1.0 / h.norm()) * h;
  } else {
    out.anterior = provisional_anterior_axis(trial, joints);
  }
  out.lateral = kUp.cross(out.anterior);

  Samples hip_height(n), shoulder_offset(n), trunk(n), hip_line_raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 trunk_vec = t.shoulder_mid[i] - t.hip_mid[i];
    hip_height[i] = t.hip_mid[i].y;
    shoulder_offset[i] = trunk_vec.dot(out.anterior);
    trunk[i] = std::atan2(trunk_vec.dot(out.anterior), trunk_vec.dot(kUp));
    hip_line_raw[i] = (t.right_hip[i] - t.left_hip[i]).dot(out.lateral);
  }

  out.vertical_hip_velocity = smooth_and_filter(signal::derivative(hip_height, fps), fps, filter);
  out.shoulder_anterior_velocity =
      smooth_and_filter(signal::derivative(shoulder_offset, fps), fps, filter);
  out.trunk_angular_velocity = smooth_and_filter(signal::derivative(trunk, fps), fps, filter);
  out.sts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.sts[i] = kStsHipWeight * out.vertical_hip_velocity[i] +
                 kStsShoulderWeight * out.shoulder_anterior_velocity[i] +
                 kStsTrunkWeight * out.trunk_angular_velocity[i];
  }
  out.trunk_angle = std::move(trunk);
  out.hip_line = smooth_and_filter(hip_line_raw, fps, filter);
  out.hip_line_velocity = signal::derivative(out.hip_line, fps);
  return out;
}

SubtaskSegmentation segment(const TrialRecording& trial, const CompositeSignals& signals,
                            const signal::AdaptiveRule& rule) {
  const double fps = trial.fps();
  if (signals.sts.size() != trial.size() || signals.hip_line_velocity.size() != trial.size()) {
    throw Error(ErrorKind::kStructure, "signals do not match the trial length");
  }
  SubtaskSegmentation seg;
  seg.sts1 = detect_event(signals.sts, signal::Polarity::kPositive, 0, fps, rule, "sts1");
  seg.sts2 = detect_event(signals.sts, signal::Polarity::kNegative, 0, fps, rule, "sts2");
  if (seg.sts1.peak.peak_frame >= seg.sts2.peak.peak_frame) {
    throw Error(ErrorKind::kSegmentation,
                fmt::format("chronology violated: sts1 peak at frame {} is not before sts2 peak "
                            "at frame {}",
                            seg.sts1.peak.peak_frame, seg.sts2.peak.peak_frame));
  }

  const std::size_t lo = seg.sts1.peak.end_frame;
  const std::size_t hi = seg.sts2.peak.start_frame;
  if (hi <= lo || hi - lo + 1 < 3) {
    throw Error(ErrorKind::kSegmentation,
                fmt::format("no room for turns between sts1 end (frame {}) and sts2 start "
                            "(frame {})",
                            lo, hi));
  }
  const std::span<const double> window(signals.hip_line_velocity.data() + lo, hi - lo + 1);
  seg.turn1 = detect_event(window, signal::Polarity::kPositive, lo, fps, rule, "turn1");
  seg.turn2 = detect_event(window, signal::Polarity::kNegative, lo, fps, rule, "turn2");

  const std::size_t order[] = {seg.sts1.peak.peak_frame, seg.turn1.peak.peak_frame,
                               seg.turn2.peak.peak_frame, seg.sts2.peak.peak_frame};
  for (std::size_t i = 1; i < 4; ++i) {
    if (order[i] < order[i - 1]) {
      throw Error(ErrorKind::kSegmentation,
                  fmt::format("chronology violated: peaks at frames {}, {}, {}, {} are not "
                              "ordered sts1 <= turn1 <= turn2 <= sts2",
                              order[0], order[1], order[2], order[3]));
    }
  }
  return seg;
}

SegmentationResult segment_trial(const TrialRecording& trial, const AnalysisOptions& options) {
  trial.require_analyzable();
  const JointIndexTable& joints = options.joints;
  SegmentationResult first;
  first.signals = compute_signals(trial, joints, options.filter);
  first.segmentation = segment(trial, first.signals, options.peaks);

  const BodyTracks t = body_tracks(trial, joints);
  const double reach = farthest_horizontal_distance(t.hip_mid, nullptr);
  const std::size_t a = first.segmentation.sts1.peak.end_frame;
  const std::size_t b = first.segmentation.turn1.peak.start_frame;
  if (b <= a) return first;
  const Vec3 walk = (t.hip_mid[b] - t.hip_mid[a]).horizontal();
  if (walk.norm() < 0.5 * reach || walk.norm() < kStationaryRadius) return first;

  try {
    SegmentationResult second;
    second.signals = compute_signals(trial, joints, options.filter, walk);
    second.segmentation = segment(trial, second.signals, options.peaks);
    return second;
  } catch (const Error&) {
    return first;
  }
}

}  // namespace gaitug
