// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "format.hpp"

namespace gaitug::synth {

namespace {

using std::numbers::pi;

constexpr double kGravity = 9.81;
constexpr double kSwingBurstS = 2.0 * kSwingToContactS;
constexpr double kContactSpikeSigmaS = 0.02;

// Cosine ease on [0, 1]; derivative is a half-sine.
double ease(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return 0.5 * (1.0 - std::cos(pi * u));
}

// Rise profile on [0, span] for span = width + ramp: velocity ramps up and
// down with half-sine edges around a plateau, so its half-maximum interval is
// [ramp/2, ramp/2 + width]. Returns the completed fraction.
double plateau_ease(double t, double width, double ramp) {
  const auto ramp_area = [ramp](double u) { return ramp * (0.5 * u - std::sin(pi * u) / (2.0 * pi)); };
  t = std::clamp(t, 0.0, width + ramp);
  double area;
  if (t <= ramp) {
    area = ramp_area(t / ramp);
  } else if (t <= width) {
    area = 0.5 * ramp + (t - ramp);
  } else {
    area = 0.5 * ramp + (width - ramp) + (t - width) - ramp_area((t - width) / ramp);
  }
  return area / width;
}

// Travel profile with zero velocity at both ends and unit mean velocity.
double travel(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u - std::sin(2.0 * pi * u) / (2.0 * pi);
}

Vec3 heading(double yaw) { return {std::sin(yaw), 0.0, std::cos(yaw)}; }
// Body's left when facing heading(yaw).
Vec3 left_of(double yaw) { return kUp.cross(heading(yaw)); }

double side_sign(Side s) { return s == Side::kLeft ? 1.0 : -1.0; }
Side other(Side s) { return s == Side::kLeft ? Side::kRight : Side::kLeft; }

struct FootSegment {
  double t0;
  double t1;
  Vec3 p0;  // horizontal ankle position, y ignored
  Vec3 p1;
};

// Piecewise foot path: at rest between segments, airborne during them. The
// foot rises and descends over a fixed time so every contact has the same
// local shape regardless of swing length; long swings plateau at clearance.
class FootPath {
 public:
  FootPath(Vec3 rest, double lift_s) : rest_(rest), lift_s_(lift_s) {}

  void swing_to(double t0, double t1, Vec3 target) {
    segments_.push_back({t0, t1, last(), target});
  }
  Vec3 last() const { return segments_.empty() ? rest_ : segments_.back().p1; }

  // Horizontal position and lift as a fraction of clearance.
  std::pair<Vec3, double> at(double t) const {
    Vec3 pos = rest_;
    for (const FootSegment& s : segments_) {
      if (t >= s.t1) {
        pos = s.p1;
        continue;
      }
      if (t <= s.t0) break;
      const double u = (t - s.t0) / (s.t1 - s.t0);
      const double lift = std::min(ease((t - s.t0) / lift_s_), ease((s.t1 - t) / lift_s_));
      return {s.p0 + ease(u) * (s.p1 - s.p0), lift};
    }
    return {pos, 0.0};
  }

 private:
  Vec3 rest_;
  double lift_s_;
  std::vector<FootSegment> segments_;
};

struct Contact {
  Side foot;
  double time;
  Vec3 position;
  WalkPhase phase;
  bool walking;
};

struct Timeline {
  double t_sts1 = 0.0;  // STS-1 motion start
  double m1 = 0.0;      // STS-1 motion span
  double r1 = 0.0;      // STS-1 velocity ramp
  double t_walk_out = 0.0;
  double t_turn1 = 0.0;
  double t_walk_in = 0.0;
  double t_turn2 = 0.0;
  double t_sts2 = 0.0;
  double m2 = 0.0;
  double r2 = 0.0;
  double t_total = 0.0;
  double step_time = 0.0;
  std::size_t steps = 0;
};

Timeline make_timeline(const SynthConfig& c) {
  Timeline tl;
  tl.step_time = 1.0 / c.cadence;
  tl.steps = c.steps_per_phase();
  tl.t_sts1 = c.lead_s;
  tl.r1 = std::min(c.sts_ramp_s, c.sts1_duration);
  tl.m1 = c.sts1_duration + tl.r1;
  // Walks start on the frame grid, so contacts fall on samples whenever a
  // step lasts a whole number of frames.
  const auto on_grid = [&c](double t) { return std::ceil(t * c.fps - 1e-9) / c.fps; };
  tl.t_walk_out = on_grid(tl.t_sts1 + tl.m1);
  tl.t_turn1 = tl.t_walk_out + static_cast<double>(tl.steps) * tl.step_time;
  tl.t_walk_in = on_grid(tl.t_turn1 + c.turn1_duration);
  tl.t_turn2 = tl.t_walk_in + static_cast<double>(tl.steps) * tl.step_time;
  tl.t_sts2 = tl.t_turn2 + c.turn2_duration;
  tl.r2 = std::min(c.sts_ramp_s, c.sts2_duration);
  tl.m2 = c.sts2_duration + tl.r2;
  tl.t_total = tl.t_sts2 + tl.m2 + c.trailing_s;
  return tl;
}

struct Pose {
  Vec3 hip_mid;
  double yaw;
  double trunk_angle;  // signed sagittal angle, positive forward
};

Pose pose_at(const SynthConfig& c, const Timeline& tl, double t) {
  const double walk = static_cast<double>(tl.steps) * c.step_length;
  const double walk_span = static_cast<double>(tl.steps) * tl.step_time;
  const double seated = c.standing_hip_height - c.sts_rise;
  Pose p{};
  double z = 0.0;
  if (t >= tl.t_walk_out && t < tl.t_turn1) {
    z = walk * travel((t - tl.t_walk_out) / walk_span);
  } else if (t >= tl.t_turn1 && t < tl.t_walk_in) {
    z = walk;
  } else if (t >= tl.t_walk_in && t < tl.t_turn2) {
    z = walk * (1.0 - travel((t - tl.t_walk_in) / walk_span));
  }
  double y = c.standing_hip_height;
  p.trunk_angle = 0.0;
  if (t < tl.t_walk_out) {
    const double e = plateau_ease(t - tl.t_sts1, c.sts1_duration, tl.r1);
    y = seated + c.sts_rise * e;
    p.trunk_angle = -c.seated_recline_rad * (1.0 - e);
  } else if (t >= tl.t_sts2) {
    const double e = plateau_ease(t - tl.t_sts2, c.sts2_duration, tl.r2);
    y = c.standing_hip_height - c.sts_rise * e;
    p.trunk_angle = -c.seated_recline_rad * e;
  }
  p.hip_mid = {0.0, y, z};
  if (t < tl.t_turn1) {
    p.yaw = 0.0;
  } else if (t < tl.t_walk_in) {
    p.yaw = pi * std::min(1.0, (t - tl.t_turn1) / c.turn1_duration);
  } else if (t < tl.t_turn2) {
    p.yaw = pi;
  } else if (t < tl.t_sts2) {
    p.yaw = pi + pi * (t - tl.t_turn2) / c.turn2_duration;
  } else {
    p.yaw = 2.0 * pi;
  }
  return p;
}

struct Gait {
  FootPath left;
  FootPath right;
  std::vector<Contact> contacts;  // every landing, chronological
  FootPath& foot(Side s) { return s == Side::kLeft ? left : right; }
};

Gait script_gait(const SynthConfig& c, const Timeline& tl) {
  const double half_width = 0.5 * c.step_width;
  Gait g{FootPath(half_width * left_of(0.0), tl.step_time),
         FootPath(-half_width * left_of(0.0), tl.step_time), {}};
  std::vector<Contact>& contacts = g.contacts;
  const Vec3 turn_centre{0.0, 0.0, static_cast<double>(tl.steps) * c.step_length};
  // Lift-off times. A foot leaving rest lifts one stride (two step times)
  // before its contact, like every other swing.
  double last_time[2] = {tl.t_walk_out - tl.step_time, tl.t_walk_out};
  auto land = [&](Side foot, double t, Vec3 target, WalkPhase phase, bool walking) {
    auto& lt = last_time[static_cast<int>(foot)];
    g.foot(foot).swing_to(lt, t, target);
    lt = t;
    contacts.push_back({foot, t, target, phase, walking});
  };

  // Outbound: left leads, each contact lands one step length past the last.
  Side foot = Side::kLeft;
  for (std::size_t k = 1; k <= tl.steps; ++k) {
    const Vec3 target = static_cast<double>(k) * c.step_length * heading(0.0) +
                        side_sign(foot) * half_width * left_of(0.0);
    land(foot, tl.t_walk_out + static_cast<double>(k) * tl.step_time, target,
         WalkPhase::kOutbound, true);
    foot = other(foot);
  }
  // Turn 1: the trailing foot lands mid-turn, the last stepping foot lands at
  // the end of the turn and doubles as the first inbound contact.
  const Side pivot = other(foot);
  const Side trailing = foot;
  const double mid1 = tl.t_turn1 + 0.5 * c.turn1_duration;
  land(trailing, mid1, turn_centre + side_sign(trailing) * half_width * left_of(0.5 * pi),
       WalkPhase::kOutbound, false);
  land(pivot, tl.t_walk_in, turn_centre + side_sign(pivot) * half_width * left_of(pi),
       WalkPhase::kInbound, true);
  last_time[static_cast<int>(trailing)] = std::max(mid1, tl.t_walk_in - tl.step_time);

  foot = trailing;
  for (std::size_t k = 1; k <= tl.steps; ++k) {
    const Vec3 target = turn_centre + static_cast<double>(k) * c.step_length * heading(pi) +
                        side_sign(foot) * half_width * left_of(pi);
    land(foot, tl.t_walk_in + static_cast<double>(k) * tl.step_time, target,
         WalkPhase::kInbound, true);
    foot = other(foot);
  }
  const Side pivot2 = other(foot);
  const Side trailing2 = foot;
  const double mid2 = tl.t_turn2 + 0.5 * c.turn2_duration;
  land(trailing2, mid2, side_sign(trailing2) * half_width * left_of(1.5 * pi),
       WalkPhase::kInbound, false);
  land(pivot2, tl.t_sts2, side_sign(pivot2) * half_width * left_of(2.0 * pi),
       WalkPhase::kInbound, false);
  std::sort(contacts.begin(), contacts.end(),
            [](const Contact& a, const Contact& b) { return a.time < b.time; });
  return g;
}

enum Smpl : std::size_t {
  kPelvis = 0, kLHip = 1, kRHip = 2, kSpine1 = 3, kLKnee = 4, kRKnee = 5, kSpine2 = 6,
  kLAnkle = 7, kRAnkle = 8, kSpine3 = 9, kLFoot = 10, kRFoot = 11, kNeck = 12,
  kLCollar = 13, kRCollar = 14, kHead = 15, kLShoulder = 16, kRShoulder = 17,
  kLElbow = 18, kRElbow = 19, kLWrist = 20, kRWrist = 21, kLHand = 22, kRHand = 23,
};

std::array<Vec3, kJointCount> skeleton(const SynthConfig& c, const Pose& pose, Vec3 left_ankle,
                                       Vec3 right_ankle) {
  const Vec3 f = heading(pose.yaw);
  const Vec3 l = left_of(pose.yaw);
  const Vec3 trunk =
      c.trunk_length * (std::sin(pose.trunk_angle) * f + std::cos(pose.trunk_angle) * kUp);
  const Vec3 hip = pose.hip_mid;
  const Vec3 shoulder = hip + trunk;
  std::array<Vec3, kJointCount> j{};
  j[kPelvis] = hip;
  j[kLHip] = hip + 0.5 * c.hip_width * l;
  j[kRHip] = hip - 0.5 * c.hip_width * l;
  j[kSpine1] = hip + 0.25 * trunk;
  j[kSpine2] = hip + 0.5 * trunk;
  j[kSpine3] = hip + 0.75 * trunk;
  j[kNeck] = hip + 1.1 * trunk;
  j[kHead] = hip + 1.3 * trunk;
  j[kLShoulder] = shoulder + 0.5 * c.shoulder_width * l;
  j[kRShoulder] = shoulder - 0.5 * c.shoulder_width * l;
  j[kLCollar] = shoulder + 0.2 * c.shoulder_width * l;
  j[kRCollar] = shoulder - 0.2 * c.shoulder_width * l;
  j[kLAnkle] = left_ankle;
  j[kRAnkle] = right_ankle;
  j[kLKnee] = 0.5 * (j[kLHip] + left_ankle) + 0.05 * f;
  j[kRKnee] = 0.5 * (j[kRHip] + right_ankle) + 0.05 * f;
  j[kLFoot] = left_ankle + 0.12 * f - 0.05 * kUp;
  j[kRFoot] = right_ankle + 0.12 * f - 0.05 * kUp;
  for (int s = 0; s < 2; ++s) {
    const Vec3 base = j[s == 0 ? kLShoulder : kRShoulder];
    j[s == 0 ? kLElbow : kRElbow] = base - 0.28 * kUp;
    j[s == 0 ? kLWrist : kRWrist] = base - 0.52 * kUp;
    j[s == 0 ? kLHand : kRHand] = base - 0.60 * kUp + 0.03 * f;
  }
  return j;
}

std::size_t to_index(double t, double rate, std::size_t n) {
  const double i = std::floor(t * rate + 0.5);
  return static_cast<std::size_t>(std::clamp(i, 0.0, static_cast<double>(n - 1)));
}

TruthInterval interval(double start, double end, double duration, double fps, std::size_t n) {
  TruthInterval iv;
  iv.start_s = start;
  iv.end_s = end;
  iv.peak_s = 0.5 * (start + end);
  iv.duration_s = duration;
  iv.start_frame = to_index(start, fps, n);
  iv.end_frame = to_index(end, fps, n);
  iv.peak_frame = to_index(iv.peak_s, fps, n);
  return iv;
}

ImuRecording make_imu(const SynthConfig& c, const Timeline& tl, const std::vector<Contact>& contacts) {
  ImuRecording rec;
  rec.participant_id = c.participant_id;
  rec.trial_index = c.trial_index;
  rec.fps = c.imu_fps;
  rec.vertical_axis = 2;
  const auto n = static_cast<std::size_t>(std::floor(tl.t_total * c.imu_fps)) + 1;
  std::mt19937_64 rng(c.seed ^ 0x9E3779B97F4A7C15ULL);
  std::normal_distribution<double> gyro_noise(0.0, 1.0);
  for (Side s : {Side::kLeft, Side::kRight}) {
    ImuChannels& ch = s == Side::kLeft ? rec.left : rec.right;
    for (auto& v : ch.accel) v.assign(n, 0.0);
    for (auto& v : ch.gyro) v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / c.imu_fps;
      double gz = 0.0;
      double az = kGravity;
      for (const Contact& ct : contacts) {
        if (ct.foot != s) continue;
        const double u = (t - (ct.time - kSwingBurstS)) / kSwingBurstS;
        if (u > 0.0 && u < 1.0) gz += c.imu_gyro_amplitude * std::sin(pi * u);
        const double d = (t - ct.time) / kContactSpikeSigmaS;
        az += c.imu_accel_spike * std::exp(-0.5 * d * d);
      }
      ch.gyro[2][i] = gz;
      ch.accel[2][i] = az;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < 3; ++a) {
        if (c.imu_gyro_noise_sd > 0.0) ch.gyro[a][i] += c.imu_gyro_noise_sd * gyro_noise(rng);
        if (c.imu_accel_noise_sd > 0.0) ch.accel[a][i] += c.imu_accel_noise_sd * gyro_noise(rng);
      }
    }
  }
  return rec;
}

}  // namespace

void SynthConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfig, fmt::format("{} must be positive, got {}", name, v));
    }
  };
  positive(fps, "fps");
  positive(step_length, "step_length");
  positive(step_width, "step_width");
  positive(cadence, "cadence");
  positive(sts1_duration, "sts1_duration");
  positive(sts2_duration, "sts2_duration");
  positive(turn1_duration, "turn1_duration");
  positive(turn2_duration, "turn2_duration");
  positive(walkway_length, "walkway_length");
  positive(sts_rise, "sts_rise");
  positive(sts_ramp_s, "sts_ramp_s");
  positive(standing_hip_height, "standing_hip_height");
  positive(hip_width, "hip_width");
  positive(shoulder_width, "shoulder_width");
  positive(trunk_length, "trunk_length");
  positive(foot_clearance, "foot_clearance");
  positive(ankle_height, "ankle_height");
  positive(imu_fps, "imu_fps");
  positive(imu_gyro_amplitude, "imu_gyro_amplitude");
  positive(imu_accel_spike, "imu_accel_spike");
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfig, fmt::format("{} must be non-negative, got {}", name, v));
    }
  };
  non_negative(noise_sd, "noise_sd");
  non_negative(lead_s, "lead_s");
  non_negative(trailing_s, "trailing_s");
  non_negative(seated_recline_rad, "seated_recline_rad");
  non_negative(imu_gyro_noise_sd, "imu_gyro_noise_sd");
  non_negative(imu_accel_noise_sd, "imu_accel_noise_sd");
  if (walkway_length < step_length) {
    throw Error(ErrorKind::kConfig,
                fmt::format("walkway_length {} m is shorter than one step ({} m)", walkway_length,
                            step_length));
  }
  if (sts_rise >= standing_hip_height) {
    throw Error(ErrorKind::kConfig, "sts_rise must be below standing_hip_height");
  }
  if (trial_index < 1) throw Error(ErrorKind::kConfig, "trial_index must be at least 1");
  if (participant_id.empty()) throw Error(ErrorKind::kConfig, "participant_id is empty");
}

std::size_t SynthConfig::steps_per_phase() const {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(walkway_length / step_length + 0.5)));
}

SynthTrial generate(const SynthConfig& c) {
  c.validate();
  const Timeline tl = make_timeline(c);
  Gait gait = script_gait(c, tl);
  const auto n = static_cast<std::size_t>(std::floor(tl.t_total * c.fps)) + 1;

  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<JointFrame> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / c.fps;
    const Pose pose = pose_at(c, tl, t);
    Vec3 ankles[2];
    for (Side s : {Side::kLeft, Side::kRight}) {
      const auto [pos, lift] = gait.foot(s).at(t);
      ankles[static_cast<int>(s)] = {pos.x, c.ankle_height + c.foot_clearance * lift, pos.z};
    }
    frames[i].frame_index = i;
    frames[i].positions = skeleton(c, pose, ankles[0], ankles[1]);
    if (c.noise_sd > 0.0) {
      for (Vec3& p : frames[i].positions) {
        p.x += c.noise_sd * noise(rng);
        p.y += c.noise_sd * noise(rng);
        p.z += c.noise_sd * noise(rng);
      }
    }
  }

  GroundTruth truth;
  truth.fps = c.fps;
  truth.n_frames = n;
  truth.step_length = c.step_length;
  truth.step_width = c.step_width;
  truth.step_time = tl.step_time;
  const double d1 = c.sts1_duration;
  const double d2 = c.sts2_duration;
  truth.sts1 = interval(tl.t_sts1 + 0.5 * tl.r1, tl.t_sts1 + 0.5 * tl.r1 + d1, d1, c.fps, n);
  truth.sts2 = interval(tl.t_sts2 + 0.5 * tl.r2, tl.t_sts2 + 0.5 * tl.r2 + d2, d2, c.fps, n);
  truth.turn1 = interval(tl.t_turn1, tl.t_turn1 + c.turn1_duration, c.turn1_duration, c.fps, n);
  truth.turn2 = interval(tl.t_turn2, tl.t_sts2, c.turn2_duration, c.fps, n);
  for (const Contact& ct : gait.contacts) {
    if (ct.walking) {
      TruthStep step;
      step.foot = ct.foot;
      step.phase = ct.phase;
      step.time_s = ct.time;
      step.frame = to_index(ct.time, c.fps, n);
      step.ankle_position = {ct.position.x, c.ankle_height, ct.position.z};
      truth.steps.push_back(step);
    }
    const auto n_imu = static_cast<std::size_t>(std::floor(tl.t_total * c.imu_fps)) + 1;
    truth.imu_contacts.push_back({ct.foot, ct.time, to_index(ct.time, c.imu_fps, n_imu),
                                  to_index(ct.time - kSwingToContactS, c.imu_fps, n_imu),
                                  ct.walking});
  }

  ImuRecording imu = make_imu(c, tl, gait.contacts);
  TrialRecording trial(c.participant_id, c.trial_index, c.fps, std::move(frames));
  return {std::move(trial), std::move(imu), std::move(truth)};
}

namespace {

nlohmann::ordered_json interval_json(const TruthInterval& iv) {
  nlohmann::ordered_json j;
  j["start_frame"] = iv.start_frame;
  j["peak_frame"] = iv.peak_frame;
  j["end_frame"] = iv.end_frame;
  j["start_s"] = round_sig9(iv.start_s);
  j["peak_s"] = round_sig9(iv.peak_s);
  j["end_s"] = round_sig9(iv.end_s);
  j["duration_s"] = round_sig9(iv.duration_s);
  return j;
}

}  // namespace

std::string format_ground_truth(const GroundTruth& t) {
  nlohmann::ordered_json j;
  j["format"] = "gaitug-truth";
  j["version"] = 1;
  j["fps"] = round_sig9(t.fps);
  j["n_frames"] = t.n_frames;
  j["step_length_m"] = round_sig9(t.step_length);
  j["step_width_m"] = round_sig9(t.step_width);
  j["step_time_s"] = round_sig9(t.step_time);
  j["sts1"] = interval_json(t.sts1);
  j["turn1"] = interval_json(t.turn1);
  j["turn2"] = interval_json(t.turn2);
  j["sts2"] = interval_json(t.sts2);
  auto& steps = j["steps"] = nlohmann::ordered_json::array();
  for (const TruthStep& s : t.steps) {
    steps.push_back({{"foot", to_string(s.foot)},
                     {"phase", to_string(s.phase)},
                     {"frame", s.frame},
                     {"time_s", round_sig9(s.time_s)},
                     {"ankle", {round_sig9(s.ankle_position.x), round_sig9(s.ankle_position.y),
                                round_sig9(s.ankle_position.z)}}});
  }
  auto& imu = j["imu_contacts"] = nlohmann::ordered_json::array();
  for (const TruthImuContact& c : t.imu_contacts) {
    imu.push_back({{"foot", to_string(c.foot)},
                   {"time_s", round_sig9(c.time_s)},
                   {"contact_sample", c.contact_sample},
                   {"swing_peak_sample", c.swing_peak_sample},
                   {"walking", c.walking}});
  }
  return j.dump(2) + "\n";
}

Cohort make_cohort(const CohortConfig& cc) {
  if (cc.participants < 1 || cc.trials_per_participant < 1) {
    throw Error(ErrorKind::kConfig, "participants and trials must be at least 1");
  }
  cc.base.validate();
  std::mt19937_64 rng(cc.base.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Cohort cohort;
  if (cc.participants == 1 && cc.trials_per_participant == 1) {
    cohort.trials.push_back(cc.base);
    cohort.covariates.push_back({cc.base.participant_id, std::nullopt, std::nullopt, std::nullopt,
                                 std::nullopt});
    return cohort;
  }
  for (int p = 0; p < cc.participants; ++p) {
    const std::string id = fmt::format("P{:03d}", p + 1);
    const double frailty = z(rng);
    const double sl = std::clamp(cc.base.step_length - cc.between_step_length_sd * frailty +
                                     0.5 * cc.between_step_length_sd * z(rng),
                                 0.35, 0.85);
    const double sw = std::clamp(cc.base.step_width + cc.between_step_width_sd * z(rng), 0.05, 0.2);
    const double cadence = std::clamp(cc.base.cadence - cc.between_cadence_sd * frailty, 1.5, 2.5);
    const double sts1 =
        std::clamp(cc.base.sts1_duration + cc.between_sts_sd * frailty, 0.8, 2.0);
    const double sts2 =
        std::clamp(cc.base.sts2_duration + cc.between_sts_sd * frailty, 0.8, 2.0);

    FallRiskCovariates cov;
    cov.participant_id = id;
    cov.age = std::round(72.0 + 5.0 * z(rng));
    const int steadi = static_cast<int>(std::lround(4.0 + 2.5 * frailty + z(rng)));
    cov.steadi = std::clamp(steadi, 0, kSteadiMax);
    if (unit(rng) < cc.steadi_missing_rate) cov.steadi.reset();
    const int fes = static_cast<int>(std::lround(12.0 + 3.0 * frailty + 1.5 * z(rng)));
    cov.short_fes_i = std::clamp(fes, kShortFesMin, kShortFesMax);
    cov.btracks = std::round((20.0 + 5.0 * frailty + 2.0 * z(rng)) * 10.0) / 10.0;
    if (*cov.btracks < 1.0) cov.btracks = 1.0;
    cohort.covariates.push_back(cov);

    for (int t = 1; t <= cc.trials_per_participant; ++t) {
      SynthConfig c = cc.base;
      c.participant_id = id;
      c.trial_index = t;
      c.step_length = std::clamp(sl + cc.within_step_length_sd * z(rng), 0.3, 0.9);
      c.step_width = sw;
      c.cadence = cadence;
      c.sts1_duration = sts1;
      c.sts2_duration = sts2;
      c.seed = rng();
      cohort.trials.push_back(c);
    }
  }
  return cohort;
}

CohortConfig parse_cohort_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, fmt::format("synth config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "synth config must be a JSON object");
  CohortConfig cc;
  SynthConfig& c = cc.base;
  struct Field {
    const char* name;
    double* target;
  };
  const Field fields[] = {
      {"fps", &c.fps},
      {"step_length", &c.step_length},
      {"step_width", &c.step_width},
      {"cadence", &c.cadence},
      {"sts1_duration", &c.sts1_duration},
      {"sts2_duration", &c.sts2_duration},
      {"turn1_duration", &c.turn1_duration},
      {"turn2_duration", &c.turn2_duration},
      {"walkway_length", &c.walkway_length},
      {"noise_sd", &c.noise_sd},
      {"lead_s", &c.lead_s},
      {"trailing_s", &c.trailing_s},
      {"sts_rise", &c.sts_rise},
      {"sts_ramp_s", &c.sts_ramp_s},
      {"imu_fps", &c.imu_fps},
      {"imu_gyro_noise_sd", &c.imu_gyro_noise_sd},
      {"imu_accel_noise_sd", &c.imu_accel_noise_sd},
      {"between_step_length_sd", &cc.between_step_length_sd},
      {"between_step_width_sd", &cc.between_step_width_sd},
      {"between_cadence_sd", &cc.between_cadence_sd},
      {"between_sts_sd", &cc.between_sts_sd},
      {"within_step_length_sd", &cc.within_step_length_sd},
      {"steadi_missing_rate", &cc.steadi_missing_rate},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find_if(std::begin(fields), std::end(fields),
                                 [&](const Field& f) { return key == f.name; });
    if (it != std::end(fields)) {
      if (!value.is_number()) throw Error(ErrorKind::kConfig, fmt::format("{} must be a number", key));
      *it->target = value.get<double>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw Error(ErrorKind::kConfig, "seed must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "participants" || key == "trials" || key == "trial_index") {
      if (!value.is_number_integer()) throw Error(ErrorKind::kConfig, fmt::format("{} must be an integer", key));
      const int v = value.get<int>();
      (key == "participants" ? cc.participants
                             : key == "trials" ? cc.trials_per_participant : c.trial_index) = v;
    } else if (key == "participant_id") {
      if (!value.is_string()) throw Error(ErrorKind::kConfig, "participant_id must be a string");
      c.participant_id = value.get<std::string>();
    } else {
      throw Error(ErrorKind::kConfig, fmt::format("unknown synth config key '{}'", key));
    }
  }
  if (cc.participants < 1 || cc.trials_per_participant < 1) {
    throw Error(ErrorKind::kConfig, "participants and trials must be at least 1");
  }
  c.validate();
  return cc;
}

}  // namespace gaitug::synth
