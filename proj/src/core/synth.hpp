// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic Timed Up and Go trials with exact ground truth.
//
// The subject sits reclined, rises, walks out along +Z, turns 180 degrees to
// the left, walks back, turns again and sits. Sit-to-stand velocity rises
// and falls along half-sine ramps around a plateau, so its width at half
// maximum equals the scripted duration. Each ankle lifts and lands along cosine ramps one step time long,
// so ankle height minima sit exactly on the scripted contacts.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "domain.hpp"
#include "gait_metrics.hpp"

namespace gaitug::synth {

struct SynthConfig {
  double fps = 30.0;
  double step_length = 0.60;  // m
  double step_width = 0.10;   // m
  double cadence = 2.0;       // steps per second
  double sts1_duration = 1.2;
  double sts2_duration = 1.4;
  double turn1_duration = 1.5;
  double turn2_duration = 1.8;
  double walkway_length = 3.0;  // m
  double noise_sd = 0.0;        // m, added to every coordinate
  std::uint64_t seed = 1;

  double lead_s = 1.0;
  double trailing_s = 1.0;
  double sts_rise = 0.35;
  double sts_ramp_s = 0.25;  // velocity ramp at each end of a transfer
  double standing_hip_height = 0.95;
  double hip_width = 0.30;
  double shoulder_width = 0.36;
  double trunk_length = 0.50;
  double seated_recline_rad = 0.6;
  double foot_clearance = 0.12;
  double ankle_height = 0.08;

  double imu_fps = 60.0;
  double imu_gyro_amplitude = 250.0;  // deg/s
  double imu_accel_spike = 12.0;      // m/s^2
  double imu_gyro_noise_sd = 0.0;
  double imu_accel_noise_sd = 0.0;

  std::string participant_id = "SYN001";
  int trial_index = 1;

  // Throws a configuration error for infeasible settings.
  void validate() const;
  // Contacts per walking phase.
  std::size_t steps_per_phase() const;
};

struct TruthInterval {
  double start_s = 0.0;
  double peak_s = 0.0;
  double end_s = 0.0;
  std::size_t start_frame = 0;
  std::size_t peak_frame = 0;
  std::size_t end_frame = 0;
  double duration_s = 0.0;
};

struct TruthStep {
  Side foot = Side::kLeft;
  WalkPhase phase = WalkPhase::kOutbound;
  double time_s = 0.0;
  std::size_t frame = 0;
  Vec3 ankle_position;
};

struct TruthImuContact {
  Side foot = Side::kLeft;
  double time_s = 0.0;
  std::size_t contact_sample = 0;
  std::size_t swing_peak_sample = 0;
  bool walking = true;  // false for landings inside a turn
};

struct GroundTruth {
  double fps = 30.0;
  std::size_t n_frames = 0;
  TruthInterval sts1;
  TruthInterval turn1;
  TruthInterval turn2;
  TruthInterval sts2;
  std::vector<TruthStep> steps;
  std::vector<TruthImuContact> imu_contacts;
  double step_length = 0.0;
  double step_width = 0.0;
  double step_time = 0.0;
};

struct SynthTrial {
  TrialRecording trial;
  ImuRecording imu;
  GroundTruth truth;
};

// Lead time from a swing's gyro peak to the contact it precedes.
inline constexpr double kSwingToContactS = 0.125;

SynthTrial generate(const SynthConfig& config);

std::string format_ground_truth(const GroundTruth& truth);

struct CohortConfig {
  SynthConfig base;
  int participants = 1;
  int trials_per_participant = 1;
  double between_step_length_sd = 0.05;
  double between_step_width_sd = 0.015;
  double between_cadence_sd = 0.15;
  double between_sts_sd = 0.2;
  double within_step_length_sd = 0.015;
  double steadi_missing_rate = 0.1;
};

struct Cohort {
  std::vector<SynthConfig> trials;
  std::vector<FallRiskCovariates> covariates;
};

// Participant parameters follow a latent frailty score that also drives the
// fall-risk covariates, so the statistics commands have signal to find.
Cohort make_cohort(const CohortConfig& config);

// Flat JSON object of SynthConfig fields plus "participants" and "trials".
CohortConfig parse_cohort_config(std::string_view json_text);

}  // namespace gaitug::synth
