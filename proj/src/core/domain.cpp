// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "domain.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "error.hpp"

namespace gaitug {

namespace {

void validate_identifier(const std::string& id) {
  if (id.empty()) throw Error(ErrorKind::kData, "participant_id is empty");
  for (char c : id) {
    if (c == ',' || c == '\t' || c == '\n' || c == '\r' || c == ' ' || c == '"') {
      throw Error(ErrorKind::kData,
                  fmt::format("participant_id '{}' contains a separator character", id));
    }
  }
}

}  // namespace

TrialRecording::TrialRecording(std::string participant_id, int trial_index, double fps,
                               std::vector<JointFrame> frames)
    : participant_id_(std::move(participant_id)),
      trial_index_(trial_index),
      fps_(fps),
      frames_(std::move(frames)) {
  validate_identifier(participant_id_);
  if (trial_index_ < 1 || trial_index_ > 3) {
    throw Error(ErrorKind::kData,
                fmt::format("trial_index {} outside 1..3", trial_index_));
  }
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) {
    throw Error(ErrorKind::kData, fmt::format("fps must be positive, got {}", fps_));
  }
  if (frames_.empty()) throw Error(ErrorKind::kStructure, "trial has no frames");
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const JointFrame& f = frames_[i];
    if (i > 0 && f.frame_index != frames_[i - 1].frame_index + 1) {
      throw Error(ErrorKind::kStructure,
                  fmt::format("frame {} follows frame {}; frames must be contiguous",
                              f.frame_index, frames_[i - 1].frame_index));
    }
    for (std::size_t j = 0; j < kJointCount; ++j) {
      if (!f.positions[j].finite()) {
        throw Error(ErrorKind::kData,
                    fmt::format("non-finite coordinate at frame {} joint {}", f.frame_index, j));
      }
    }
  }
}

std::vector<Vec3> TrialRecording::joint_track(std::size_t joint) const {
  std::vector<Vec3> track;
  track.reserve(frames_.size());
  for (const JointFrame& f : frames_) track.push_back(f.positions.at(joint));
  return track;
}

void TrialRecording::require_analyzable() const {
  if (static_cast<double>(frames_.size()) < 2.0 * fps_) {
    throw Error(ErrorKind::kDomain,
                fmt::format("trial {}/{} has {} frames; at least 2 s ({} frames) required",
                            participant_id_, trial_index_, frames_.size(),
                            static_cast<std::size_t>(std::ceil(2.0 * fps_))));
  }
}

const char* to_string(Side side) noexcept {
  return side == Side::kLeft ? "left" : "right";
}

void ImuRecording::validate() const {
  validate_identifier(participant_id);
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw Error(ErrorKind::kData, fmt::format("imu fps must be positive, got {}", fps));
  }
  if (vertical_axis < 0 || vertical_axis > 2) {
    throw Error(ErrorKind::kConfig, "vertical_axis must be x, y or z");
  }
  for (Side s : {Side::kLeft, Side::kRight}) {
    const ImuChannels& ch = side(s);
    for (std::size_t c = 0; c < 3; ++c) {
      if (ch.accel[c].size() != ch.size() || ch.gyro[c].size() != ch.size()) {
        throw Error(ErrorKind::kStructure,
                    fmt::format("{} side channels have unequal lengths", to_string(s)));
      }
      auto finite = [](double v) { return std::isfinite(v); };
      if (!std::all_of(ch.accel[c].begin(), ch.accel[c].end(), finite) ||
          !std::all_of(ch.gyro[c].begin(), ch.gyro[c].end(), finite)) {
        throw Error(ErrorKind::kData,
                    fmt::format("{} side has a non-finite sample", to_string(s)));
      }
    }
    if (ch.size() == 0) {
      throw Error(ErrorKind::kStructure,
                  fmt::format("{} side has no samples", to_string(s)));
    }
  }
  if (left.size() != right.size()) {
    throw Error(ErrorKind::kStructure,
                fmt::format("left side has {} samples but right side has {}", left.size(),
                            right.size()));
  }
}

std::string_view to_string(JointName name) noexcept {
  switch (name) {
    case JointName::kLeftAnkle: return "left_ankle";
    case JointName::kRightAnkle: return "right_ankle";
    case JointName::kLeftHip: return "left_hip";
    case JointName::kRightHip: return "right_hip";
    case JointName::kLeftShoulder: return "left_shoulder";
    case JointName::kRightShoulder: return "right_shoulder";
  }
  return "";
}

std::optional<JointName> parse_joint_name(std::string_view name) {
  for (JointName j : kAllJointNames) {
    if (to_string(j) == name) return j;
  }
  return std::nullopt;
}

// SMPL: 1 L_Hip, 2 R_Hip, 7 L_Ankle, 8 R_Ankle, 16 L_Shoulder, 17 R_Shoulder.
JointIndexTable::JointIndexTable() : JointIndexTable({7, 8, 1, 2, 16, 17}) {}

JointIndexTable::JointIndexTable(const std::array<std::size_t, 6>& indices)
    : indices_(indices) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= kJointCount) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("joint {} maps to index {} outside 0..23",
                              to_string(kAllJointNames[i]), indices_[i]));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (indices_[i] == indices_[j]) {
        throw Error(ErrorKind::kConfig,
                    fmt::format("joints {} and {} share index {}",
                                to_string(kAllJointNames[j]), to_string(kAllJointNames[i]),
                                indices_[i]));
      }
    }
  }
}

std::size_t JointIndexTable::resolve(std::string_view name) const {
  auto parsed = parse_joint_name(name);
  if (!parsed) {
    throw Error(ErrorKind::kConfig, fmt::format("unknown joint name '{}'", name));
  }
  return resolve(*parsed);
}

void FallRiskCovariates::validate() const {
  validate_identifier(participant_id);
  if (age && (!std::isfinite(*age) || *age < 0.0 || *age > 130.0)) {
    throw Error(ErrorKind::kData,
                fmt::format("participant {}: age {} out of range", participant_id, *age));
  }
  if (steadi && (*steadi < 0 || *steadi > kSteadiMax)) {
    throw Error(ErrorKind::kData, fmt::format("participant {}: steadi {} outside 0..{}",
                                              participant_id, *steadi, kSteadiMax));
  }
  if (short_fes_i && (*short_fes_i < kShortFesMin || *short_fes_i > kShortFesMax)) {
    throw Error(ErrorKind::kData,
                fmt::format("participant {}: short_fes_i {} outside {}..{}", participant_id,
                            *short_fes_i, kShortFesMin, kShortFesMax));
  }
  if (btracks && (!std::isfinite(*btracks) || *btracks < 0.0)) {
    throw Error(ErrorKind::kData,
                fmt::format("participant {}: btracks {} is negative", participant_id, *btracks));
  }
}

}  // namespace gaitug
