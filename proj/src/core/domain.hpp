// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// Shared domain types. World coordinates follow the gravity-aligned
// convention of the pose estimator: +Y is up, X and Z span the floor plane.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaitug {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(Vec3 o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 horizontal() const { return {x, 0.0, z}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 kUp{0.0, 1.0, 0.0};
inline constexpr std::size_t kJointCount = 24;

struct JointFrame {
  std::size_t frame_index = 0;
  std::array<Vec3, kJointCount> positions{};
};

// Validated, immutable trial. Frames are contiguous and every coordinate is
// finite; the constructor throws gaitug::Error otherwise.
class TrialRecording {
 public:
  TrialRecording(std::string participant_id, int trial_index, double fps,
                 std::vector<JointFrame> frames);

  const std::string& participant_id() const { return participant_id_; }
  int trial_index() const { return trial_index_; }
  double fps() const { return fps_; }
  const std::vector<JointFrame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }

  // Position series of one joint across the trial.
  std::vector<Vec3> joint_track(std::size_t joint) const;

  // Throws a domain error when the trial is shorter than two seconds.
  void require_analyzable() const;

 private:
  std::string participant_id_;
  int trial_index_;
  double fps_;
  std::vector<JointFrame> frames_;
};

enum class Side { kLeft, kRight };
const char* to_string(Side side) noexcept;

struct ImuChannels {
  std::array<std::vector<double>, 3> accel;  // x, y, z
  std::array<std::vector<double>, 3> gyro;   // x, y, z
  std::size_t size() const { return accel[0].size(); }
};

struct ImuRecording {
  std::string participant_id;
  int trial_index = 1;
  double fps = 60.0;
  std::string accel_unit = "m/s^2";
  std::string gyro_unit = "deg/s";
  int vertical_axis = 2;  // accel channel carrying the vertical component
  std::size_t first_sample = 0;
  ImuChannels left;
  ImuChannels right;

  const ImuChannels& side(Side s) const { return s == Side::kLeft ? left : right; }
  std::size_t size() const { return left.size(); }
  // Equal per-side lengths, finite channels, positive fps.
  void validate() const;
};

enum class JointName {
  kLeftAnkle,
  kRightAnkle,
  kLeftHip,
  kRightHip,
  kLeftShoulder,
  kRightShoulder,
};

inline constexpr std::array<JointName, 6> kAllJointNames{
    JointName::kLeftAnkle,    JointName::kRightAnkle, JointName::kLeftHip,
    JointName::kRightHip,     JointName::kLeftShoulder, JointName::kRightShoulder};

std::string_view to_string(JointName name) noexcept;
std::optional<JointName> parse_joint_name(std::string_view name);

class JointIndexTable {
 public:
  // SMPL 24-joint body order.
  JointIndexTable();
  // Indices in JointName order; must be distinct and within 0..23.
  explicit JointIndexTable(const std::array<std::size_t, 6>& indices);

  std::size_t resolve(JointName name) const {
    return indices_[static_cast<std::size_t>(name)];
  }
  // Throws a configuration error for unknown names.
  std::size_t resolve(std::string_view name) const;

 private:
  std::array<std::size_t, 6> indices_;
};

struct FallRiskCovariates {
  std::string participant_id;
  std::optional<double> age;
  std::optional<int> steadi;
  std::optional<int> short_fes_i;
  std::optional<double> btracks;

  // Range checks; throws a data error naming the offending field.
  void validate() const;
};

inline constexpr int kSteadiMax = 14;
inline constexpr int kShortFesMin = 7;
inline constexpr int kShortFesMax = 28;

}  // namespace gaitug
