// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// Versioned text formats.
//
// Trajectory (TrajectoryFileV1):
//   # gaitug-trajectory v1 fps=30 participant_id=P01 trial_index=1 coords=y-up
//   <frame_index>,<72 coordinates: joint 0 x,y,z ... joint 23 x,y,z>
// Fields on a data line are separated by commas or tabs. Metres, world space.
//
// Insole IMU (ImuFileV1):
//   # gaitug-imu v1 fps=60 participant_id=P01 trial_index=1 accel_unit=m/s^2
//     gyro_unit=deg/s vertical_axis=z                        (one line)
//   sample_index,side,accel_x,accel_y,accel_z,gyro_x,gyro_y,gyro_z
//   0,left,...
//
// Covariates (CovariateFileV1):
//   # gaitug-covariates v1
//   participant_id,age,steadi,short_fes_i,btracks
//   P01,72,3,,21.5            (empty cell = missing)

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domain.hpp"

namespace gaitug::io {

TrialRecording parse_trajectory(std::string_view text, std::string_view source = "<memory>");
TrialRecording load_trajectory(const std::filesystem::path& path);
std::string format_trajectory(const TrialRecording& trial);

ImuRecording parse_imu(std::string_view text, std::string_view source = "<memory>");
ImuRecording load_imu(const std::filesystem::path& path);
std::string format_imu(const ImuRecording& rec);

std::vector<FallRiskCovariates> parse_covariates(std::string_view text,
                                                 std::string_view source = "<memory>");
std::vector<FallRiskCovariates> load_covariates(const std::filesystem::path& path);
std::string format_covariates(const std::vector<FallRiskCovariates>& rows);

// {"left_ankle": 7, ...}; names not listed keep their SMPL default.
JointIndexTable parse_joint_table(std::string_view json_text);
JointIndexTable load_joint_table(const std::filesystem::path& path);

// Per-trial metrics table written by `analyze` and read back by the
// statistics commands.
struct MetricsRow {
  std::string participant_id;
  int trial_index = 0;
  std::map<std::string, std::optional<double>, std::less<>> values;
};

struct MetricsTable {
  std::string units = "report";
  std::vector<std::string> columns;  // numeric columns after the two keys
  std::vector<MetricsRow> rows;

  bool has_column(std::string_view name) const;
};

MetricsTable parse_metrics(std::string_view text, std::string_view source = "<memory>");
MetricsTable load_metrics(const std::filesystem::path& path);
std::string format_metrics(const MetricsTable& table);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary sibling and rename so readers never see partial files.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace gaitug::io
