// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "format.hpp"

namespace gaitug::io {

namespace {

constexpr std::string_view kTrajectoryMagic = "gaitug-trajectory";
constexpr std::string_view kImuMagic = "gaitug-imu";
constexpr std::string_view kCovariateMagic = "gaitug-covariates";
constexpr std::string_view kMetricsMagic = "gaitug-metrics";
constexpr std::string_view kVersion = "v1";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    if (!trim(line).empty()) lines.push_back({number, trim(line)});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
    ++number;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    fields.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return fields;
}

[[noreturn]] void fail(ErrorKind kind, std::string_view source, std::size_t line,
                       const std::string& what) {
  throw Error(kind, fmt::format("{}:{}: {}", source, line, what));
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

double parse_number(std::string_view field, std::string_view source, std::size_t line,
                    std::string_view what) {
  const auto v = to_double(field);
  if (!v) fail(ErrorKind::kParse, source, line, fmt::format("{} '{}' is not a number", what, field));
  return *v;
}

// "# <magic> v1 key=value ..." -> key/value map.
std::map<std::string, std::string, std::less<>> parse_header(const Line& line,
                                                             std::string_view magic,
                                                             std::string_view source) {
  std::string_view text = line.text;
  if (text.empty() || text.front() != '#') {
    fail(ErrorKind::kStructure, source, line.number,
         fmt::format("expected a '# {} {}' header before any data", magic, kVersion));
  }
  text.remove_prefix(1);
  std::istringstream in{std::string(text)};
  std::string token;
  in >> token;
  if (token != magic) {
    fail(ErrorKind::kStructure, source, line.number,
         fmt::format("header tag '{}' is not '{}'", token, magic));
  }
  in >> token;
  if (token != kVersion) {
    fail(ErrorKind::kStructure, source, line.number,
         fmt::format("unsupported {} version '{}'", magic, token));
  }
  std::map<std::string, std::string, std::less<>> kv;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      fail(ErrorKind::kParse, source, line.number, fmt::format("malformed header field '{}'", token));
    }
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

const std::string& require_key(const std::map<std::string, std::string, std::less<>>& kv,
                               std::string_view key, std::string_view source, std::size_t line) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    fail(ErrorKind::kStructure, source, line, fmt::format("header lacks '{}'", key));
  }
  return it->second;
}

double header_fps(const std::map<std::string, std::string, std::less<>>& kv,
                  std::string_view source, std::size_t line) {
  const double fps = parse_number(require_key(kv, "fps", source, line), source, line, "fps");
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    fail(ErrorKind::kData, source, line, fmt::format("fps must be positive, got {}", fps));
  }
  return fps;
}

int header_trial_index(const std::map<std::string, std::string, std::less<>>& kv,
                       std::string_view source, std::size_t line) {
  const auto& text = require_key(kv, "trial_index", source, line);
  const auto v = to_integer(text);
  if (!v) fail(ErrorKind::kParse, source, line, fmt::format("trial_index '{}' is not an integer", text));
  return static_cast<int>(*v);
}

template <typename Fn>
auto rethrow_with_source(std::string_view source, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (msg.rfind(std::string(source) + ":", 0) == 0) throw;
    throw Error(e.kind(), fmt::format("{}: {}", source, msg));
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot write {}", path.string()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorKind::kIo, fmt::format("short write to {}", path.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIo, fmt::format("cannot replace {}: {}", path.string(), ec.message()));
}

TrialRecording parse_trajectory(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::kStructure, fmt::format("{}: empty trajectory file", source));
  const auto kv = parse_header(lines.front(), kTrajectoryMagic, source);
  const std::size_t hl = lines.front().number;
  const double fps = header_fps(kv, source, hl);
  const std::string pid = require_key(kv, "participant_id", source, hl);
  const int trial_index = header_trial_index(kv, source, hl);
  const std::string& coords = require_key(kv, "coords", source, hl);
  if (coords != "y-up") {
    fail(ErrorKind::kStructure, source, hl,
         fmt::format("coordinate convention '{}' is not supported (expected y-up)", coords));
  }

  constexpr std::size_t kFields = 1 + 3 * kJointCount;
  std::vector<JointFrame> frames;
  frames.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (line.text.front() == '#') {
      fail(ErrorKind::kStructure, source, line.number, "header or comment after data lines");
    }
    const char sep = line.text.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto fields = split_fields(line.text, sep);
    if (fields.size() != kFields) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("expected {} fields (frame index + 72 coordinates), got {}", kFields,
                       fields.size()));
    }
    const auto index = to_integer(fields[0]);
    if (!index || *index < 0) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("frame index '{}' is not a non-negative integer", fields[0]));
    }
    JointFrame frame;
    frame.frame_index = static_cast<std::size_t>(*index);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      double c[3];
      for (std::size_t a = 0; a < 3; ++a) {
        c[a] = parse_number(fields[1 + 3 * j + a], source, line.number, "coordinate");
        if (!std::isfinite(c[a])) {
          fail(ErrorKind::kData, source, line.number,
               fmt::format("non-finite coordinate for joint {}", j));
        }
      }
      frame.positions[j] = {c[0], c[1], c[2]};
    }
    if (!frames.empty() && frame.frame_index != frames.back().frame_index + 1) {
      fail(ErrorKind::kStructure, source, line.number,
           fmt::format("frame {} follows frame {}; frames must be contiguous", frame.frame_index,
                       frames.back().frame_index));
    }
    frames.push_back(frame);
  }
  return rethrow_with_source(source, [&] {
    return TrialRecording(pid, trial_index, fps, std::move(frames));
  });
}

TrialRecording load_trajectory(const std::filesystem::path& path) {
  return parse_trajectory(read_text_file(path), path.string());
}

std::string format_trajectory(const TrialRecording& trial) {
  std::string out = fmt::format("# {} {} fps={} participant_id={} trial_index={} coords=y-up\n",
                                kTrajectoryMagic, kVersion, format_exact(trial.fps()),
                                trial.participant_id(), trial.trial_index());
  for (const JointFrame& f : trial.frames()) {
    out += std::to_string(f.frame_index);
    for (const Vec3& p : f.positions) {
      out += ',';
      out += format_exact(p.x);
      out += ',';
      out += format_exact(p.y);
      out += ',';
      out += format_exact(p.z);
    }
    out += '\n';
  }
  return out;
}

namespace {

constexpr std::string_view kImuColumns[] = {"sample_index", "side",   "accel_x", "accel_y",
                                            "accel_z",      "gyro_x", "gyro_y",  "gyro_z"};

int axis_from_name(std::string_view name) {
  if (name == "x") return 0;
  if (name == "y") return 1;
  if (name == "z") return 2;
  return -1;
}

}  // namespace

ImuRecording parse_imu(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw Error(ErrorKind::kStructure, fmt::format("{}: missing imu header", source));
  const auto kv = parse_header(lines[0], kImuMagic, source);
  const std::size_t hl = lines[0].number;
  ImuRecording rec;
  rec.fps = header_fps(kv, source, hl);
  rec.participant_id = require_key(kv, "participant_id", source, hl);
  rec.trial_index = header_trial_index(kv, source, hl);
  rec.accel_unit = require_key(kv, "accel_unit", source, hl);
  rec.gyro_unit = require_key(kv, "gyro_unit", source, hl);
  if (const auto it = kv.find("vertical_axis"); it != kv.end()) {
    rec.vertical_axis = axis_from_name(it->second);
    if (rec.vertical_axis < 0) {
      fail(ErrorKind::kStructure, source, hl,
           fmt::format("vertical_axis '{}' is not x, y or z", it->second));
    }
  }

  const auto columns = split_fields(lines[1].text, ',');
  if (!std::equal(columns.begin(), columns.end(), std::begin(kImuColumns), std::end(kImuColumns))) {
    fail(ErrorKind::kStructure, source, lines[1].number,
         "column header must be sample_index,side,accel_x,accel_y,accel_z,gyro_x,gyro_y,gyro_z");
  }

  std::map<std::size_t, std::array<double, 6>> sides[2];
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const auto fields = split_fields(line.text, ',');
    if (fields.size() != 8) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("expected 8 fields, got {}", fields.size()));
    }
    const auto index = to_integer(fields[0]);
    if (!index || *index < 0) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("sample_index '{}' is not a non-negative integer", fields[0]));
    }
    int side = -1;
    if (fields[1] == "left") side = 0;
    if (fields[1] == "right") side = 1;
    if (side < 0) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("side '{}' is not left or right", fields[1]));
    }
    std::array<double, 6> values{};
    for (std::size_t c = 0; c < 6; ++c) {
      values[c] = parse_number(fields[2 + c], source, line.number, kImuColumns[2 + c]);
      if (!std::isfinite(values[c])) {
        fail(ErrorKind::kData, source, line.number,
             fmt::format("non-finite {}", kImuColumns[2 + c]));
      }
    }
    if (!sides[side].emplace(static_cast<std::size_t>(*index), values).second) {
      fail(ErrorKind::kStructure, source, line.number,
           fmt::format("duplicate sample {} for side {}", *index, fields[1]));
    }
  }

  for (int s = 0; s < 2; ++s) {
    if (sides[s].empty()) {
      throw Error(ErrorKind::kStructure,
                  fmt::format("{}: no samples for the {} side", source, s == 0 ? "left" : "right"));
    }
  }
  if (sides[0].size() != sides[1].size()) {
    throw Error(ErrorKind::kStructure,
                fmt::format("{}: left side has {} samples but right side has {}", source,
                            sides[0].size(), sides[1].size()));
  }
  rec.first_sample = sides[0].begin()->first;
  for (int s = 0; s < 2; ++s) {
    ImuChannels& ch = s == 0 ? rec.left : rec.right;
    std::size_t expected = rec.first_sample;
    for (const auto& [idx, v] : sides[s]) {
      if (idx != expected) {
        throw Error(ErrorKind::kStructure,
                    fmt::format("{}: {} side sample indices are not contiguous from {} (found {})",
                                source, s == 0 ? "left" : "right", rec.first_sample, idx));
      }
      ++expected;
      for (std::size_t c = 0; c < 3; ++c) {
        ch.accel[c].push_back(v[c]);
        ch.gyro[c].push_back(v[3 + c]);
      }
    }
  }
  rethrow_with_source(source, [&] {
    rec.validate();
    return 0;
  });
  return rec;
}

ImuRecording load_imu(const std::filesystem::path& path) {
  return parse_imu(read_text_file(path), path.string());
}

std::string format_imu(const ImuRecording& rec) {
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  std::string out = fmt::format(
      "# {} {} fps={} participant_id={} trial_index={} accel_unit={} gyro_unit={} "
      "vertical_axis={}\n",
      kImuMagic, kVersion, format_exact(rec.fps), rec.participant_id, rec.trial_index,
      rec.accel_unit, rec.gyro_unit, kAxis[rec.vertical_axis]);
  out += "sample_index,side,accel_x,accel_y,accel_z,gyro_x,gyro_y,gyro_z\n";
  for (std::size_t i = 0; i < rec.size(); ++i) {
    for (Side s : {Side::kLeft, Side::kRight}) {
      const ImuChannels& ch = rec.side(s);
      out += fmt::format("{},{},{},{},{},{},{},{}\n", rec.first_sample + i, to_string(s),
                         format_exact(ch.accel[0][i]), format_exact(ch.accel[1][i]),
                         format_exact(ch.accel[2][i]), format_exact(ch.gyro[0][i]),
                         format_exact(ch.gyro[1][i]), format_exact(ch.gyro[2][i]));
    }
  }
  return out;
}

namespace {

constexpr std::string_view kCovariateColumns[] = {"participant_id", "age", "steadi", "short_fes_i",
                                                  "btracks"};

std::optional<int> integral_score(std::string_view field, std::string_view source, std::size_t line,
                                  std::string_view name) {
  if (field.empty()) return std::nullopt;
  const double v = parse_number(field, source, line, name);
  if (!std::isfinite(v) || v != std::floor(v)) {
    fail(ErrorKind::kData, source, line, fmt::format("{} '{}' is not an integer score", name, field));
  }
  return static_cast<int>(v);
}

std::optional<double> optional_number(std::string_view field, std::string_view source,
                                      std::size_t line, std::string_view name) {
  if (field.empty()) return std::nullopt;
  const double v = parse_number(field, source, line, name);
  if (!std::isfinite(v)) fail(ErrorKind::kData, source, line, fmt::format("non-finite {}", name));
  return v;
}

}  // namespace

std::vector<FallRiskCovariates> parse_covariates(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) {
    throw Error(ErrorKind::kStructure, fmt::format("{}: missing covariate header", source));
  }
  parse_header(lines[0], kCovariateMagic, source);
  const auto columns = split_fields(lines[1].text, ',');
  if (!std::equal(columns.begin(), columns.end(), std::begin(kCovariateColumns),
                  std::end(kCovariateColumns))) {
    fail(ErrorKind::kStructure, source, lines[1].number,
         "column header must be participant_id,age,steadi,short_fes_i,btracks");
  }
  std::vector<FallRiskCovariates> rows;
  std::set<std::string, std::less<>> ids;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const auto fields = split_fields(line.text, ',');
    if (fields.size() != 5) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("expected 5 fields, got {}", fields.size()));
    }
    FallRiskCovariates c;
    c.participant_id = std::string(fields[0]);
    c.age = optional_number(fields[1], source, line.number, "age");
    c.steadi = integral_score(fields[2], source, line.number, "steadi");
    c.short_fes_i = integral_score(fields[3], source, line.number, "short_fes_i");
    c.btracks = optional_number(fields[4], source, line.number, "btracks");
    try {
      c.validate();
    } catch (const Error& e) {
      fail(e.kind(), source, line.number, e.what());
    }
    if (!ids.insert(c.participant_id).second) {
      fail(ErrorKind::kStructure, source, line.number,
           fmt::format("duplicate participant_id '{}'", c.participant_id));
    }
    rows.push_back(std::move(c));
  }
  return rows;
}

std::vector<FallRiskCovariates> load_covariates(const std::filesystem::path& path) {
  return parse_covariates(read_text_file(path), path.string());
}

std::string format_covariates(const std::vector<FallRiskCovariates>& rows) {
  std::string out = fmt::format("# {} {}\nparticipant_id,age,steadi,short_fes_i,btracks\n",
                                kCovariateMagic, kVersion);
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string{}; };
  auto opt_num = [](const std::optional<double>& v) { return v ? format_exact(*v) : std::string{}; };
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", r.participant_id, opt_num(r.age), opt_int(r.steadi),
                       opt_int(r.short_fes_i), opt_num(r.btracks));
  }
  return out;
}

JointIndexTable parse_joint_table(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, fmt::format("joint table is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "joint table must be a JSON object");
  const JointIndexTable defaults;
  std::array<std::size_t, 6> indices{};
  for (std::size_t i = 0; i < kAllJointNames.size(); ++i) {
    indices[i] = defaults.resolve(kAllJointNames[i]);
  }
  for (const auto& [key, value] : j.items()) {
    const auto name = parse_joint_name(key);
    if (!name) throw Error(ErrorKind::kConfig, fmt::format("unknown joint name '{}'", key));
    if (!value.is_number_integer() || value.get<long long>() < 0) {
      throw Error(ErrorKind::kConfig, fmt::format("joint '{}' needs a non-negative integer index", key));
    }
    indices[static_cast<std::size_t>(*name)] = value.get<std::size_t>();
  }
  return JointIndexTable(indices);
}

JointIndexTable load_joint_table(const std::filesystem::path& path) {
  return parse_joint_table(read_text_file(path));
}

bool MetricsTable::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

MetricsTable parse_metrics(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw Error(ErrorKind::kStructure, fmt::format("{}: missing metrics header", source));
  const auto kv = parse_header(lines[0], kMetricsMagic, source);
  MetricsTable table;
  if (const auto it = kv.find("units"); it != kv.end()) table.units = it->second;
  const auto header = split_fields(lines[1].text, ',');
  if (header.size() < 2 || header[0] != "participant_id" || header[1] != "trial_index") {
    fail(ErrorKind::kStructure, source, lines[1].number,
         "metrics header must start with participant_id,trial_index");
  }
  for (std::size_t i = 2; i < header.size(); ++i) table.columns.emplace_back(header[i]);
  std::set<std::pair<std::string, int>> keys;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const auto fields = split_fields(line.text, ',');
    if (fields.size() != header.size()) {
      fail(ErrorKind::kParse, source, line.number,
           fmt::format("expected {} fields, got {}", header.size(), fields.size()));
    }
    MetricsRow row;
    row.participant_id = std::string(fields[0]);
    const auto ti = to_integer(fields[1]);
    if (!ti) fail(ErrorKind::kParse, source, line.number, "trial_index is not an integer");
    row.trial_index = static_cast<int>(*ti);
    if (!keys.emplace(row.participant_id, row.trial_index).second) {
      fail(ErrorKind::kStructure, source, line.number,
           fmt::format("duplicate trial {}/{}", row.participant_id, row.trial_index));
    }
    for (std::size_t i = 2; i < fields.size(); ++i) {
      row.values[table.columns[i - 2]] =
          optional_number(fields[i], source, line.number, table.columns[i - 2]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

MetricsTable load_metrics(const std::filesystem::path& path) {
  return parse_metrics(read_text_file(path), path.string());
}

std::string format_metrics(const MetricsTable& table) {
  std::string out = fmt::format("# {} {} units={}\nparticipant_id,trial_index", kMetricsMagic,
                                kVersion, table.units);
  for (const auto& c : table.columns) out += "," + c;
  out += '\n';
  for (const auto& row : table.rows) {
    out += fmt::format("{},{}", row.participant_id, row.trial_index);
    for (const auto& c : table.columns) {
      const auto it = row.values.find(c);
      out += ',';
      if (it != row.values.end()) out += format_sig9(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace gaitug::io
