// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "error.hpp"

namespace gaitug {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kStructure: return "structural error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kDegenerate: return "degenerate-signal error";
    case ErrorKind::kSegmentation: return "segmentation error";
    case ErrorKind::kInsufficientSteps: return "insufficient-steps error";
    case ErrorKind::kDirection: return "direction error";
    case ErrorKind::kDetection: return "detection error";
    case ErrorKind::kDesign: return "design error";
    case ErrorKind::kPrecondition: return "precondition error";
    case ErrorKind::kMatching: return "matching error";
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

std::string format_sig9(double value) {
  if (!std::isfinite(value)) return "";
  if (value == 0.0) return "0";
  return fmt::format("{:.9g}", value);
}

std::string format_sig9(const std::optional<double>& value) {
  return value ? format_sig9(*value) : std::string{};
}

double round_sig9(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  const std::string text = fmt::format("{:.9g}", value);
  return std::strtod(text.c_str(), nullptr);
}

std::string format_exact(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return fmt::format("{:.17g}", value);
  return std::string(buf.data(), end);
}

}  // namespace gaitug
