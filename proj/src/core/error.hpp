// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gaitug {

enum class ErrorKind {
  kParse,
  kStructure,
  kData,
  kDomain,
  kConfig,
  kDegenerate,
  kSegmentation,
  kInsufficientSteps,
  kDirection,
  kDetection,
  kDesign,
  kPrecondition,
  kMatching,
  kUsage,
  kIo,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gaitug
