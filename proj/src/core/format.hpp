// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

namespace gaitug {

// Report-layer numbers carry 9 significant digits so output diffs are stable.
std::string format_sig9(double value);
std::string format_sig9(const std::optional<double>& value);

// Rounds to the value whose shortest representation has at most 9 digits.
double round_sig9(double value);

// Shortest representation that parses back to the identical double.
std::string format_exact(double value);

}  // namespace gaitug
