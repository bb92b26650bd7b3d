// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gaitug::signal {

using Samples = std::vector<double>;

struct GaussianKernel {
  double sigma = 0.0;
  std::vector<double> taps;  // odd length, symmetric, unit sum

  std::size_t radius() const { return taps.size() / 2; }
};

// Taps exp(-k^2 / (2 sigma^2)) for |k| <= ceil(3 sigma), normalised to unit sum.
GaussianKernel make_gaussian_kernel(double sigma);

// Same-length convolution; the signal is extended by whole-sample symmetric
// reflection, repeated as often as the kernel radius needs.
Samples smooth(std::span<const double> signal, const GaussianKernel& kernel);

// Low-pass Butterworth realised as cascaded biquads (plus one first-order
// section for odd orders), designed by the bilinear transform with
// pre-warped cutoff.
class ButterworthLowPass {
 public:
  struct Section {
    double b0, b1, b2;
    double a1, a2;  // a0 == 1
  };

  ButterworthLowPass(int order, double cutoff_hz, double sample_rate_hz);

  int order() const { return order_; }
  double cutoff_hz() const { return cutoff_hz_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const std::vector<Section>& sections() const { return sections_; }

  // Transfer-function coefficient count; filtfilt needs 3x this many samples.
  std::size_t warmup_length() const { return static_cast<std::size_t>(order_) + 1; }
  // Reflected samples added to each end before the two passes.
  std::size_t pad_length() const;

  std::complex<double> response(double freq_hz) const;
  double magnitude(double freq_hz) const { return std::abs(response(freq_hz)); }

  // One causal pass, state initialised to the steady state of the first sample.
  Samples filter(std::span<const double> signal) const;

 private:
  int order_;
  double cutoff_hz_;
  double sample_rate_hz_;
  std::vector<Section> sections_;
};

// Zero-phase forward-backward filtering on a reflect-padded signal. The
// result is symmetrised over time reversal, so filtering a reversed signal
// gives exactly the reversed output.
Samples butterworth_filtfilt(std::span<const double> signal, const ButterworthLowPass& filter);

// Central differences inside, second-order one-sided differences at the
// ends, in units per second.
Samples derivative(std::span<const double> signal, double fps);

enum class Polarity { kPositive, kNegative };

struct Peak {
  std::size_t start_frame = 0;
  std::size_t peak_frame = 0;
  std::size_t end_frame = 0;
  double peak_value = 0.0;  // signal units, sign as in the input
  Polarity polarity = Polarity::kPositive;
  double prominence = 0.0;
};

struct PeakParams {
  double min_height = 0.0;         // applied to the polarity-oriented signal
  std::size_t min_distance = 1;    // frames
  std::optional<std::size_t> max_peaks;
  std::optional<double> min_prominence;
};

// Local maxima (minima for kNegative) of height >= min_height, pairwise
// min_distance apart (greedy by height, earlier frame wins ties), optionally
// limited to the max_peaks highest. start/end are the frames nearest the
// half-prominence crossings on either side. Sorted by peak_frame.
std::vector<Peak> find_peaks(std::span<const double> signal, const PeakParams& params,
                             Polarity polarity);

struct AdaptiveRule {
  double height_k = 0.8;
  double distance_frac = 0.7;
};

// min_height = mean + k*sd of the oriented signal; min_distance =
// round-half-up(frac * |argmax - argmin|), at least 1.
PeakParams adaptive_peak_params(std::span<const double> signal, Polarity polarity,
                                const AdaptiveRule& rule = {});

double mean(std::span<const double> values);
// Sample standard deviation (n - 1).
double sample_sd(std::span<const double> values);

}  // namespace gaitug::signal
