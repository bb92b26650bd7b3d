// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "error.hpp"

namespace gaitug::signal {

namespace {

// Whole-sample symmetric extension: ... c b | a b c ... x y z | y x ...
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * n - 2);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return m < static_cast<std::ptrdiff_t>(n) ? static_cast<std::size_t>(m)
                                            : static_cast<std::size_t>(period - m);
}

Samples oriented(std::span<const double> signal, Polarity polarity) {
  Samples y(signal.begin(), signal.end());
  if (polarity == Polarity::kNegative) {
    for (double& v : y) v = -v;
  }
  return y;
}

}  // namespace

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

GaussianKernel make_gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::kDomain, fmt::format("gaussian sigma must be positive, got {}", sigma));
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  GaussianKernel kernel{sigma, {}};
  kernel.taps.reserve(static_cast<std::size_t>(2 * radius + 1));
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const auto kd = static_cast<double>(k);
    kernel.taps.push_back(std::exp(-kd * kd / (2.0 * sigma * sigma)));
  }
  // Sum symmetric pairs from the tails inward so both halves round alike.
  double sum = kernel.taps[static_cast<std::size_t>(radius)];
  for (std::ptrdiff_t k = radius; k >= 1; --k) {
    sum += 2.0 * kernel.taps[static_cast<std::size_t>(radius - k)];
  }
  for (double& t : kernel.taps) t /= sum;
  return kernel;
}

Samples smooth(std::span<const double> signal, const GaussianKernel& kernel) {
  if (signal.empty()) throw Error(ErrorKind::kDomain, "cannot smooth an empty signal");
  const std::size_t n = signal.size();
  const auto r = static_cast<std::ptrdiff_t>(kernel.radius());
  Samples out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::ptrdiff_t>(i);
    double acc = kernel.taps[static_cast<std::size_t>(r)] * signal[i];
    for (std::ptrdiff_t k = 1; k <= r; ++k) {
      acc += kernel.taps[static_cast<std::size_t>(r + k)] *
             (signal[reflect_index(c - k, n)] + signal[reflect_index(c + k, n)]);
    }
    out[i] = acc;
  }
  return out;
}

ButterworthLowPass::ButterworthLowPass(int order, double cutoff_hz, double sample_rate_hz)
    : order_(order), cutoff_hz_(cutoff_hz), sample_rate_hz_(sample_rate_hz) {
  if (order_ < 1 || order_ > 16) {
    throw Error(ErrorKind::kDomain, fmt::format("butterworth order {} outside 1..16", order_));
  }
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error(ErrorKind::kDomain, "sample rate must be positive");
  }
  if (!(cutoff_hz_ > 0.0) || !(cutoff_hz_ < sample_rate_hz_ / 2.0)) {
    throw Error(ErrorKind::kDomain,
                fmt::format("cutoff {} Hz must lie in (0, {}) Hz", cutoff_hz_,
                            sample_rate_hz_ / 2.0));
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz_ / sample_rate_hz_);
  const double k2 = k * k;
  for (int i = 0; i < order_ / 2; ++i) {
    // Analog prototype pole pair damping 2 sin((2i + 1) pi / (2 n)).
    const double d =
        2.0 * std::sin(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * static_cast<double>(order_)));
    const double norm = 1.0 / (1.0 + d * k + k2);
    Section s{};
    s.b0 = k2 * norm;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (k2 - 1.0) * norm;
    s.a2 = (1.0 - d * k + k2) * norm;
    sections_.push_back(s);
  }
  if (order_ % 2 == 1) {
    Section s{};
    s.b0 = k / (k + 1.0);
    s.b1 = s.b0;
    s.b2 = 0.0;
    s.a1 = (k - 1.0) / (k + 1.0);
    s.a2 = 0.0;
    sections_.push_back(s);
  }
}

std::size_t ButterworthLowPass::pad_length() const {
  const auto settle = static_cast<std::size_t>(std::ceil(3.0 * sample_rate_hz_ / cutoff_hz_));
  return std::max(3 * warmup_length(), settle);
}

std::complex<double> ButterworthLowPass::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz_;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h{1.0, 0.0};
  for (const Section& s : sections_) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

Samples ButterworthLowPass::filter(std::span<const double> signal) const {
  Samples y(signal.begin(), signal.end());
  if (y.empty()) return y;
  const double x0 = y.front();
  for (const Section& s : sections_) {
    // Transposed direct form II, steady state for a constant input x0
    // (each section has unit DC gain, so its output is x0 as well).
    double z1 = x0 * (s.b1 - s.a1 + s.b2 - s.a2);
    double z2 = x0 * (s.b2 - s.a2);
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

namespace {

Samples filtfilt_once(std::span<const double> signal, const ButterworthLowPass& filter) {
  const std::size_t n = signal.size();
  const std::size_t pad = filter.pad_length();
  Samples ext(n + 2 * pad);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    ext[i] = signal[reflect_index(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(pad), n)];
  }
  Samples fwd = filter.filter(ext);
  std::reverse(fwd.begin(), fwd.end());
  Samples bwd = filter.filter(fwd);
  std::reverse(bwd.begin(), bwd.end());
  return Samples(bwd.begin() + static_cast<std::ptrdiff_t>(pad),
                 bwd.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

}  // namespace

Samples butterworth_filtfilt(std::span<const double> signal, const ButterworthLowPass& filter) {
  const std::size_t min_len = 3 * filter.warmup_length();
  if (signal.size() < min_len) {
    throw Error(ErrorKind::kDomain,
                fmt::format("signal of {} samples is shorter than the {} required by an order-{} "
                            "filter",
                            signal.size(), min_len, filter.order()));
  }
  Samples a = filtfilt_once(signal, filter);
  Samples reversed(signal.rbegin(), signal.rend());
  Samples b = filtfilt_once(reversed, filter);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 * (a[i] + b[n - 1 - i]);
  return a;
}

Samples derivative(std::span<const double> signal, double fps) {
  const std::size_t n = signal.size();
  if (n < 3) {
    throw Error(ErrorKind::kDomain,
                fmt::format("derivative needs at least 3 samples, got {}", n));
  }
  if (!(fps > 0.0)) throw Error(ErrorKind::kDomain, "fps must be positive");
  Samples d(n);
  const double half = 0.5 * fps;
  d[0] = (-3.0 * signal[0] + 4.0 * signal[1] - signal[2]) * half;
  d[n - 1] = (3.0 * signal[n - 1] - 4.0 * signal[n - 2] + signal[n - 3]) * half;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (signal[i + 1] - signal[i - 1]) * half;
  return d;
}

namespace {

// Plateaus report their left-middle sample; the first and last samples are
// never maxima.
std::vector<std::size_t> local_maxima(const Samples& y) {
  std::vector<std::size_t> peaks;
  const std::size_t n = y.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (y[i - 1] < y[i]) {
      std::size_t ahead = i + 1;
      while (ahead + 1 < n && y[ahead] == y[i]) ++ahead;
      if (y[ahead] < y[i]) {
        peaks.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
      i = ahead;
      continue;
    }
    ++i;
  }
  return peaks;
}

struct Prominence {
  double value;
  std::size_t left_base;
  std::size_t right_base;
};

Prominence prominence_of(const Samples& y, std::size_t p) {
  const double h = y[p];
  double left_min = h;
  std::size_t left_base = p;
  for (std::size_t i = p + 1; i-- > 0;) {
    if (y[i] > h) break;
    if (y[i] < left_min) {
      left_min = y[i];
      left_base = i;
    }
  }
  double right_min = h;
  std::size_t right_base = p;
  for (std::size_t i = p; i < y.size(); ++i) {
    if (y[i] > h) break;
    if (y[i] < right_min) {
      right_min = y[i];
      right_base = i;
    }
  }
  return {h - std::max(left_min, right_min), left_base, right_base};
}

// Frame nearest the crossing of `level` between the peak and `limit`.
std::size_t crossing_frame(const Samples& y, std::size_t p, std::size_t limit, double level) {
  if (limit < p) {
    std::size_t i = p;
    while (i > limit && y[i] > level) --i;
    if (i < p && y[i] <= level &&
        std::abs(y[i + 1] - level) < std::abs(y[i] - level) && i + 1 < p) {
      return i + 1;
    }
    return i;
  }
  std::size_t i = p;
  while (i < limit && y[i] > level) ++i;
  if (i > p && y[i] <= level &&
      std::abs(y[i - 1] - level) < std::abs(y[i] - level) && i - 1 > p) {
    return i - 1;
  }
  return i;
}

}  // namespace

std::vector<Peak> find_peaks(std::span<const double> signal, const PeakParams& params,
                             Polarity polarity) {
  if (signal.size() < 3) {
    throw Error(ErrorKind::kDomain,
                fmt::format("peak detection needs at least 3 samples, got {}", signal.size()));
  }
  const Samples y = oriented(signal, polarity);
  const std::size_t min_distance = std::max<std::size_t>(params.min_distance, 1);

  std::vector<std::size_t> candidates;
  for (std::size_t p : local_maxima(y)) {
    if (y[p] >= params.min_height) candidates.push_back(p);
  }

  // Highest first; the earlier frame wins ties.
  auto by_height = [&y](std::size_t a, std::size_t b) {
    return y[a] != y[b] ? y[a] > y[b] : a < b;
  };
  std::sort(candidates.begin(), candidates.end(), by_height);
  std::vector<std::size_t> kept;
  for (std::size_t c : candidates) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return (c > k ? c - k : k - c) < min_distance;
    });
    if (clear) kept.push_back(c);
  }

  std::vector<Peak> peaks;
  for (std::size_t p : kept) {
    const Prominence prom = prominence_of(y, p);
    if (params.min_prominence && prom.value < *params.min_prominence) continue;
    if (params.max_peaks && peaks.size() >= *params.max_peaks) break;
    const double level = y[p] - 0.5 * prom.value;
    Peak peak;
    peak.peak_frame = p;
    peak.start_frame = crossing_frame(y, p, prom.left_base, level);
    peak.end_frame = crossing_frame(y, p, prom.right_base, level);
    peak.peak_value = signal[p];
    peak.polarity = polarity;
    peak.prominence = prom.value;
    peaks.push_back(peak);
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.peak_frame < b.peak_frame; });
  return peaks;
}

PeakParams adaptive_peak_params(std::span<const double> signal, Polarity polarity,
                                const AdaptiveRule& rule) {
  if (signal.size() < 3) {
    throw Error(ErrorKind::kDomain,
                fmt::format("adaptive peak parameters need at least 3 samples, got {}",
                            signal.size()));
  }
  const Samples y = oriented(signal, polarity);
  const double sd = sample_sd(y);
  const double m = mean(y);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(m)))) {
    throw Error(ErrorKind::kDegenerate, "signal has zero variance");
  }
  const auto min_it = std::min_element(signal.begin(), signal.end());
  const auto max_it = std::max_element(signal.begin(), signal.end());
  const auto span_frames = static_cast<double>(std::abs(std::distance(min_it, max_it)));
  PeakParams params;
  params.min_height = m + rule.height_k * sd;
  params.min_distance = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(rule.distance_frac * span_frames + 0.5)));
  return params;
}

}  // namespace gaitug::signal
