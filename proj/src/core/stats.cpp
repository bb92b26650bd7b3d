// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "error.hpp"

namespace gaitug::stats {

double normal_cdf(double z) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), z);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorKind::kDegenerate, "correlation undefined for a constant variable");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kPrecondition, "spearman needs paired samples of equal length");
  }
  if (x.size() < 3) {
    throw Error(ErrorKind::kPrecondition,
                fmt::format("spearman needs at least 3 pairs, got {}", x.size()));
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x.begin(), x.end(), finite) || !std::all_of(y.begin(), y.end(), finite)) {
    throw Error(ErrorKind::kPrecondition, "spearman inputs must be finite");
  }
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  SpearmanResult r;
  r.n = x.size();
  r.rho = pearson(rx, ry);
  const double df = static_cast<double>(r.n - 2);
  const double one_minus = 1.0 - r.rho * r.rho;
  if (one_minus <= 0.0) {
    r.p_value = 0.0;
  } else {
    const double t = std::abs(r.rho) * std::sqrt(df / one_minus);
    r.p_value = 2.0 * boost::math::cdf(
                          boost::math::complement(boost::math::students_t_distribution<double>(df), t));
    r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  }
  return r;
}

namespace {

// c[0] + c[1] x + ... + c[n-1] x^(n-1)
double poly(std::span<const double> c, double x) {
  double result = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) result = result * x + c[i];
  return result;
}

}  // namespace

ShapiroResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw Error(ErrorKind::kPrecondition,
                fmt::format("shapiro-wilk needs 3 <= n <= 5000, got {}", n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 1e-19 * std::max(1.0, std::abs(x.front())))) {
    throw Error(ErrorKind::kDegenerate, "shapiro-wilk undefined for a constant sample");
  }

  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const std::size_t half = n / 2;
  const auto an = static_cast<double>(n);
  std::vector<double> a(half);  // weights for the upper half, largest first
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / an;
  double ssq = 0.0;
  for (double v : x) ssq += (v - mean) * (v - mean);
  double num = 0.0;
  for (std::size_t i = 0; i < half; ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  double w = std::min(1.0, num * num / ssq);

  ShapiroResult r;
  r.n = n;
  r.w_statistic = w;
  if (n == 3) {
    constexpr double kSixOverPi = 1.90985931710274;
    constexpr double kPiOverThree = 1.04719755119660;
    r.p_value = std::max(0.0, kSixOverPi * (std::asin(std::sqrt(w)) - kPiOverThree));
    r.p_value = std::min(r.p_value, 1.0);
    return r;
  }
  double y = std::log1p(-w);
  double m = 0.0, s = 1.0;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) {
      r.p_value = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    m = poly(c3, an);
    s = std::exp(poly(c4, an));
  } else {
    const double ln = std::log(an);
    m = poly(c5, ln);
    s = std::exp(poly(c6, ln));
  }
  r.p_value = 1.0 - normal_cdf((y - m) / s);
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  return r;
}

AgreementReport compare_video_insole(const std::vector<TrialPair>& candidates) {
  std::map<std::string, std::map<int, TrialPair>> by_participant;
  std::set<TrialKey> seen;
  for (const TrialPair& p : candidates) {
    if (!seen.insert(p.key).second) {
      throw Error(ErrorKind::kStructure,
                  fmt::format("duplicate trial {}/{}", p.key.participant_id, p.key.trial_index));
    }
    by_participant[p.key.participant_id][p.key.trial_index] = p;
  }

  AgreementReport report;
  for (const auto& [pid, trials] : by_participant) {
    std::size_t valid = 0;
    for (int t = 1; t <= kTrialsPerParticipant; ++t) {
      auto it = trials.find(t);
      if (it != trials.end() && std::isfinite(it->second.video_s) &&
          std::isfinite(it->second.insole_s)) {
        ++valid;
      }
    }
    if (valid < static_cast<std::size_t>(kTrialsPerParticipant)) {
      report.excluded.push_back(
          {pid, fmt::format("{} of {} trials have both video and insole step times", valid,
                            kTrialsPerParticipant)});
      continue;
    }
    for (int t = 1; t <= kTrialsPerParticipant; ++t) report.pairs.push_back(trials.at(t));
  }
  if (report.pairs.size() < 3) {
    throw Error(ErrorKind::kPrecondition,
                fmt::format("{} complete trial pairs after the three-trial filter; at least 3 "
                            "required",
                            report.pairs.size()));
  }

  std::vector<double> video, insole;
  double bias = 0.0;
  for (const TrialPair& p : report.pairs) {
    video.push_back(p.video_s);
    insole.push_back(p.insole_s);
    bias += p.video_s - p.insole_s;
  }
  report.mean_bias_s = bias / static_cast<double>(report.pairs.size());
  report.spearman = spearman(video, insole);
  try {
    report.video_normality = shapiro_wilk(video);
  } catch (const Error&) {
  }
  try {
    report.insole_normality = shapiro_wilk(insole);
  } catch (const Error&) {
  }
  return report;
}

}  // namespace gaitug::stats
