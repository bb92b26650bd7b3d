// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "lme.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "error.hpp"
#include "stats.hpp"

namespace gaitug::stats {

const char* to_string(Convergence c) noexcept {
  return c == Convergence::kConverged ? "converged" : "boundary";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Design {
  MatrixXd x;
  VectorXd y;
  std::vector<std::vector<Eigen::Index>> groups;  // row indices, first-appearance order
};

struct Profile {
  double deviance = 0.0;
  VectorXd beta;
  MatrixXd a_inverse;  // (X' H^-1 X)^-1
  double sigma2 = 0.0;
};

// H = I + theta Z Z'; per group H_i^-1 = I - c_i 1 1' with c_i = theta / (1 + n_i theta).
Profile profile(const Design& d, double theta) {
  const Eigen::Index p = d.x.cols();
  const auto n_obs = static_cast<double>(d.x.rows());
  MatrixXd a = MatrixXd::Zero(p, p);
  VectorXd b = VectorXd::Zero(p);
  double log_det_h = 0.0;
  for (const auto& rows : d.groups) {
    const auto ni = static_cast<double>(rows.size());
    const double c = theta / (1.0 + ni * theta);
    VectorXd xsum = VectorXd::Zero(p);
    double ysum = 0.0;
    for (Eigen::Index r : rows) {
      const auto xr = d.x.row(r).transpose();
      a.noalias() += xr * xr.transpose();
      b.noalias() += xr * d.y(r);
      xsum += xr;
      ysum += d.y(r);
    }
    a.noalias() -= c * xsum * xsum.transpose();
    b.noalias() -= c * xsum * ysum;
    log_det_h += std::log1p(ni * theta);
  }
  const Eigen::LLT<MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kDesign, "fixed-effect cross-product is not positive definite");
  }
  Profile out;
  out.beta = llt.solve(b);
  out.a_inverse = llt.solve(MatrixXd::Identity(p, p));
  double log_det_a = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) log_det_a += 2.0 * std::log(llt.matrixL()(i, i));

  const VectorXd resid = d.y - d.x * out.beta;
  double quad = 0.0;
  for (const auto& rows : d.groups) {
    const auto ni = static_cast<double>(rows.size());
    const double c = theta / (1.0 + ni * theta);
    double sum = 0.0, sumsq = 0.0;
    for (Eigen::Index r : rows) {
      sum += resid(r);
      sumsq += resid(r) * resid(r);
    }
    quad += sumsq - c * sum * sum;
  }
  const double dof = n_obs - static_cast<double>(p);
  out.sigma2 = quad / dof;
  out.deviance = log_det_h + log_det_a +
                 dof * (1.0 + std::log(2.0 * std::numbers::pi * quad / dof));
  return out;
}

double sample_variance(const VectorXd& v) {
  if (v.size() < 2) return 0.0;
  const double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace

LmeFit fit_lme(const LmeSpec& spec, const std::vector<LmeRow>& rows, const LmeOptions& options) {
  const std::size_t k = spec.predictors.size();
  std::vector<const LmeRow*> kept;
  std::size_t dropped = 0;
  for (const LmeRow& r : rows) {
    if (r.predictors.size() != k) {
      throw Error(ErrorKind::kStructure, "row predictor count does not match the model");
    }
    bool complete = r.outcome && std::isfinite(*r.outcome);
    for (const auto& v : r.predictors) complete = complete && v && std::isfinite(*v);
    if (complete) {
      kept.push_back(&r);
    } else {
      ++dropped;
    }
  }
  if (kept.empty()) {
    throw Error(ErrorKind::kDesign,
                fmt::format("no complete observations for {} after removing missing values",
                            spec.outcome));
  }

  Design d;
  const auto n = static_cast<Eigen::Index>(kept.size());
  const auto p = static_cast<Eigen::Index>(k + 1);
  d.x.resize(n, p);
  d.y.resize(n);
  std::unordered_map<std::string, std::size_t> group_of;
  for (Eigen::Index i = 0; i < n; ++i) {
    const LmeRow& r = *kept[static_cast<std::size_t>(i)];
    d.y(i) = *r.outcome;
    d.x(i, 0) = 1.0;
    for (std::size_t j = 0; j < k; ++j) d.x(i, static_cast<Eigen::Index>(j + 1)) = *r.predictors[j];
    auto [it, inserted] = group_of.emplace(r.group, d.groups.size());
    if (inserted) d.groups.emplace_back();
    d.groups[it->second].push_back(i);
  }

  if (d.groups.size() < 2) {
    throw Error(ErrorKind::kPrecondition,
                fmt::format("mixed model needs at least 2 groups, got {}", d.groups.size()));
  }
  bool repeated = false;
  for (const auto& g : d.groups) repeated = repeated || g.size() >= 2;
  if (!repeated) {
    throw Error(ErrorKind::kPrecondition, "mixed model needs a group with at least 2 observations");
  }
  if (n <= p) {
    throw Error(ErrorKind::kDesign,
                fmt::format("{} observations cannot support {} fixed effects", n, p));
  }
  const Eigen::ColPivHouseholderQR<MatrixXd> qr(d.x);
  if (qr.rank() < p) {
    throw Error(ErrorKind::kDesign,
                fmt::format("design matrix is rank deficient (rank {} < {} columns)", qr.rank(), p));
  }

  double theta = 0.0;
  Convergence convergence = Convergence::kConverged;
  if (options.fixed_theta) {
    theta = *options.fixed_theta;
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
      throw Error(ErrorKind::kDomain, "fixed variance ratio must be finite and non-negative");
    }
  } else {
    auto deviance = [&](double log_theta) { return profile(d, std::exp(log_theta)).deviance; };
    // Coarse grid to bracket the global minimum, then Brent inside the bracket.
    constexpr int kGrid = 48;
    const double step = (kLogThetaMax - kLogThetaMin) / kGrid;
    int best = 0;
    double best_dev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kGrid; ++i) {
      const double dev = deviance(kLogThetaMin + step * i);
      if (dev < best_dev) {
        best_dev = dev;
        best = i;
      }
    }
    const double lo = kLogThetaMin + step * std::max(0, best - 1);
    const double hi = kLogThetaMin + step * std::min(kGrid, best + 1);
    std::uintmax_t max_iter = 200;
    const auto [log_theta, dev] =
        boost::math::tools::brent_find_minima(deviance, lo, hi, 40, max_iter);
    theta = std::exp(log_theta);
    const double dev_zero = profile(d, 0.0).deviance;
    if (dev_zero <= dev) {
      theta = 0.0;
      convergence = Convergence::kBoundary;
    } else if (log_theta <= kLogThetaMin + 1e-3 || log_theta >= kLogThetaMax - 1e-3) {
      convergence = Convergence::kBoundary;
    }
  }

  const Profile prof = profile(d, theta);
  LmeFit fit;
  fit.theta = theta;
  fit.reml_deviance = prof.deviance;
  fit.convergence = convergence;
  fit.sigma2 = prof.sigma2;
  fit.tau00 = theta * prof.sigma2;
  fit.icc = intraclass_correlation(fit.tau00, fit.sigma2);
  fit.n_groups = d.groups.size();
  fit.n_obs = static_cast<std::size_t>(n);
  fit.n_dropped = dropped;

  for (Eigen::Index j = 0; j < p; ++j) {
    FixedEffect fe;
    fe.name = j == 0 ? "(Intercept)" : spec.predictors[static_cast<std::size_t>(j - 1)];
    fe.estimate = prof.beta(j);
    fe.std_error = std::sqrt(prof.sigma2 * prof.a_inverse(j, j));
    fe.ci_low = fe.estimate - kWaldZ95 * fe.std_error;
    fe.ci_high = fe.estimate + kWaldZ95 * fe.std_error;
    fe.z = fe.std_error > 0.0 ? fe.estimate / fe.std_error : 0.0;
    fe.p_value = 2.0 * normal_cdf(-std::abs(fe.z));
    fit.fixed.push_back(fe);
  }

  fit.fixed_variance = sample_variance(d.x * prof.beta);
  const double total = fit.fixed_variance + fit.tau00 + fit.sigma2;
  fit.r2_marginal = fit.fixed_variance / total;
  fit.r2_conditional = (fit.fixed_variance + fit.tau00) / total;
  return fit;
}

}  // namespace gaitug::stats
