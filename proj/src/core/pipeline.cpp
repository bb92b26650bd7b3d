// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "format.hpp"
#include "signal.hpp"

namespace gaitug {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig9(v);
}

ordered_json key_json(const stats::TrialKey& k) {
  return {{"participant_id", k.participant_id}, {"trial_index", k.trial_index}};
}

std::optional<double> covariate_value(const FallRiskCovariates& c, std::string_view name) {
  if (name == "age") return c.age;
  if (name == "steadi") return c.steadi ? std::optional<double>(*c.steadi) : std::nullopt;
  if (name == "short_fes_i") {
    return c.short_fes_i ? std::optional<double>(*c.short_fes_i) : std::nullopt;
  }
  if (name == "btracks") return c.btracks;
  return std::nullopt;
}

bool is_covariate(std::string_view name) {
  return name == "age" || name == "steadi" || name == "short_fes_i" || name == "btracks";
}

std::map<std::string, const FallRiskCovariates*, std::less<>> index_covariates(
    const std::vector<FallRiskCovariates>& covariates) {
  std::map<std::string, const FallRiskCovariates*, std::less<>> by_id;
  for (const auto& c : covariates) by_id[c.participant_id] = &c;
  return by_id;
}

std::optional<double> lookup(const io::MetricsRow& row, const FallRiskCovariates* cov,
                             std::string_view name) {
  if (is_covariate(name)) return cov ? covariate_value(*cov, name) : std::nullopt;
  const auto it = row.values.find(name);
  return it == row.values.end() ? std::nullopt : it->second;
}

void require_predictor(const io::MetricsTable& metrics, const std::string& name) {
  if (!is_covariate(name) && !metrics.has_column(name)) {
    throw Error(ErrorKind::kUsage,
                fmt::format("predictor '{}' is neither a covariate (age, steadi, short_fes_i, "
                            "btracks) nor a metrics column",
                            name));
  }
}

std::string units_note(std::string_view units) {
  if (units == "si") return "all lengths in metres, times in seconds";
  return "step length/width means in cm, variability (sd) in mm, times in seconds; "
         "cm/mm scaling is a reporting convention";
}

}  // namespace

const char* to_string(Units units) noexcept { return units == Units::kSi ? "si" : "report"; }

std::optional<Units> parse_units(std::string_view text) {
  if (text == "si") return Units::kSi;
  if (text == "report") return Units::kReport;
  return std::nullopt;
}

TrialAnalysis analyze_trial(const TrialRecording& trial, const AnalysisOptions& options) {
  TrialAnalysis a{segment_trial(trial, options), {}};
  a.metrics = compute_gait_metrics(trial, a.segmentation.segmentation, options);
  return a;
}

std::vector<std::string> metrics_columns(Units units) {
  if (units == Units::kSi) {
    return {"n_steps", "st_mean", "st_sd",  "sl_mean_m", "sl_sd_m", "sw_mean_m", "sw_sd_m",
            "si_sl",   "si_sw",   "sts1_s", "sts2_s",    "turn1_s", "turn2_s"};
  }
  return {"n_steps", "st_mean", "st_sd",  "sl_mean_cm", "sl_sd_mm", "sw_mean_cm", "sw_sd_mm",
          "si_sl",   "si_sw",   "sts1_s", "sts2_s",     "turn1_s",  "turn2_s"};
}

io::MetricsRow metrics_row(const TrialRecording& trial, const TrialAnalysis& analysis, Units units) {
  const auto cols = metrics_columns(units);
  const double mean_scale = units == Units::kSi ? 1.0 : 100.0;
  const double sd_scale = units == Units::kSi ? 1.0 : 1000.0;
  auto scaled = [](const std::optional<double>& v, double s) {
    return v ? std::optional<double>(*v * s) : std::nullopt;
  };
  const GaitMetrics& m = analysis.metrics;
  const SubtaskSegmentation& seg = analysis.segmentation.segmentation;
  const std::optional<double> values[] = {
      static_cast<double>(m.n_steps()),
      m.step_time.mean,
      m.step_time.sd,
      m.step_length.mean * mean_scale,
      scaled(m.step_length.sd, sd_scale),
      m.step_width.mean * mean_scale,
      scaled(m.step_width.sd, sd_scale),
      m.step_length.symmetry,
      m.step_width.symmetry,
      seg.sts1.duration_s,
      seg.sts2.duration_s,
      seg.turn1.duration_s,
      seg.turn2.duration_s,
  };
  io::MetricsRow row;
  row.participant_id = trial.participant_id();
  row.trial_index = trial.trial_index();
  for (std::size_t i = 0; i < cols.size(); ++i) row.values[cols[i]] = values[i];
  return row;
}

std::string segmentation_json(const TrialRecording& trial, const TrialAnalysis& analysis) {
  const double fps = trial.fps();
  const SubtaskSegmentation& seg = analysis.segmentation.segmentation;
  const CompositeSignals& sig = analysis.segmentation.signals;
  ordered_json j;
  j["participant_id"] = trial.participant_id();
  j["trial_index"] = trial.trial_index();
  j["fps"] = number(fps);
  j["n_frames"] = trial.size();
  j["anterior_axis"] = {number(sig.anterior.x), number(sig.anterior.y), number(sig.anterior.z)};
  auto& events = j["events"] = ordered_json::array();
  const std::pair<const char*, const SubtaskEvent*> named[] = {
      {"sts1", &seg.sts1}, {"turn1", &seg.turn1}, {"turn2", &seg.turn2}, {"sts2", &seg.sts2}};
  for (const auto& [name, ev] : named) {
    const signal::Peak& p = ev->peak;
    events.push_back({{"name", name},
                      {"start_frame", p.start_frame},
                      {"peak_frame", p.peak_frame},
                      {"end_frame", p.end_frame},
                      {"start_s", number(static_cast<double>(p.start_frame) / fps)},
                      {"peak_s", number(static_cast<double>(p.peak_frame) / fps)},
                      {"end_s", number(static_cast<double>(p.end_frame) / fps)},
                      {"duration_s", number(ev->duration_s)},
                      {"peak_value", number(p.peak_value)},
                      {"prominence", number(p.prominence)}});
  }
  auto& steps = j["steps"] = ordered_json::array();
  for (const StepRecord& s : analysis.metrics.steps) {
    steps.push_back({{"phase", to_string(s.phase)},
                     {"foot", to_string(s.foot)},
                     {"time_s", number(s.time_s)},
                     {"length_m", number(s.length_m)},
                     {"width_m", number(s.width_m)}});
  }
  return j.dump(2) + "\n";
}

Agreement compare_tables(const io::MetricsTable& video, const std::vector<InsoleMean>& insole) {
  if (!video.has_column("st_mean")) {
    throw Error(ErrorKind::kUsage, "video metrics table has no st_mean column");
  }
  std::map<stats::TrialKey, double> video_by_key;
  for (const auto& row : video.rows) {
    const auto& v = row.values.at("st_mean");
    video_by_key[{row.participant_id, row.trial_index}] =
        v ? *v : std::numeric_limits<double>::quiet_NaN();
  }
  std::map<stats::TrialKey, double> insole_by_key;
  for (const auto& m : insole) {
    if (!insole_by_key.emplace(m.key, m.mean_step_time_s).second) {
      throw Error(ErrorKind::kStructure, fmt::format("duplicate insole trial {}/{}",
                                                     m.key.participant_id, m.key.trial_index));
    }
  }
  Agreement out;
  std::vector<stats::TrialPair> candidates;
  for (const auto& [key, v] : video_by_key) {
    const auto it = insole_by_key.find(key);
    if (it == insole_by_key.end()) {
      out.video_only.push_back(key);
    } else {
      candidates.push_back({key, v, it->second});
    }
  }
  for (const auto& [key, v] : insole_by_key) {
    if (!video_by_key.count(key)) out.insole_only.push_back(key);
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::kMatching, "no participant/trial key is shared by video and insole data");
  }
  out.report = stats::compare_video_insole(candidates);
  return out;
}

std::string agreement_json(const Agreement& a) {
  const auto& r = a.report;
  ordered_json j;
  j["n_pairs"] = r.pairs.size();
  j["spearman"] = {{"rho", number(r.spearman.rho)},
                   {"p_value", number(r.spearman.p_value)},
                   {"n", r.spearman.n}};
  j["mean_bias_s"] = number(r.mean_bias_s);
  j["bias_definition"] = "video - insole";
  auto normality = [](const std::optional<stats::ShapiroResult>& s) -> ordered_json {
    if (!s) return nullptr;
    return {{"w", number(s->w_statistic)}, {"p_value", number(s->p_value)}, {"n", s->n}};
  };
  j["normality"] = {{"video", normality(r.video_normality)},
                    {"insole", normality(r.insole_normality)}};
  auto& excluded = j["excluded"] = ordered_json::array();
  for (const auto& e : r.excluded) {
    excluded.push_back({{"participant_id", e.participant_id}, {"reason", e.reason}});
  }
  auto& vo = j["video_only"] = ordered_json::array();
  for (const auto& k : a.video_only) vo.push_back(key_json(k));
  auto& io_ = j["insole_only"] = ordered_json::array();
  for (const auto& k : a.insole_only) io_.push_back(key_json(k));
  auto& fails = j["insole_failures"] = ordered_json::array();
  for (const auto& f : a.insole_failures) {
    fails.push_back({{"source", f.source}, {"kind", f.kind}, {"message", f.message}});
  }
  auto& pairs = j["pairs"] = ordered_json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"participant_id", p.key.participant_id},
                     {"trial_index", p.key.trial_index},
                     {"video_s", number(p.video_s)},
                     {"insole_s", number(p.insole_s)}});
  }
  return j.dump(2) + "\n";
}

std::string step_times_csv(const Agreement& a) {
  std::string out = "# gaitug-step-times v1\nparticipant_id,trial_index,video_st_s,insole_st_s\n";
  for (const auto& p : a.report.pairs) {
    out += fmt::format("{},{},{},{}\n", p.key.participant_id, p.key.trial_index,
                       format_sig9(p.video_s), format_sig9(p.insole_s));
  }
  return out;
}

LmeData join_for_lme(const io::MetricsTable& metrics,
                     const std::vector<FallRiskCovariates>& covariates, const std::string& outcome,
                     const std::vector<std::string>& predictors) {
  if (!metrics.has_column(outcome)) {
    throw Error(ErrorKind::kUsage, fmt::format("outcome column '{}' is not in the metrics table", outcome));
  }
  for (const auto& p : predictors) require_predictor(metrics, p);
  const auto by_id = index_covariates(covariates);
  LmeData data;
  data.spec.outcome = outcome;
  data.spec.predictors = predictors;
  std::map<std::string, int> trials_per_group;
  for (const auto& row : metrics.rows) {
    const auto it = by_id.find(row.participant_id);
    if (it == by_id.end()) {
      ++data.unmatched_trials;
      continue;
    }
    stats::LmeRow r;
    r.group = row.participant_id;
    r.outcome = row.values.at(outcome);
    for (const auto& p : predictors) r.predictors.push_back(lookup(row, it->second, p));
    data.rows.push_back(std::move(r));
    ++trials_per_group[row.participant_id];
  }
  if (data.rows.empty()) {
    throw Error(ErrorKind::kUsage, "no participant is shared by the metrics and covariate files");
  }
  for (const auto& [g, n] : trials_per_group) {
    if (n > stats::kTrialsPerParticipant) data.repeat_groups.push_back(g);
  }
  return data;
}

std::string lme_json(const LmeData& data, const stats::LmeFit& fit, std::string_view units) {
  ordered_json j;
  j["method"] = "REML";
  j["inference"] = "wald-z";
  j["outcome"] = data.spec.outcome;
  j["predictors"] = data.spec.predictors;
  j["grouping"] = data.spec.grouping;
  j["units"] = units;
  j["units_note"] = units_note(units);
  auto& fixed = j["fixed_effects"] = ordered_json::array();
  for (const auto& fe : fit.fixed) {
    fixed.push_back({{"name", fe.name},
                     {"estimate", number(fe.estimate)},
                     {"std_error", number(fe.std_error)},
                     {"ci_low", number(fe.ci_low)},
                     {"ci_high", number(fe.ci_high)},
                     {"z", number(fe.z)},
                     {"p_value", number(fe.p_value)}});
  }
  j["random_effects"] = {{"sigma2", number(fit.sigma2)},
                         {"tau00", number(fit.tau00)},
                         {"icc", number(fit.icc)}};
  j["n_groups"] = fit.n_groups;
  j["n_obs"] = fit.n_obs;
  j["n_dropped_missing"] = fit.n_dropped;
  j["n_unmatched_trials"] = data.unmatched_trials;
  j["r2_marginal"] = number(fit.r2_marginal);
  j["r2_conditional"] = number(fit.r2_conditional);
  j["theta"] = number(fit.theta);
  j["reml_deviance"] = number(fit.reml_deviance);
  j["convergence"] = to_string(fit.convergence);
  j["repeat_sessions_flag"] = !data.repeat_groups.empty();
  j["repeat_groups"] = data.repeat_groups;
  return j.dump(2) + "\n";
}

std::string lme_table(const LmeData& data, const stats::LmeFit& fit, std::string_view units) {
  auto p_text = [](double p) { return p < 0.001 ? std::string("<0.001") : fmt::format("{:.3f}", p); };
  std::string out;
  out += fmt::format("Outcome: {} ({})\n", data.spec.outcome, units_note(units));
  out += fmt::format("Random intercept: {}; REML; Wald z intervals\n\n", data.spec.grouping);
  out += fmt::format("{:<24}{:>12}  {:<24}{:>8}\n", "Predictors", "Estimates", "CI", "p");
  for (const auto& fe : fit.fixed) {
    out += fmt::format("{:<24}{:>12.2f}  {:<24}{:>8}\n", fe.name, fe.estimate,
                       fmt::format("[{:.2f}, {:.2f}]", fe.ci_low, fe.ci_high), p_text(fe.p_value));
  }
  out += "\nRandom Effects\n";
  out += fmt::format("{:<24}{:>12.2f}\n", "sigma^2", fit.sigma2);
  out += fmt::format("{:<24}{:>12.2f}\n", "tau00", fit.tau00);
  out += fmt::format("{:<24}{:>12.2f}\n", "ICC", fit.icc);
  out += fmt::format("{:<24}{:>12}\n", fmt::format("N {}", data.spec.grouping), fit.n_groups);
  out += "\n";
  out += fmt::format("{:<24}{:>12}\n", "Observations", fit.n_obs);
  out += fmt::format("{:<24}{:>12.3f}\n", "Marginal R^2", fit.r2_marginal);
  out += fmt::format("{:<24}{:>12.3f}\n", "Conditional R^2", fit.r2_conditional);
  if (fit.convergence == stats::Convergence::kBoundary) {
    out += "\nNote: between-participant variance estimated at the boundary (tau00 = 0).\n";
  }
  if (!data.repeat_groups.empty()) {
    out += fmt::format("\nNote: {} participant(s) contribute more than {} trials; repeat sessions "
                       "are treated as independent observations.\n",
                       data.repeat_groups.size(), stats::kTrialsPerParticipant);
  }
  return out;
}

namespace {

struct Point {
  double x;
  double y;
};

struct Trend {
  double intercept;
  double slope;
};

std::string svg_scatter(const std::string& metric, const std::string& factor,
                        const std::vector<Point>& pts, const std::optional<Trend>& trend) {
  constexpr double kW = 480, kH = 360, kL = 64, kR = 20, kT = 32, kB = 52;
  double x0 = pts.front().x, x1 = x0, y0 = pts.front().y, y1 = y0;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (trend) {
    for (double x : {x0, x1}) {
      y0 = std::min(y0, trend->intercept + trend->slope * x);
      y1 = std::max(y1, trend->intercept + trend->slope * x);
    }
  }
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    if (span <= 0.0) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      lo -= 0.05 * span;
      hi += 0.05 * span;
    }
  };
  const double dx0 = x0, dx1 = x1;
  pad(x0, x1);
  pad(y0, y1);
  auto sx = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto sy = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n",
      kW, kH);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kW, kH);
  s += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">{} vs {}</text>\n",
                   kW / 2, metric, factor);
  s += fmt::format(
      "<path d=\"M{:.2f} {:.2f} L{:.2f} {:.2f} L{:.2f} {:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
      kL, kT, kL, kH - kB, kW - kR, kH - kB);
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                     sx(xv), kH - kB + 16, xv);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n", kL - 6,
                     sy(yv) + 4, yv);
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kW / 2, kH - 12,
                   factor);
  s += fmt::format(
      "<text x=\"14\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">{1}</text>\n",
      kH / 2, metric);
  for (const Point& p : pts) {
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#3b6ea5\" "
                     "fill-opacity=\"0.7\"/>\n",
                     sx(p.x), sy(p.y));
  }
  if (trend) {
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                     "stroke=\"#c0392b\" stroke-width=\"2\"/>\n",
                     sx(dx0), sy(trend->intercept + trend->slope * dx0), sx(dx1),
                     sy(trend->intercept + trend->slope * dx1));
  }
  s += "</svg>\n";
  return s;
}

ordered_json describe(const std::vector<double>& v) {
  ordered_json j;
  j["n"] = v.size();
  j["mean"] = v.empty() ? ordered_json(nullptr) : number(signal::mean(v));
  j["sd"] = v.size() < 2 ? ordered_json(nullptr) : number(signal::sample_sd(v));
  return j;
}

}  // namespace

std::vector<ReportFile> build_report(const io::MetricsTable& metrics,
                                     const std::vector<FallRiskCovariates>& covariates,
                                     const std::vector<std::string>& metric_names,
                                     const std::vector<std::string>& factor_names) {
  for (const auto& m : metric_names) {
    if (!metrics.has_column(m)) {
      throw Error(ErrorKind::kUsage, fmt::format("metric '{}' is not in the metrics table", m));
    }
  }
  for (const auto& f : factor_names) require_predictor(metrics, f);
  const auto by_id = index_covariates(covariates);
  std::vector<std::pair<const io::MetricsRow*, const FallRiskCovariates*>> joined;
  for (const auto& row : metrics.rows) {
    const auto it = by_id.find(row.participant_id);
    if (it != by_id.end()) joined.emplace_back(&row, it->second);
  }
  if (joined.empty()) {
    throw Error(ErrorKind::kUsage, "no participant is shared by the metrics and covariate files");
  }

  std::vector<ReportFile> files;
  ordered_json summary;
  std::set<std::string> groups;
  for (const auto& [row, cov] : joined) groups.insert(row->participant_id);
  summary["n_trials"] = joined.size();
  summary["n_participants"] = groups.size();
  summary["units"] = metrics.units;
  summary["units_note"] = units_note(metrics.units);
  auto& msum = summary["metrics"] = ordered_json::object();
  for (const auto& m : metric_names) {
    std::vector<double> v;
    for (const auto& [row, cov] : joined) {
      if (const auto x = lookup(*row, cov, m)) v.push_back(*x);
    }
    msum[m] = describe(v);
  }
  auto& fsum = summary["factors"] = ordered_json::object();
  for (const auto& f : factor_names) {
    std::vector<double> v;
    std::set<std::string> seen;
    for (const auto& [row, cov] : joined) {
      // Participant-level factors are described once per participant.
      if (is_covariate(f) && !seen.insert(row->participant_id).second) continue;
      if (const auto x = lookup(*row, cov, f)) v.push_back(*x);
    }
    fsum[f] = describe(v);
  }

  auto& plots = summary["plots"] = ordered_json::array();
  for (const auto& m : metric_names) {
    for (const auto& f : factor_names) {
      std::vector<Point> pts;
      std::vector<stats::LmeRow> rows;
      std::set<std::string> plot_groups;
      for (const auto& [row, cov] : joined) {
        const auto y = lookup(*row, cov, m);
        const auto x = lookup(*row, cov, f);
        if (!x || !y) continue;
        pts.push_back({*x, *y});
        rows.push_back({row->participant_id, y, {x}});
        plot_groups.insert(row->participant_id);
      }
      const std::string name = fmt::format("{}_vs_{}.svg", m, f);
      ordered_json entry;
      entry["file"] = name;
      entry["metric"] = m;
      entry["factor"] = f;
      entry["n_points"] = pts.size();
      entry["n_participants"] = plot_groups.size();
      std::optional<Trend> trend;
      std::string note;
      if (plot_groups.size() < 2) {
        note = "trend suppressed: fewer than 2 participants";
      } else {
        try {
          const auto fit = stats::fit_lme({m, {f}, "participant_id"}, rows);
          trend = Trend{fit.fixed.at(0).estimate, fit.fixed.at(1).estimate};
        } catch (const Error& e) {
          note = fmt::format("trend suppressed: {}", e.what());
        }
      }
      if (trend) {
        entry["trend"] = {{"intercept", number(trend->intercept)}, {"slope", number(trend->slope)}};
      } else {
        entry["trend"] = nullptr;
        entry["trend_note"] = note;
      }
      plots.push_back(entry);
      files.push_back({name, pts.empty() ? std::string("<svg xmlns=\"http://www.w3.org/2000/svg\" "
                                                       "width=\"480\" height=\"360\"/>\n")
                                         : svg_scatter(m, f, pts, trend)});
    }
  }
  files.push_back({"summary.json", summary.dump(2) + "\n"});
  return files;
}

}  // namespace gaitug
