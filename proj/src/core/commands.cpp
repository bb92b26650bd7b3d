// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "imu_gait.hpp"
#include "io.hpp"

namespace gaitug {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::kIo, fmt::format("cannot create output directory {}", dir.string()));
  }
}

std::string trial_stem(const std::string& pid, int trial_index) {
  return fmt::format("{}_trial{}", pid, trial_index);
}

FailureRecord failure(const fs::path& source, const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return {source.string(), err ? to_string(err->kind()) : "internal", e.what()};
}

std::string failures_json(const std::vector<FailureRecord>& failures) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& f : failures) {
    j.push_back({{"source", f.source}, {"kind", f.kind}, {"message", f.message}});
  }
  return j.dump(2) + "\n";
}

}  // namespace

AnalyzeSummary run_analyze(const std::vector<fs::path>& trajectories, const fs::path& out_dir,
                           const AnalysisOptions& options, Units units, unsigned threads) {
  if (trajectories.empty()) throw Error(ErrorKind::kUsage, "no trajectory files given");
  ensure_dir(out_dir);
  ensure_dir(out_dir / "segmentation");

  struct Outcome {
    std::optional<io::MetricsRow> row;
    std::string segmentation;
    std::optional<FailureRecord> failure;
  };
  std::vector<Outcome> outcomes(trajectories.size());
  parallel_for(trajectories.size(), threads, [&](std::size_t i) {
    try {
      TrialRecording trial = io::load_trajectory(trajectories[i]);
      if (options.fps_override) {
        trial = TrialRecording(trial.participant_id(), trial.trial_index(), *options.fps_override,
                               trial.frames());
      }
      const TrialAnalysis analysis = analyze_trial(trial, options);
      outcomes[i].row = metrics_row(trial, analysis, units);
      outcomes[i].segmentation = segmentation_json(trial, analysis);
    } catch (const std::exception& e) {
      outcomes[i].failure = failure(trajectories[i], e);
    }
  });

  io::MetricsTable table;
  table.units = to_string(units);
  table.columns = metrics_columns(units);
  std::vector<FailureRecord> failures;
  std::vector<std::pair<const io::MetricsRow*, const std::string*>> good;
  for (const auto& o : outcomes) {
    if (o.failure) {
      failures.push_back(*o.failure);
    } else {
      good.emplace_back(&*o.row, &o.segmentation);
    }
  }
  std::sort(good.begin(), good.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first->participant_id, a.first->trial_index) <
           std::tie(b.first->participant_id, b.first->trial_index);
  });
  for (std::size_t i = 1; i < good.size(); ++i) {
    if (good[i].first->participant_id == good[i - 1].first->participant_id &&
        good[i].first->trial_index == good[i - 1].first->trial_index) {
      throw Error(ErrorKind::kStructure,
                  fmt::format("trial {}/{} appears in more than one input file",
                              good[i].first->participant_id, good[i].first->trial_index));
    }
  }
  for (const auto& [row, seg] : good) {
    table.rows.push_back(*row);
    io::write_text_file(out_dir / "segmentation" /
                            (trial_stem(row->participant_id, row->trial_index) + ".json"),
                        *seg);
  }
  io::write_text_file(out_dir / "metrics.csv", io::format_metrics(table));
  io::write_text_file(out_dir / "failures.json", failures_json(failures));
  return {good.size(), failures.size()};
}

CompareSummary run_compare(const fs::path& video_metrics, const std::vector<fs::path>& imu_files,
                           const fs::path& out_dir, const AnalysisOptions& options,
                           unsigned threads) {
  if (imu_files.empty()) throw Error(ErrorKind::kUsage, "no insole files given");
  const io::MetricsTable video = io::load_metrics(video_metrics);
  ensure_dir(out_dir);

  struct Outcome {
    std::optional<InsoleMean> mean;
    std::optional<FailureRecord> failure;
  };
  std::vector<Outcome> outcomes(imu_files.size());
  parallel_for(imu_files.size(), threads, [&](std::size_t i) {
    try {
      const ImuRecording rec = io::load_imu(imu_files[i]);
      const ImuStepSeries series = imu_step_times(rec, options);
      outcomes[i].mean = InsoleMean{{rec.participant_id, rec.trial_index},
                                    trial_mean_step_time(series)};
    } catch (const std::exception& e) {
      outcomes[i].failure = failure(imu_files[i], e);
    }
  });
  std::vector<InsoleMean> means;
  std::vector<FailureRecord> failures;
  for (const auto& o : outcomes) {
    if (o.mean) means.push_back(*o.mean);
    if (o.failure) failures.push_back(*o.failure);
  }
  Agreement agreement = compare_tables(video, means);
  agreement.insole_failures = std::move(failures);
  io::write_text_file(out_dir / "agreement.json", agreement_json(agreement));
  io::write_text_file(out_dir / "step_times.csv", step_times_csv(agreement));
  return {agreement.report.pairs.size(), agreement.report.spearman.rho,
          agreement.report.mean_bias_s};
}

LmeSummary run_lme(const fs::path& metrics, const fs::path& covariates, const std::string& outcome,
                   const std::vector<std::string>& predictors, const fs::path& out_dir) {
  if (predictors.empty()) throw Error(ErrorKind::kUsage, "at least one predictor is required");
  const io::MetricsTable table = io::load_metrics(metrics);
  const auto cov = io::load_covariates(covariates);
  const LmeData data = join_for_lme(table, cov, outcome, predictors);
  const stats::LmeFit fit = stats::fit_lme(data.spec, data.rows);
  ensure_dir(out_dir);
  std::string stem = "lme_" + outcome;
  for (const auto& p : predictors) stem += "_" + p;
  io::write_text_file(out_dir / (stem + ".json"), lme_json(data, fit, table.units));
  io::write_text_file(out_dir / (stem + ".txt"), lme_table(data, fit, table.units));
  return {fit.n_obs, fit.n_groups, fit.icc};
}

std::size_t run_report(const fs::path& metrics, const fs::path& covariates,
                       const std::vector<std::string>& metric_names,
                       const std::vector<std::string>& factor_names, const fs::path& out_dir) {
  const io::MetricsTable table = io::load_metrics(metrics);
  const auto cov = io::load_covariates(covariates);
  const auto files = build_report(table, cov, metric_names, factor_names);
  ensure_dir(out_dir);
  for (const auto& f : files) io::write_text_file(out_dir / f.name, f.content);
  return files.size();
}

std::size_t run_synth(const synth::CohortConfig& config, const fs::path& out_dir, unsigned threads) {
  const synth::Cohort cohort = synth::make_cohort(config);
  ensure_dir(out_dir);
  parallel_for(cohort.trials.size(), threads, [&](std::size_t i) {
    const synth::SynthConfig& c = cohort.trials[i];
    const synth::SynthTrial t = synth::generate(c);
    const std::string stem = trial_stem(c.participant_id, c.trial_index);
    io::write_text_file(out_dir / (stem + "_trajectory.csv"), io::format_trajectory(t.trial));
    io::write_text_file(out_dir / (stem + "_imu.csv"), io::format_imu(t.imu));
    io::write_text_file(out_dir / (stem + "_truth.json"), synth::format_ground_truth(t.truth));
  });
  std::size_t written = 3 * cohort.trials.size();
  if (cohort.covariates.size() > 1) {
    io::write_text_file(out_dir / "covariates.csv", io::format_covariates(cohort.covariates));
    ++written;
  }
  return written;
}

}  // namespace gaitug
