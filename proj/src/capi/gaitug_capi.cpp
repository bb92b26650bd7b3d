// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaitug/gaitug.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "commands.hpp"
#include "error.hpp"
#include "imu_gait.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "stats.hpp"
#include "synth.hpp"

struct gaitug_options {
  gaitug::AnalysisOptions analysis;
  gaitug::Units units = gaitug::Units::kReport;
  unsigned threads = 1;
};

struct gaitug_trial {
  gaitug::TrialRecording trial;
};

struct gaitug_imu {
  gaitug::ImuRecording imu;
};

struct gaitug_analysis {
  gaitug::TrialAnalysis analysis;
  std::string segmentation_json;
};

namespace {

thread_local std::string g_last_error;

gaitug_status status_of(gaitug::ErrorKind kind) {
  return static_cast<gaitug_status>(static_cast<int>(kind) + 1);
}

gaitug_status fail(gaitug_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
gaitug_status guarded(Fn&& fn) {
  try {
    fn();
    return GAITUG_OK;
  } catch (const gaitug::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GAITUG_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GAITUG_E_INTERNAL, e.what());
  } catch (...) {
    return fail(GAITUG_E_INTERNAL, "unknown error");
  }
}

#define GAITUG_REQUIRE(cond, what)                                  \
  do {                                                              \
    if (!(cond)) return fail(GAITUG_E_INVALID_ARGUMENT, (what));    \
  } while (0)

const gaitug_options& options_or_default(const gaitug_options* options) {
  static const gaitug_options kDefaults{};
  return options ? *options : kDefaults;
}

std::vector<std::string> strings(const char* const* items, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!items[i]) throw gaitug::Error(gaitug::ErrorKind::kUsage, "null string in list");
    out.emplace_back(items[i]);
  }
  return out;
}

std::vector<std::filesystem::path> paths(const char* const* items, std::size_t n) {
  std::vector<std::filesystem::path> out;
  for (const auto& s : strings(items, n)) out.emplace_back(s);
  return out;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

extern "C" {

const char* gaitug_version(void) { return "0.1.0"; }

const char* gaitug_status_name(gaitug_status status) {
  switch (status) {
    case GAITUG_OK:
      return "ok";
    case GAITUG_E_INVALID_ARGUMENT:
      return "invalid-argument";
    case GAITUG_E_INTERNAL:
      return "internal";
    default:
      if (status > GAITUG_OK && status <= GAITUG_E_IO) {
        return gaitug::to_string(static_cast<gaitug::ErrorKind>(static_cast<int>(status) - 1));
      }
      return "unknown";
  }
}

const char* gaitug_last_error(void) { return g_last_error.c_str(); }

void gaitug_string_free(char* text) { std::free(text); }

gaitug_status gaitug_options_create(gaitug_options** out) {
  GAITUG_REQUIRE(out, "out is null");
  return guarded([&] { *out = new gaitug_options(); });
}

void gaitug_options_destroy(gaitug_options* options) { delete options; }

gaitug_status gaitug_options_set_sigma(gaitug_options* options, double sigma) {
  GAITUG_REQUIRE(options, "options is null");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) return fail(GAITUG_E_CONFIG, "sigma must be positive");
  options->analysis.filter.sigma = sigma;
  return GAITUG_OK;
}

gaitug_status gaitug_options_set_butterworth(gaitug_options* options, int order, double cutoff_hz) {
  GAITUG_REQUIRE(options, "options is null");
  if (order < 1 || order > 12) return fail(GAITUG_E_CONFIG, "Butterworth order must be 1..12");
  if (!(cutoff_hz > 0.0) || !std::isfinite(cutoff_hz)) {
    return fail(GAITUG_E_CONFIG, "Butterworth cutoff must be positive");
  }
  options->analysis.filter.butter_order = order;
  options->analysis.filter.butter_cutoff_hz = cutoff_hz;
  return GAITUG_OK;
}

gaitug_status gaitug_options_set_peak_rule(gaitug_options* options, double height_k,
                                           double distance_fraction) {
  GAITUG_REQUIRE(options, "options is null");
  if (!std::isfinite(height_k)) return fail(GAITUG_E_CONFIG, "peak height k must be finite");
  if (!(distance_fraction > 0.0) || !(distance_fraction <= 1.0)) {
    return fail(GAITUG_E_CONFIG, "peak distance fraction must be in (0, 1]");
  }
  options->analysis.peaks.height_k = height_k;
  options->analysis.peaks.distance_frac = distance_fraction;
  return GAITUG_OK;
}

gaitug_status gaitug_options_set_fps_override(gaitug_options* options, double fps) {
  GAITUG_REQUIRE(options, "options is null");
  if (!std::isfinite(fps)) return fail(GAITUG_E_CONFIG, "fps must be finite");
  if (fps > 0.0) {
    options->analysis.fps_override = fps;
  } else {
    options->analysis.fps_override.reset();
  }
  return GAITUG_OK;
}

gaitug_status gaitug_options_set_joint_table_json(gaitug_options* options, const char* json) {
  GAITUG_REQUIRE(options && json, "null argument");
  return guarded([&] { options->analysis.joints = gaitug::io::parse_joint_table(json); });
}

gaitug_status gaitug_options_set_units(gaitug_options* options, gaitug_units units) {
  GAITUG_REQUIRE(options, "options is null");
  if (units != GAITUG_UNITS_REPORT && units != GAITUG_UNITS_SI) {
    return fail(GAITUG_E_CONFIG, "unknown units");
  }
  options->units = units == GAITUG_UNITS_SI ? gaitug::Units::kSi : gaitug::Units::kReport;
  return GAITUG_OK;
}

gaitug_status gaitug_options_set_threads(gaitug_options* options, unsigned threads) {
  GAITUG_REQUIRE(options, "options is null");
  options->threads = threads == 0 ? 1 : threads;
  return GAITUG_OK;
}

gaitug_status gaitug_trial_load(const char* path, gaitug_trial** out) {
  GAITUG_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new gaitug_trial{gaitug::io::load_trajectory(path)}; });
}

gaitug_status gaitug_trial_parse(const char* text, gaitug_trial** out) {
  GAITUG_REQUIRE(text && out, "null argument");
  return guarded([&] { *out = new gaitug_trial{gaitug::io::parse_trajectory(text)}; });
}

void gaitug_trial_destroy(gaitug_trial* trial) { delete trial; }

gaitug_status gaitug_trial_info(const gaitug_trial* trial, size_t* n_frames, double* fps,
                                int* trial_index) {
  GAITUG_REQUIRE(trial, "trial is null");
  if (n_frames) *n_frames = trial->trial.size();
  if (fps) *fps = trial->trial.fps();
  if (trial_index) *trial_index = trial->trial.trial_index();
  return GAITUG_OK;
}

const char* gaitug_trial_participant(const gaitug_trial* trial) {
  return trial ? trial->trial.participant_id().c_str() : nullptr;
}

gaitug_status gaitug_trial_joint(const gaitug_trial* trial, size_t joint, double* xyz,
                                 size_t capacity) {
  GAITUG_REQUIRE(trial && xyz, "null argument");
  GAITUG_REQUIRE(joint < gaitug::kJointCount, "joint index out of range");
  GAITUG_REQUIRE(capacity >= 3 * trial->trial.size(), "buffer too small");
  const auto track = trial->trial.joint_track(joint);
  for (std::size_t i = 0; i < track.size(); ++i) {
    xyz[3 * i] = track[i].x;
    xyz[3 * i + 1] = track[i].y;
    xyz[3 * i + 2] = track[i].z;
  }
  return GAITUG_OK;
}

gaitug_status gaitug_analyze(const gaitug_trial* trial, const gaitug_options* options,
                             gaitug_analysis** out) {
  GAITUG_REQUIRE(trial && out, "null argument");
  return guarded([&] {
    const auto& opt = options_or_default(options);
    auto result = std::make_unique<gaitug_analysis>();
    result->analysis = gaitug::analyze_trial(trial->trial, opt.analysis);
    result->segmentation_json = gaitug::segmentation_json(trial->trial, result->analysis);
    *out = result.release();
  });
}

void gaitug_analysis_destroy(gaitug_analysis* analysis) { delete analysis; }

gaitug_status gaitug_analysis_event(const gaitug_analysis* analysis, gaitug_event event,
                                    gaitug_event_info* out) {
  GAITUG_REQUIRE(analysis && out, "null argument");
  const auto& seg = analysis->analysis.segmentation.segmentation;
  const gaitug::SubtaskEvent* ev = nullptr;
  switch (event) {
    case GAITUG_EVENT_STS1: ev = &seg.sts1; break;
    case GAITUG_EVENT_TURN1: ev = &seg.turn1; break;
    case GAITUG_EVENT_TURN2: ev = &seg.turn2; break;
    case GAITUG_EVENT_STS2: ev = &seg.sts2; break;
  }
  GAITUG_REQUIRE(ev, "unknown event");
  *out = {ev->peak.start_frame, ev->peak.peak_frame, ev->peak.end_frame,
          ev->duration_s,       ev->peak.peak_value, ev->peak.prominence};
  return GAITUG_OK;
}

gaitug_status gaitug_analysis_metrics(const gaitug_analysis* analysis, gaitug_metrics* out) {
  GAITUG_REQUIRE(analysis && out, "null argument");
  const auto& m = analysis->analysis.metrics;
  *out = {m.n_steps(),
          m.step_time.mean,
          or_nan(m.step_time.sd),
          m.step_length.mean,
          or_nan(m.step_length.sd),
          m.step_width.mean,
          or_nan(m.step_width.sd),
          or_nan(m.step_length.symmetry),
          or_nan(m.step_width.symmetry)};
  return GAITUG_OK;
}

gaitug_status gaitug_analysis_signal(const gaitug_analysis* analysis, gaitug_signal signal,
                                     double* out, size_t capacity, size_t* length) {
  GAITUG_REQUIRE(analysis, "analysis is null");
  const auto& s = analysis->analysis.segmentation.signals;
  const std::vector<double>* v = nullptr;
  switch (signal) {
    case GAITUG_SIGNAL_STS: v = &s.sts; break;
    case GAITUG_SIGNAL_HIP_LINE: v = &s.hip_line; break;
    case GAITUG_SIGNAL_HIP_LINE_VELOCITY: v = &s.hip_line_velocity; break;
    case GAITUG_SIGNAL_TRUNK_ANGLE: v = &s.trunk_angle; break;
  }
  GAITUG_REQUIRE(v, "unknown signal");
  GAITUG_REQUIRE(out || capacity == 0, "out is null");
  if (length) *length = v->size();
  const std::size_t n = std::min(capacity, v->size());
  if (n > 0) std::memcpy(out, v->data(), n * sizeof(double));
  return GAITUG_OK;
}

gaitug_status gaitug_analysis_segmentation_json(const gaitug_analysis* analysis, char** json) {
  GAITUG_REQUIRE(analysis && json, "null argument");
  return guarded([&] { *json = duplicate(analysis->segmentation_json); });
}

gaitug_status gaitug_imu_load(const char* path, gaitug_imu** out) {
  GAITUG_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new gaitug_imu{gaitug::io::load_imu(path)}; });
}

void gaitug_imu_destroy(gaitug_imu* imu) { delete imu; }

gaitug_status gaitug_imu_step_times(const gaitug_imu* imu, const gaitug_options* options,
                                    double* out, size_t capacity, size_t* count, double* mean) {
  GAITUG_REQUIRE(imu, "imu is null");
  GAITUG_REQUIRE(out || capacity == 0, "out is null");
  return guarded([&] {
    const auto series = gaitug::imu_step_times(imu->imu, options_or_default(options).analysis);
    if (count) *count = series.step_times.size();
    const std::size_t n = std::min(capacity, series.step_times.size());
    if (n > 0) std::memcpy(out, series.step_times.data(), n * sizeof(double));
    if (mean) *mean = gaitug::trial_mean_step_time(series);
  });
}

gaitug_status gaitug_spearman(const double* x, const double* y, size_t n, double* rho,
                              double* p_value) {
  GAITUG_REQUIRE(x && y, "null argument");
  return guarded([&] {
    const auto r = gaitug::stats::spearman({x, n}, {y, n});
    if (rho) *rho = r.rho;
    if (p_value) *p_value = r.p_value;
  });
}

gaitug_status gaitug_shapiro_wilk(const double* x, size_t n, double* w, double* p_value) {
  GAITUG_REQUIRE(x, "null argument");
  return guarded([&] {
    const auto r = gaitug::stats::shapiro_wilk({x, n});
    if (w) *w = r.w_statistic;
    if (p_value) *p_value = r.p_value;
  });
}

gaitug_status gaitug_run_analyze(const char* const* trajectories, size_t count,
                                 const char* out_dir, const gaitug_options* options,
                                 size_t* succeeded, size_t* failed) {
  GAITUG_REQUIRE(out_dir && (trajectories || count == 0), "null argument");
  return guarded([&] {
    const auto& opt = options_or_default(options);
    const auto summary = gaitug::run_analyze(paths(trajectories, count), out_dir, opt.analysis,
                                             opt.units, opt.threads);
    if (succeeded) *succeeded = summary.succeeded;
    if (failed) *failed = summary.failed;
  });
}

gaitug_status gaitug_run_compare(const char* video_metrics, const char* const* imu_files,
                                 size_t count, const char* out_dir, const gaitug_options* options,
                                 size_t* pairs) {
  GAITUG_REQUIRE(video_metrics && out_dir && (imu_files || count == 0), "null argument");
  return guarded([&] {
    const auto& opt = options_or_default(options);
    const auto summary = gaitug::run_compare(video_metrics, paths(imu_files, count), out_dir,
                                             opt.analysis, opt.threads);
    if (pairs) *pairs = summary.pairs;
  });
}

gaitug_status gaitug_run_lme(const char* metrics, const char* covariates, const char* outcome,
                             const char* const* predictors, size_t n_predictors,
                             const char* out_dir) {
  GAITUG_REQUIRE(metrics && covariates && outcome && out_dir && (predictors || n_predictors == 0),
                 "null argument");
  return guarded([&] {
    gaitug::run_lme(metrics, covariates, outcome, strings(predictors, n_predictors), out_dir);
  });
}

gaitug_status gaitug_run_report(const char* metrics, const char* covariates,
                                const char* const* metric_names, size_t n_metrics,
                                const char* const* factor_names, size_t n_factors,
                                const char* out_dir, size_t* files_written) {
  GAITUG_REQUIRE(metrics && covariates && out_dir, "null argument");
  GAITUG_REQUIRE((metric_names || n_metrics == 0) && (factor_names || n_factors == 0),
                 "null argument");
  return guarded([&] {
    const auto m = n_metrics ? strings(metric_names, n_metrics) : gaitug::kDefaultReportMetrics;
    const auto f = n_factors ? strings(factor_names, n_factors) : gaitug::kDefaultReportFactors;
    const auto n = gaitug::run_report(metrics, covariates, m, f, out_dir);
    if (files_written) *files_written = n;
  });
}

gaitug_status gaitug_run_synth(const char* config_json, int has_seed, uint64_t seed,
                               const char* out_dir, const gaitug_options* options,
                               size_t* files_written) {
  GAITUG_REQUIRE(out_dir, "null argument");
  return guarded([&] {
    gaitug::synth::CohortConfig config =
        config_json ? gaitug::synth::parse_cohort_config(config_json) : gaitug::synth::CohortConfig{};
    if (has_seed) config.base.seed = seed;
    const auto n = gaitug::run_synth(config, out_dir, options_or_default(options).threads);
    if (files_written) *files_written = n;
  });
}

}  // extern "C"
