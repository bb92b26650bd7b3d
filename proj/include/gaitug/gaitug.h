/* Copyright 2026 The gaitug Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the gaitug gait analysis library.
 *
 * Objects are opaque handles created by *_create / *_load functions and
 * released by the matching *_destroy. Every fallible call returns a
 * gaitug_status; on failure gaitug_last_error() describes the problem for
 * the calling thread until its next failing call. Strings returned through
 * char** parameters are owned by the caller and released with
 * gaitug_string_free.
 */

#ifndef GAITUG_GAITUG_H_
#define GAITUG_GAITUG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(GAITUG_BUILDING_LIBRARY)
#define GAITUG_API __declspec(dllexport)
#else
#define GAITUG_API __declspec(dllimport)
#endif
#else
#define GAITUG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gaitug_status {
  GAITUG_OK = 0,
  GAITUG_E_PARSE = 1,
  GAITUG_E_STRUCTURE = 2,
  GAITUG_E_DATA = 3,
  GAITUG_E_DOMAIN = 4,
  GAITUG_E_CONFIG = 5,
  GAITUG_E_DEGENERATE = 6,
  GAITUG_E_SEGMENTATION = 7,
  GAITUG_E_INSUFFICIENT_STEPS = 8,
  GAITUG_E_DIRECTION = 9,
  GAITUG_E_DETECTION = 10,
  GAITUG_E_DESIGN = 11,
  GAITUG_E_PRECONDITION = 12,
  GAITUG_E_MATCHING = 13,
  GAITUG_E_USAGE = 14,
  GAITUG_E_IO = 15,
  GAITUG_E_INVALID_ARGUMENT = 16,
  GAITUG_E_INTERNAL = 17
} gaitug_status;

typedef enum gaitug_event {
  GAITUG_EVENT_STS1 = 0,
  GAITUG_EVENT_TURN1 = 1,
  GAITUG_EVENT_TURN2 = 2,
  GAITUG_EVENT_STS2 = 3
} gaitug_event;

typedef enum gaitug_signal {
  GAITUG_SIGNAL_STS = 0,
  GAITUG_SIGNAL_HIP_LINE = 1,
  GAITUG_SIGNAL_HIP_LINE_VELOCITY = 2,
  GAITUG_SIGNAL_TRUNK_ANGLE = 3
} gaitug_signal;

typedef enum gaitug_units { GAITUG_UNITS_REPORT = 0, GAITUG_UNITS_SI = 1 } gaitug_units;

typedef struct gaitug_event_info {
  size_t start_frame;
  size_t peak_frame;
  size_t end_frame;
  double duration_s;
  double peak_value;
  double prominence;
} gaitug_event_info;

/* Lengths in metres, times in seconds. Undefined values are NaN. */
typedef struct gaitug_metrics {
  size_t n_steps;
  double st_mean;
  double st_sd;
  double sl_mean;
  double sl_sd;
  double sw_mean;
  double sw_sd;
  double si_sl;
  double si_sw;
} gaitug_metrics;

typedef struct gaitug_options gaitug_options;
typedef struct gaitug_trial gaitug_trial;
typedef struct gaitug_imu gaitug_imu;
typedef struct gaitug_analysis gaitug_analysis;

GAITUG_API const char* gaitug_version(void);
GAITUG_API const char* gaitug_status_name(gaitug_status status);
GAITUG_API const char* gaitug_last_error(void);
GAITUG_API void gaitug_string_free(char* text);

/* Options. Defaults: sigma 3 samples, Butterworth order 4 at 2 Hz, peak
 * height k 0.8, distance fraction 0.7, report units, one worker. */
GAITUG_API gaitug_status gaitug_options_create(gaitug_options** out);
GAITUG_API void gaitug_options_destroy(gaitug_options* options);
GAITUG_API gaitug_status gaitug_options_set_sigma(gaitug_options* options, double sigma);
GAITUG_API gaitug_status gaitug_options_set_butterworth(gaitug_options* options, int order,
                                                        double cutoff_hz);
GAITUG_API gaitug_status gaitug_options_set_peak_rule(gaitug_options* options, double height_k,
                                                      double distance_fraction);
/* fps <= 0 clears the override. */
GAITUG_API gaitug_status gaitug_options_set_fps_override(gaitug_options* options, double fps);
GAITUG_API gaitug_status gaitug_options_set_joint_table_json(gaitug_options* options,
                                                             const char* json);
GAITUG_API gaitug_status gaitug_options_set_units(gaitug_options* options, gaitug_units units);
GAITUG_API gaitug_status gaitug_options_set_threads(gaitug_options* options, unsigned threads);

/* Trajectories. */
GAITUG_API gaitug_status gaitug_trial_load(const char* path, gaitug_trial** out);
GAITUG_API gaitug_status gaitug_trial_parse(const char* text, gaitug_trial** out);
GAITUG_API void gaitug_trial_destroy(gaitug_trial* trial);
GAITUG_API gaitug_status gaitug_trial_info(const gaitug_trial* trial, size_t* n_frames,
                                           double* fps, int* trial_index);
/* Pointer valid for the lifetime of the trial. */
GAITUG_API const char* gaitug_trial_participant(const gaitug_trial* trial);
/* Writes 3 * n_frames coordinates (x, y, z per frame). */
GAITUG_API gaitug_status gaitug_trial_joint(const gaitug_trial* trial, size_t joint, double* xyz,
                                            size_t capacity);

/* Analysis of one trial. */
GAITUG_API gaitug_status gaitug_analyze(const gaitug_trial* trial, const gaitug_options* options,
                                        gaitug_analysis** out);
GAITUG_API void gaitug_analysis_destroy(gaitug_analysis* analysis);
GAITUG_API gaitug_status gaitug_analysis_event(const gaitug_analysis* analysis, gaitug_event event,
                                               gaitug_event_info* out);
GAITUG_API gaitug_status gaitug_analysis_metrics(const gaitug_analysis* analysis,
                                                 gaitug_metrics* out);
/* Copies up to capacity samples; *length receives the full signal length. */
GAITUG_API gaitug_status gaitug_analysis_signal(const gaitug_analysis* analysis,
                                                gaitug_signal signal, double* out,
                                                size_t capacity, size_t* length);
GAITUG_API gaitug_status gaitug_analysis_segmentation_json(const gaitug_analysis* analysis,
                                                           char** json);

/* Insole streams. */
GAITUG_API gaitug_status gaitug_imu_load(const char* path, gaitug_imu** out);
GAITUG_API void gaitug_imu_destroy(gaitug_imu* imu);
GAITUG_API gaitug_status gaitug_imu_step_times(const gaitug_imu* imu,
                                               const gaitug_options* options, double* out,
                                               size_t capacity, size_t* count, double* mean);

/* Statistics. */
GAITUG_API gaitug_status gaitug_spearman(const double* x, const double* y, size_t n, double* rho,
                                         double* p_value);
GAITUG_API gaitug_status gaitug_shapiro_wilk(const double* x, size_t n, double* w,
                                             double* p_value);

/* File-level commands; see the README for output layouts. options may be
 * NULL for defaults. */
GAITUG_API gaitug_status gaitug_run_analyze(const char* const* trajectories, size_t count,
                                            const char* out_dir, const gaitug_options* options,
                                            size_t* succeeded, size_t* failed);
GAITUG_API gaitug_status gaitug_run_compare(const char* video_metrics,
                                            const char* const* imu_files, size_t count,
                                            const char* out_dir, const gaitug_options* options,
                                            size_t* pairs);
GAITUG_API gaitug_status gaitug_run_lme(const char* metrics, const char* covariates,
                                        const char* outcome, const char* const* predictors,
                                        size_t n_predictors, const char* out_dir);
GAITUG_API gaitug_status gaitug_run_report(const char* metrics, const char* covariates,
                                           const char* const* metric_names, size_t n_metrics,
                                           const char* const* factor_names, size_t n_factors,
                                           const char* out_dir, size_t* files_written);
/* config_json may be NULL for the default single trial. When has_seed is
 * nonzero, seed replaces the configured seed. */
GAITUG_API gaitug_status gaitug_run_synth(const char* config_json, int has_seed, uint64_t seed,
                                          const char* out_dir, const gaitug_options* options,
                                          size_t* files_written);

#ifdef __cplusplus
}
#endif

#endif /* GAITUG_GAITUG_H_ */
