#ifndef WCS_H
#define WCS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  WCS_METHOD_FINITE_DIFFERENCE = 0,
  WCS_METHOD_SHOOTING = 1,
} WcsMethod;

typedef enum {
  WCS_STATUS_OK = 0,
  WCS_STATUS_NULL_POINTER = 1,
  WCS_STATUS_INVALID_ARGUMENT = 2,
  WCS_STATUS_UNKNOWN_NAME = 3,
  WCS_STATUS_CONFIG = 4,
  WCS_STATUS_UNSUPPORTED = 5,
  WCS_STATUS_SOLVER_FAILURE = 6,
  WCS_STATUS_IO = 7,
  WCS_STATUS_PANIC = 8,
} WcsStatus;

typedef enum {
  WCS_VERDICT_UNSTABLE = 0,
  WCS_VERDICT_STABLE_UNDER_FIXED_BOUNDARY_NORMAL_VARIATIONS = 1,
  WCS_VERDICT_NOT_DECIDED_BY_CRITERION = 2,
} WcsVerdict;

typedef struct WcsModel WcsModel;

typedef struct WcsReport WcsReport;

typedef struct WcsSpectrum WcsSpectrum;

typedef struct WcsSurface WcsSurface;

/**
 * Verdict settings. `tau <= 0` selects the exact λ₁; `tau > 0` the upper
 * estimate with that parameter.
 */
typedef struct {
  size_t grid_size;
  double shooting_tol;
  bool cross_check;
  double tau;
} WcsVerdictOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on this thread.
 */
const char *wcs_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void wcs_string_free(char *s);

/**
 * Builtin model by name, or a model TOML file when `name` looks like a path.
 * `n = 0` keeps the default (or the file's) dimension.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
WcsStatus wcs_model_new(const char *name, size_t n, WcsModel **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
WcsStatus wcs_model_from_file(const char *path, WcsModel **out);

/**
 * # Safety
 * `model` must come from this library or be null.
 */
void wcs_model_free(WcsModel *model);

/**
 * `f(t)`, `f'(t)` and `f''(t)`; any output pointer may be null.
 *
 * # Safety
 * `model` must be a live handle.
 */
WcsStatus wcs_model_eval(const WcsModel *model,
                         double t,
                         double *f,
                         double *f_prime,
                         double *f_second);

/**
 * # Safety
 * `model` must be a live handle and the outputs writable.
 */
WcsStatus wcs_model_info(const WcsModel *model, size_t *n, double *c, double *eps_max);

/**
 * # Safety
 * `spec` must be a NUL-terminated string such as `"clifford:2,1"` and `out` writable.
 */
WcsStatus wcs_surface_new(const char *spec, WcsSurface **out);

/**
 * # Safety
 * `surface` must come from this library or be null.
 */
void wcs_surface_free(WcsSurface *surface);

/**
 * First eigenvalue of `−Δ − ‖A‖²`.
 *
 * # Safety
 * `surface` must be a live handle and `out` writable.
 */
WcsStatus wcs_surface_lambda1(const WcsSurface *surface, double *out);

/**
 * Axial eigenvalues on `[−eps, 0]`. `grid_size` is used by finite
 * differences, `tol` by shooting.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
WcsStatus wcs_spectrum_solve(const WcsModel *model,
                             double eps,
                             size_t num_eigen,
                             WcsMethod method,
                             size_t grid_size,
                             double tol,
                             WcsSpectrum **out);

/**
 * # Safety
 * `spectrum` must come from this library or be null.
 */
void wcs_spectrum_free(WcsSpectrum *spectrum);

/**
 * # Safety
 * `spectrum` must be a live handle and `out` writable.
 */
WcsStatus wcs_spectrum_count(const WcsSpectrum *spectrum, size_t *out);

/**
 * Eigenvalue `index` (0-based).
 *
 * # Safety
 * `spectrum` must be a live handle and `out` writable.
 */
WcsStatus wcs_spectrum_eigenvalue(const WcsSpectrum *spectrum, size_t index, double *out);

/**
 * # Safety
 * `spectrum` must be a live handle and `out` writable.
 */
WcsStatus wcs_spectrum_to_json(const WcsSpectrum *spectrum, char **out);

/**
 * Defaults matching the command line.
 */
WcsVerdictOptions wcs_verdict_options_default(void);

/**
 * `λ₁ + δ₁` for the cone of depth `eps` over `surface`. `options` may be null.
 *
 * # Safety
 * `model` and `surface` must be live handles and `out` writable.
 */
WcsStatus wcs_verdict(const WcsModel *model,
                      const WcsSurface *surface,
                      double eps,
                      const WcsVerdictOptions *options,
                      WcsReport **out);

/**
 * # Safety
 * `report` must come from this library or be null.
 */
void wcs_report_free(WcsReport *report);

/**
 * Any output pointer may be null.
 *
 * # Safety
 * `report` must be a live handle.
 */
WcsStatus wcs_report_values(const WcsReport *report,
                            double *lambda1,
                            double *delta1,
                            double *sum,
                            WcsVerdict *verdict);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
WcsStatus wcs_report_to_json(const WcsReport *report, char **out);

/**
 * Closed-form bound `n²/8 − 2n + 2`.
 */
double wcs_paper_bound(size_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WCS_H */
