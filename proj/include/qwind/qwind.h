#ifndef QWIND_QWIND_H
#define QWIND_QWIND_H

/* C interface to the qwind library. Every call returns a qw_status; on
 * failure the message is available from qw_last_error() on the same thread.
 * Strings returned through char** are owned by the caller and released with
 * qw_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QW_API __declspec(dllexport)
#elif defined(__GNUC__)
#define QW_API __attribute__((visibility("default")))
#else
#define QW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qw_status {
    QW_OK = 0,
    QW_ERR_ARGUMENT = 1, /* null pointer or bad enum */
    QW_ERR_DOMAIN = 2,   /* precondition violated */
    QW_ERR_STEP = 3,     /* simulation step failure */
    QW_ERR_ACCURACY = 4, /* quadrature budget exhausted */
    QW_ERR_CONFIG = 5,   /* invalid configuration or unwritable file */
    QW_ERR_INTERNAL = 6
} qw_status;

typedef enum qw_geometry { QW_GEOMETRY_FLAT = 0, QW_GEOMETRY_HP1 = 1, QW_GEOMETRY_HH1 = 2 } qw_geometry;

typedef enum qw_route { QW_ROUTE_TIMECHANGE = 0, QW_ROUTE_DIRECT = 1 } qw_route;

QW_API const char* qw_version(void);
QW_API const char* qw_status_name(qw_status status);
QW_API const char* qw_last_error(void);
QW_API void qw_string_free(char* s);

QW_API qw_status qw_parse_geometry(const char* name, qw_geometry* out);

/* Characteristic function value with standard errors (zero for closed forms). */
typedef struct qw_cf {
    double lambda[3];
    double re;
    double im;
    double stderr_re;
    double stderr_im;
} qw_cf;

/* Monte Carlo controls for the Girsanov estimators. */
typedef struct qw_mc_options {
    size_t n_paths;
    uint64_t master_seed;
    int workers;
    double step;
} qw_mc_options;

QW_API qw_status qw_cf_flat_exact(const double lambda[3], double t, double rho, qw_cf* out);
QW_API qw_status qw_cf_flat_girsanov(const double lambda[3], double t, double rho, const qw_mc_options* mc,
                                     qw_cf* out);
QW_API qw_status qw_cf_hp1_identity(const double lambda[3], double t, double r0, const qw_mc_options* mc,
                                    qw_cf* out);
QW_API qw_status qw_cf_hh1_identity(const double lambda[3], double t, double r0, const qw_mc_options* mc,
                                    qw_cf* out);
QW_API qw_status qw_cf_hh1_limit(const double lambda[3], double r0, qw_cf* out);
QW_API qw_status qw_cosh2_moment(double alpha, double beta, double r0, double t, double* out);

/* Winding samples. */
typedef struct qw_samples qw_samples;

QW_API qw_status qw_simulate(qw_geometry geometry, double t, double start_radius, size_t n_paths, qw_route route,
                             double step, uint64_t master_seed, int workers, qw_samples** out);
QW_API size_t qw_samples_count(const qw_samples* samples);
/* clock is set to NaN and *has_clock to 0 for direct-route samples. */
QW_API qw_status qw_samples_get(const qw_samples* samples, size_t index, double zeta[3], double* clock,
                                int* has_clock);
QW_API qw_status qw_samples_write_csv(const qw_samples* samples, const char* path);
QW_API qw_status qw_samples_empirical_cf(const qw_samples* samples, const double lambda[3], qw_cf* out);
QW_API qw_status qw_samples_rao_blackwell_cf(const qw_samples* samples, const double lambda[3], qw_cf* out);
QW_API void qw_samples_free(qw_samples* samples);

/* Densities of the hyperbolic limit law. */
typedef struct qw_density qw_density;

QW_API qw_status qw_hh1_limit_density(double rho, double r0, double* out);
QW_API qw_status qw_relativistic_cauchy_density(double rho, double y, double* out);
QW_API qw_status qw_limit_density_grid(double r0, double rmax, size_t points, qw_density** out);
QW_API size_t qw_density_size(const qw_density* density);
QW_API qw_status qw_density_get(const qw_density* density, size_t index, double* radius, double* value);
/* Columns: radius, density. */
QW_API qw_status qw_density_write_csv(const qw_density* density, const char* path);
QW_API qw_status qw_density_radial_cf(const qw_density* density, double lambda_norm, double* out);
QW_API void qw_density_free(qw_density* density);

/* Run configuration (JSON, unknown keys rejected) and verification reports. */
typedef struct qw_config qw_config;
typedef struct qw_report qw_report;

QW_API qw_status qw_config_parse(const char* json_text, qw_config** out);
QW_API qw_status qw_config_load(const char* path, qw_config** out);
QW_API qw_status qw_config_set_output_path(qw_config* config, const char* path);
QW_API qw_status qw_config_set_workers(qw_config* config, int workers);
QW_API qw_status qw_config_output_path(const qw_config* config, char** out);
QW_API qw_status qw_config_to_json(const qw_config* config, char** out);
QW_API void qw_config_free(qw_config* config);

QW_API qw_status qw_run_verify(const qw_config* config, qw_report** out);
QW_API qw_status qw_report_summary(const qw_report* report, size_t* passed, size_t* failed, size_t* skipped);
QW_API qw_status qw_report_to_json(const qw_report* report, int include_wall_time, char** out);
QW_API qw_status qw_report_write(const qw_report* report, const char* path);
QW_API void qw_report_free(qw_report* report);

/* Long-time behaviour along a ladder of horizons; result is a JSON document. */
typedef struct qw_convergence_options {
    qw_geometry geometry;
    const double* t_ladder;
    size_t t_count;
    double start_radius;
    double lambda_norm;
    size_t n_paths;
    double step;
    uint64_t master_seed;
    int workers;
} qw_convergence_options;

QW_API qw_status qw_convergence(const qw_convergence_options* options, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
