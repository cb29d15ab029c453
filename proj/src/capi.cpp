#include "qwind/qwind.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "qwind/config.hpp"
#include "qwind/errors.hpp"
#include "qwind/estimators.hpp"
#include "qwind/laws.hpp"
#include "qwind/report.hpp"
#include "qwind/winding_sim.hpp"

struct qw_samples
{
    std::vector<qwind::WindingSample> samples;
};

struct qw_density
{
    qwind::DensityGrid grid;
};

struct qw_config
{
    qwind::RunConfig config;
};

struct qw_report
{
    qwind::Report report;
};

namespace {

thread_local std::string g_last_error;

qw_status fail(qw_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

template <class F>
qw_status guarded(F&& f)
{
    try {
        f();
        g_last_error.clear();
        return QW_OK;
    } catch (const qwind::ConfigError& e) {
        return fail(QW_ERR_CONFIG, e.what());
    } catch (const qwind::DomainError& e) {
        return fail(QW_ERR_DOMAIN, e.what());
    } catch (const qwind::StepFailure& e) {
        return fail(QW_ERR_STEP, e.what());
    } catch (const qwind::AccuracyError& e) {
        return fail(QW_ERR_ACCURACY, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QW_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QW_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QW_ERR_INTERNAL, "unknown error");
    }
}

#define QW_REQUIRE(ptr)                                                                                      \
    do {                                                                                                     \
        if ((ptr) == nullptr)                                                                                \
            return fail(QW_ERR_ARGUMENT, std::string(__func__) + ": null argument '" #ptr "'");              \
    } while (0)

qwind::WindingVector vec(const double lambda[3]) { return {lambda[0], lambda[1], lambda[2]}; }

void store(const qwind::CfEstimate& e, qw_cf* out)
{
    out->lambda[0] = e.lambda.v1;
    out->lambda[1] = e.lambda.v2;
    out->lambda[2] = e.lambda.v3;
    out->re = e.value.real();
    out->im = e.value.imag();
    out->stderr_re = e.stderr;
    out->stderr_im = e.stderr_im;
}

qwind::McOptions mc_options(const qw_mc_options* mc)
{
    qwind::McOptions o;
    o.n_paths = mc->n_paths;
    o.master_seed = mc->master_seed;
    o.workers = mc->workers;
    o.policy = qwind::StepPolicy::uniform(mc->step);
    if (!(mc->step > 0.0))
        throw qwind::DomainError("step must be positive");
    return o;
}

bool geometry_ok(qw_geometry g) { return g == QW_GEOMETRY_FLAT || g == QW_GEOMETRY_HP1 || g == QW_GEOMETRY_HH1; }

qwind::GeometryKind to_kind(qw_geometry g)
{
    switch (g) {
    case QW_GEOMETRY_HP1:
        return qwind::GeometryKind::projective_HP1;
    case QW_GEOMETRY_HH1:
        return qwind::GeometryKind::hyperbolic_HH1;
    default:
        return qwind::GeometryKind::flat_H;
    }
}

char* dup_string(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

extern "C" {

const char* qw_version(void) { return "1.0.0"; }

const char* qw_status_name(qw_status status)
{
    switch (status) {
    case QW_OK:
        return "ok";
    case QW_ERR_ARGUMENT:
        return "invalid argument";
    case QW_ERR_DOMAIN:
        return "domain error";
    case QW_ERR_STEP:
        return "step failure";
    case QW_ERR_ACCURACY:
        return "accuracy error";
    case QW_ERR_CONFIG:
        return "configuration error";
    case QW_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* qw_last_error(void) { return g_last_error.c_str(); }

void qw_string_free(char* s) { std::free(s); }

qw_status qw_parse_geometry(const char* name, qw_geometry* out)
{
    QW_REQUIRE(name);
    QW_REQUIRE(out);
    return guarded([&] {
        switch (qwind::parse_geometry(name)) {
        case qwind::GeometryKind::flat_H:
            *out = QW_GEOMETRY_FLAT;
            break;
        case qwind::GeometryKind::projective_HP1:
            *out = QW_GEOMETRY_HP1;
            break;
        case qwind::GeometryKind::hyperbolic_HH1:
            *out = QW_GEOMETRY_HH1;
            break;
        }
    });
}

qw_status qw_cf_flat_exact(const double lambda[3], double t, double rho, qw_cf* out)
{
    QW_REQUIRE(lambda);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::cf_flat_exact(vec(lambda), t, rho), out); });
}

qw_status qw_cf_flat_girsanov(const double lambda[3], double t, double rho, const qw_mc_options* mc, qw_cf* out)
{
    QW_REQUIRE(lambda);
    QW_REQUIRE(mc);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::cf_flat_girsanov(vec(lambda), t, rho, mc_options(mc)), out); });
}

qw_status qw_cf_hp1_identity(const double lambda[3], double t, double r0, const qw_mc_options* mc, qw_cf* out)
{
    QW_REQUIRE(lambda);
    QW_REQUIRE(mc);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::cf_hp1_identity(vec(lambda), t, r0, mc_options(mc)), out); });
}

qw_status qw_cf_hh1_identity(const double lambda[3], double t, double r0, const qw_mc_options* mc, qw_cf* out)
{
    QW_REQUIRE(lambda);
    QW_REQUIRE(mc);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::cf_hh1_identity(vec(lambda), t, r0, mc_options(mc)), out); });
}

qw_status qw_cf_hh1_limit(const double lambda[3], double r0, qw_cf* out)
{
    QW_REQUIRE(lambda);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::cf_hh1_limit(vec(lambda), r0), out); });
}

qw_status qw_cosh2_moment(double alpha, double beta, double r0, double t, double* out)
{
    QW_REQUIRE(out);
    return guarded([&] { *out = qwind::cosh2_moment(alpha, beta, r0, t); });
}

qw_status qw_simulate(qw_geometry geometry, double t, double start_radius, size_t n_paths, qw_route route,
                      double step, uint64_t master_seed, int workers, qw_samples** out)
{
    QW_REQUIRE(out);
    *out = nullptr;
    if (!geometry_ok(geometry))
        return fail(QW_ERR_ARGUMENT, "qw_simulate: unknown geometry");
    if (route != QW_ROUTE_TIMECHANGE && route != QW_ROUTE_DIRECT)
        return fail(QW_ERR_ARGUMENT, "qw_simulate: unknown route");
    return guarded([&] {
        if (!(step > 0.0))
            throw qwind::DomainError("qw_simulate: step must be positive");
        const qwind::Geometry geom(to_kind(geometry), start_radius);
        qwind::SimOptions opts{master_seed, workers, qwind::StepPolicy::uniform(step)};
        auto s = std::make_unique<qw_samples>();
        s->samples = route == QW_ROUTE_TIMECHANGE ? qwind::simulate_timechange(geom, t, n_paths, opts)
                                                  : qwind::simulate_direct(geom, t, step, n_paths, opts);
        *out = s.release();
    });
}

size_t qw_samples_count(const qw_samples* samples) { return samples ? samples->samples.size() : 0; }

qw_status qw_samples_get(const qw_samples* samples, size_t index, double zeta[3], double* clock, int* has_clock)
{
    QW_REQUIRE(samples);
    QW_REQUIRE(zeta);
    if (index >= samples->samples.size())
        return fail(QW_ERR_ARGUMENT, "qw_samples_get: index out of range");
    const auto& s = samples->samples[index];
    zeta[0] = s.zeta.v1;
    zeta[1] = s.zeta.v2;
    zeta[2] = s.zeta.v3;
    if (clock)
        *clock = s.clock ? *s.clock : std::numeric_limits<double>::quiet_NaN();
    if (has_clock)
        *has_clock = s.clock ? 1 : 0;
    return QW_OK;
}

qw_status qw_samples_write_csv(const qw_samples* samples, const char* path)
{
    QW_REQUIRE(samples);
    QW_REQUIRE(path);
    return guarded([&] { qwind::write_samples_csv(samples->samples, path); });
}

qw_status qw_samples_empirical_cf(const qw_samples* samples, const double lambda[3], qw_cf* out)
{
    QW_REQUIRE(samples);
    QW_REQUIRE(lambda);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::empirical_cf(samples->samples, vec(lambda)), out); });
}

qw_status qw_samples_rao_blackwell_cf(const qw_samples* samples, const double lambda[3], qw_cf* out)
{
    QW_REQUIRE(samples);
    QW_REQUIRE(lambda);
    QW_REQUIRE(out);
    return guarded([&] { store(qwind::rao_blackwell_cf(samples->samples, vec(lambda)), out); });
}

void qw_samples_free(qw_samples* samples) { delete samples; }

qw_status qw_hh1_limit_density(double rho, double r0, double* out)
{
    QW_REQUIRE(out);
    return guarded([&] { *out = qwind::hh1_limit_density_radial(rho, r0); });
}

qw_status qw_relativistic_cauchy_density(double rho, double y, double* out)
{
    QW_REQUIRE(out);
    return guarded([&] { *out = qwind::relativistic_cauchy_density_radial(rho, y); });
}

qw_status qw_limit_density_grid(double r0, double rmax, size_t points, qw_density** out)
{
    QW_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto d = std::make_unique<qw_density>();
        d->grid = qwind::hh1_limit_density_grid(r0, rmax, points);
        *out = d.release();
    });
}

size_t qw_density_size(const qw_density* density) { return density ? density->grid.radii.size() : 0; }

qw_status qw_density_get(const qw_density* density, size_t index, double* radius, double* value)
{
    QW_REQUIRE(density);
    if (index >= density->grid.radii.size())
        return fail(QW_ERR_ARGUMENT, "qw_density_get: index out of range");
    if (radius)
        *radius = density->grid.radii[index];
    if (value)
        *value = density->grid.values[index];
    return QW_OK;
}

qw_status qw_density_write_csv(const qw_density* density, const char* path)
{
    QW_REQUIRE(density);
    QW_REQUIRE(path);
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw qwind::ConfigError(std::string("cannot write density to '") + path + "'");
        out << "radius,density\n";
        char buf[96];
        for (std::size_t i = 0; i < density->grid.radii.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", density->grid.radii[i], density->grid.values[i]);
            out << buf;
        }
    });
}

qw_status qw_density_radial_cf(const qw_density* density, double lambda_norm, double* out)
{
    QW_REQUIRE(density);
    QW_REQUIRE(out);
    return guarded([&] { *out = qwind::radial_cf(density->grid, lambda_norm); });
}

void qw_density_free(qw_density* density) { delete density; }

qw_status qw_config_parse(const char* json_text, qw_config** out)
{
    QW_REQUIRE(json_text);
    QW_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<qw_config>();
        c->config = qwind::parse_run_config(std::string_view(json_text));
        *out = c.release();
    });
}

qw_status qw_config_load(const char* path, qw_config** out)
{
    QW_REQUIRE(path);
    QW_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<qw_config>();
        c->config = qwind::load_run_config(path);
        *out = c.release();
    });
}

qw_status qw_config_set_output_path(qw_config* config, const char* path)
{
    QW_REQUIRE(config);
    QW_REQUIRE(path);
    return guarded([&] { config->config.output_path = path; });
}

qw_status qw_config_set_workers(qw_config* config, int workers)
{
    QW_REQUIRE(config);
    if (workers < 1)
        return fail(QW_ERR_CONFIG, "workers must be at least 1");
    config->config.workers = workers;
    return QW_OK;
}

qw_status qw_config_output_path(const qw_config* config, char** out)
{
    QW_REQUIRE(config);
    QW_REQUIRE(out);
    return guarded([&] { *out = dup_string(config->config.output_path); });
}

qw_status qw_config_to_json(const qw_config* config, char** out)
{
    QW_REQUIRE(config);
    QW_REQUIRE(out);
    return guarded([&] { *out = dup_string(qwind::to_json(config->config).dump(2) + "\n"); });
}

void qw_config_free(qw_config* config) { delete config; }

qw_status qw_run_verify(const qw_config* config, qw_report** out)
{
    QW_REQUIRE(config);
    QW_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<qw_report>();
        r->report = qwind::run_verify(config->config);
        if (!config->config.output_path.empty())
            qwind::write_report(r->report, config->config.output_path);
        *out = r.release();
    });
}

qw_status qw_report_summary(const qw_report* report, size_t* passed, size_t* failed, size_t* skipped)
{
    QW_REQUIRE(report);
    if (passed)
        *passed = report->report.passed();
    if (failed)
        *failed = report->report.failed();
    if (skipped)
        *skipped = report->report.skipped();
    return QW_OK;
}

qw_status qw_report_to_json(const qw_report* report, int include_wall_time, char** out)
{
    QW_REQUIRE(report);
    QW_REQUIRE(out);
    return guarded([&] { *out = dup_string(report->report.dump(include_wall_time != 0)); });
}

qw_status qw_report_write(const qw_report* report, const char* path)
{
    QW_REQUIRE(report);
    QW_REQUIRE(path);
    return guarded([&] { qwind::write_report(report->report, path); });
}

void qw_report_free(qw_report* report) { delete report; }

qw_status qw_convergence(const qw_convergence_options* options, char** json_out)
{
    QW_REQUIRE(options);
    QW_REQUIRE(json_out);
    if (!geometry_ok(options->geometry))
        return fail(QW_ERR_ARGUMENT, "qw_convergence: unknown geometry");
    if (options->t_count > 0 && options->t_ladder == nullptr)
        return fail(QW_ERR_ARGUMENT, "qw_convergence: null t ladder");
    return guarded([&] {
        qwind::ConvergenceConfig cfg;
        cfg.geometry = to_kind(options->geometry);
        cfg.t_ladder.assign(options->t_ladder, options->t_ladder + options->t_count);
        cfg.start_radius = options->start_radius;
        cfg.lambda_norm = options->lambda_norm;
        cfg.n_paths = options->n_paths;
        if (!(options->step > 0.0))
            throw qwind::DomainError("qw_convergence: step must be positive");
        cfg.step_policy = qwind::StepPolicy::uniform(options->step);
        cfg.master_seed = options->master_seed;
        cfg.workers = options->workers;
        *json_out = dup_string(qwind::run_convergence(cfg).dump(2) + "\n");
    });
}

}  // extern "C"
