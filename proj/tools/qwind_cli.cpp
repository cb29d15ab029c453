#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwind/qwind.h"

namespace {

struct CliError
{
    int code;
};

void check(qw_status s, const char* what)
{
    if (s != QW_OK) {
        std::fprintf(stderr, "qwind: %s failed (%s): %s\n", what, qw_status_name(s), qw_last_error());
        throw CliError{s == QW_ERR_CONFIG || s == QW_ERR_ARGUMENT ? 2 : 3};
    }
}

qw_geometry geometry_from(const std::string& name)
{
    qw_geometry g{};
    check(qw_parse_geometry(name.c_str(), &g), "parsing --geometry");
    return g;
}

// "1.5" is the frequency (1.5, 0, 0); "x:y:z" is a full 3-vector.
std::vector<std::array<double, 3>> parse_lambdas(const std::vector<std::string>& items)
{
    std::vector<std::array<double, 3>> out;
    for (const auto& item : items) {
        std::array<double, 3> v{0.0, 0.0, 0.0};
        std::stringstream ss(item);
        std::string part;
        int k = 0;
        while (std::getline(ss, part, ':')) {
            if (k == 3)
                throw CLI::ValidationError("--lambda-grid", "too many components in '" + item + "'");
            try {
                std::size_t used = 0;
                v[k++] = std::stod(part, &used);
                if (used != part.size())
                    throw std::invalid_argument(part);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--lambda-grid", "not a number: '" + part + "'");
            }
        }
        if (k != 1 && k != 3)
            throw CLI::ValidationError("--lambda-grid", "expected a norm or x:y:z, got '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Winding functionals of quaternionic Brownian motions: simulation and verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qw_version()));

    // simulate
    std::string geometry = "flat";
    double t = 1.0;
    double r0 = 1.0;
    std::size_t paths = 10000;
    std::string route = "timechange";
    double step = 1e-3;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out;

    auto* sim = app.add_subcommand("simulate", "Draw winding samples and write them as CSV");
    sim->add_option("--geometry", geometry, "flat, hp1 or hh1")->capture_default_str();
    sim->add_option("--t", t, "Horizon")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--r0", r0, "Start radius (|W0| or r(0))")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--paths", paths, "Number of paths")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--route", route, "timechange or direct")
        ->capture_default_str()
        ->check(CLI::IsMember({"timechange", "direct"}));
    sim->add_option("--step", step, "Time step")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "Master seed")->capture_default_str();
    sim->add_option("--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--out", out, "Output CSV path")->required();

    // cf
    std::vector<std::string> lambda_grid{"0.5", "1", "2"};
    bool exact = false, girsanov = false, limit = false, as_json = false;
    auto* cf = app.add_subcommand("cf", "Characteristic function on a frequency grid");
    cf->add_option("--geometry", geometry, "flat, hp1 or hh1")->capture_default_str();
    cf->add_option("--lambda-grid", lambda_grid, "Comma-separated norms or x:y:z vectors")
        ->delimiter(',')
        ->capture_default_str();
    cf->add_option("--t", t, "Horizon")->capture_default_str();
    cf->add_option("--r0", r0, "Start radius")->capture_default_str();
    cf->add_option("--paths", paths, "Paths for Girsanov estimators")->capture_default_str();
    cf->add_option("--step", step, "Time step")->capture_default_str();
    cf->add_option("--seed", seed, "Master seed")->capture_default_str();
    cf->add_option("--workers", workers, "Worker threads")->capture_default_str();
    auto* f_exact = cf->add_flag("--exact", exact, "Flat quadrature formula");
    auto* f_gir = cf->add_flag("--girsanov", girsanov, "Girsanov identity (Monte Carlo)");
    auto* f_lim = cf->add_flag("--limit", limit, "Long-time limit (hh1)");
    f_exact->excludes(f_gir)->excludes(f_lim);
    f_gir->excludes(f_lim);
    cf->add_flag("--json", as_json, "Print JSON instead of a table");

    // limit-density
    double rmax = 50.0;
    std::size_t points = 2001;
    auto* dens = app.add_subcommand("limit-density", "Tabulate the hh1 limit density on a radial grid");
    dens->add_option("--r0", r0, "Start radius")->capture_default_str()->check(CLI::PositiveNumber);
    dens->add_option("--rmax", rmax, "Largest radius")->capture_default_str()->check(CLI::PositiveNumber);
    dens->add_option("--points", points, "Grid points")->capture_default_str();
    dens->add_option("--out", out, "Output CSV path")->required();

    // verify
    std::string config_path;
    int verify_workers = 0;
    auto* ver = app.add_subcommand("verify", "Run the verification comparisons for a config");
    ver->add_option("--config", config_path, "RunConfig JSON")->required()->check(CLI::ExistingFile);
    ver->add_option("--out", out, "Report path (overrides outputPath)");
    ver->add_option("--workers", verify_workers, "Override the worker count");

    // convergence
    std::vector<double> ladder;
    double lambda_norm = 1.0;
    std::size_t conv_paths = 2000;
    auto* conv = app.add_subcommand("convergence", "Long-time behaviour along a ladder of horizons");
    conv->add_option("--geometry", geometry, "flat, hp1 or hh1")->capture_default_str();
    conv->add_option("--t-ladder", ladder, "Comma-separated horizons")->delimiter(',')->required();
    conv->add_option("--r0", r0, "Start radius")->capture_default_str();
    conv->add_option("--lambda", lambda_norm, "Frequency norm")->capture_default_str();
    conv->add_option("--paths", conv_paths, "Paths (Monte Carlo geometries)")->capture_default_str();
    conv->add_option("--step", step, "Time step")->capture_default_str();
    conv->add_option("--seed", seed, "Master seed")->capture_default_str();
    conv->add_option("--workers", workers, "Worker threads")->capture_default_str();
    conv->add_option("--out", out, "Write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            qw_samples* s = nullptr;
            check(qw_simulate(geometry_from(geometry), t, r0, paths,
                              route == "direct" ? QW_ROUTE_DIRECT : QW_ROUTE_TIMECHANGE, step, seed, workers, &s),
                  "simulate");
            const qw_status st = qw_samples_write_csv(s, out.c_str());
            const std::size_t n = qw_samples_count(s);
            qw_samples_free(s);
            check(st, "writing samples");
            std::printf("wrote %zu samples to %s\n", n, out.c_str());
            return 0;
        }

        if (cf->parsed()) {
            const qw_geometry g = geometry_from(geometry);
            std::string method = exact ? "exact" : girsanov ? "girsanov" : limit ? "limit" : "";
            if (method.empty())
                method = g == QW_GEOMETRY_FLAT ? "exact" : g == QW_GEOMETRY_HP1 ? "girsanov" : "limit";
            if ((method == "exact" && g != QW_GEOMETRY_FLAT) || (method == "limit" && g != QW_GEOMETRY_HH1)) {
                std::fprintf(stderr, "qwind: --%s is not available for geometry %s\n", method.c_str(),
                             geometry.c_str());
                return 2;
            }
            const qw_mc_options mc{paths, seed, workers, step};
            std::vector<qw_cf> values;
            for (const auto& l : parse_lambdas(lambda_grid)) {
                qw_cf v{};
                if (method == "exact")
                    check(qw_cf_flat_exact(l.data(), t, r0, &v), "cf_flat_exact");
                else if (method == "limit")
                    check(qw_cf_hh1_limit(l.data(), r0, &v), "cf_hh1_limit");
                else if (g == QW_GEOMETRY_FLAT)
                    check(qw_cf_flat_girsanov(l.data(), t, r0, &mc, &v), "cf_flat_girsanov");
                else if (g == QW_GEOMETRY_HP1)
                    check(qw_cf_hp1_identity(l.data(), t, r0, &mc, &v), "cf_hp1_identity");
                else
                    check(qw_cf_hh1_identity(l.data(), t, r0, &mc, &v), "cf_hh1_identity");
                values.push_back(v);
            }
            if (as_json) {
                std::printf("{\"geometry\": \"%s\", \"method\": \"%s\", \"values\": [", geometry.c_str(),
                            method.c_str());
                for (std::size_t i = 0; i < values.size(); ++i) {
                    const auto& v = values[i];
                    std::printf("%s\n  {\"lambda\": [%.17g, %.17g, %.17g], \"re\": %.17g, \"im\": %.17g, "
                                "\"stderr\": %.17g}",
                                i ? "," : "", v.lambda[0], v.lambda[1], v.lambda[2], v.re, v.im, v.stderr_re);
                }
                std::printf("\n]}\n");
            } else {
                std::printf("%-28s %-20s %-12s\n", "lambda", "value", "stderr");
                for (const auto& v : values) {
                    char lam[64];
                    std::snprintf(lam, sizeof lam, "(%.4g, %.4g, %.4g)", v.lambda[0], v.lambda[1], v.lambda[2]);
                    std::printf("%-28s %-20.12g %-12.3g\n", lam, v.re, v.stderr_re);
                }
            }
            return 0;
        }

        if (dens->parsed()) {
            qw_density* d = nullptr;
            check(qw_limit_density_grid(r0, rmax, points, &d), "limit-density");
            double mass = 0.0;
            qw_status st = qw_density_radial_cf(d, 0.0, &mass);
            if (st == QW_OK)
                st = qw_density_write_csv(d, out.c_str());
            const std::size_t n = qw_density_size(d);
            qw_density_free(d);
            check(st, "limit-density");
            std::printf("wrote %zu grid points to %s (mass on grid %.10f)\n", n, out.c_str(), mass);
            return 0;
        }

        if (ver->parsed()) {
            qw_config* c = nullptr;
            check(qw_config_load(config_path.c_str(), &c), "loading config");
            if (!out.empty())
                check(qw_config_set_output_path(c, out.c_str()), "setting output path");
            if (verify_workers > 0)
                check(qw_config_set_workers(c, verify_workers), "setting workers");
            qw_report* r = nullptr;
            const qw_status st = qw_run_verify(c, &r);
            char* path = nullptr;
            qw_config_output_path(c, &path);
            const std::string report_path = path ? path : "";
            qw_string_free(path);
            qw_config_free(c);
            check(st, "verify");
            std::size_t passed = 0, failed = 0, skipped = 0;
            qw_report_summary(r, &passed, &failed, &skipped);
            if (report_path.empty()) {
                char* text = nullptr;
                check(qw_report_to_json(r, 1, &text), "serializing report");
                std::fputs(text, stdout);
                qw_string_free(text);
            }
            qw_report_free(r);
            std::fprintf(stderr, "verify: %zu passed, %zu failed, %zu skipped%s%s\n", passed, failed, skipped,
                         report_path.empty() ? "" : "; report written to ", report_path.c_str());
            return failed == 0 ? 0 : 1;
        }

        if (conv->parsed()) {
            const qw_convergence_options o{geometry_from(geometry), ladder.data(), ladder.size(), r0, lambda_norm,
                                           conv_paths, step, seed, workers};
            char* text = nullptr;
            check(qw_convergence(&o, &text), "convergence");
            if (out.empty()) {
                std::fputs(text, stdout);
            } else {
                std::ofstream f(out, std::ios::binary);
                f << text;
                if (!f) {
                    qw_string_free(text);
                    std::fprintf(stderr, "qwind: cannot write %s\n", out.c_str());
                    return 2;
                }
            }
            qw_string_free(text);
            return 0;
        }
    } catch (const CliError& e) {
        return e.code;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "qwind: %s\n", e.what());
        return 2;
    }
    return 0;
}
