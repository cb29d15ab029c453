#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwind/config.hpp"
#include "qwind/laws.hpp"
#include "qwind/winding_sim.hpp"

namespace qwind {

/// Monte Carlo rows with fewer paths than this are reported as
/// "insufficient samples" instead of being evaluated.
inline constexpr std::size_t kMinVerifyPaths = 30;

/// One comparison: estimate vs reference under the stated tolerance rule.
struct ReportRow
{
    std::string name;
    WindingVector lambda;
    std::string estimator;
    std::complex<double> value;
    double stderr = 0.0;
    std::string reference;
    std::complex<double> reference_value;
    double reference_stderr = 0.0;
    double tolerance = 0.0;
    std::string rule;
    std::optional<bool> pass;  // empty when skipped
    std::string status = "ok";
    std::size_t n_paths = 0;
    double wall_time = 0.0;
};

struct Report
{
    nlohmann::json config;
    std::vector<ReportRow> rows;

    std::size_t passed() const;
    std::size_t failed() const;
    std::size_t skipped() const;
    bool ok() const { return failed() == 0; }

    /// `wall_time = false` drops the timing fields (for byte comparisons).
    nlohmann::json to_json(bool wall_time = true) const;
    std::string dump(bool wall_time = true) const;
};

/// Runs every comparison applicable to the configured geometry and routes.
/// Failures of individual estimators are recorded in their rows.
Report run_verify(const RunConfig& cfg);

/// Writes the report as JSON (2-space indent, trailing newline).
void write_report(const Report& report, const std::string& path);

/// Columns: path_index, t, zeta1, zeta2, zeta3, clock (empty without clock).
void write_samples_csv(std::span<const WindingSample> samples, const std::string& path);
std::string samples_csv(std::span<const WindingSample> samples);

struct ConvergenceConfig
{
    GeometryKind geometry = GeometryKind::flat_H;
    std::vector<double> t_ladder;
    double start_radius = 1.0;
    double lambda_norm = 1.0;
    std::size_t n_paths = 2000;
    StepPolicy step_policy = StepPolicy::uniform(1e-3);
    std::uint64_t master_seed = 0;
    int workers = 1;
};

/// Long-time behaviour along a ladder of horizons. Rows carry
/// {t, scaling, estimate, stderr, target, discrepancy}:
/// flat: cf_flat_exact at 2|lambda|/sqrt(log t) and sqrt(2/log t)|lambda| vs e^{-|lambda|^2/2};
/// hp1: time-change estimate for zeta/sqrt(t) vs e^{-|lambda|^2} and for zeta/t vs 1;
/// hh1: cf_hh1_identity vs cf_hh1_limit.
nlohmann::json run_convergence(const ConvergenceConfig& cfg);

}  // namespace qwind
