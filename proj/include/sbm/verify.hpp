#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbm/detlaw.hpp"
#include "sbm/model.hpp"
#include "sbm/spectra.hpp"

namespace sbm::verify {

using detlaw::ComplexPoint;

/// Which spectral domain a grid must lie in.
enum class Domain {
    law,    // |E| < 3, 0 < eta <= 3
    local,  // additionally eta > N^{-1+ell}
};

struct GridSpec {
    std::vector<double> energies;
    std::vector<double> etas;
    Domain domain = Domain::law;
    double ell = 0.3;

    /// Throws Error(DomainViolation) naming the first offending point. `n` is
    /// only consulted for Domain::local.
    void validate(std::size_t n = 0) const;
    /// Row-major over (energy, eta).
    std::vector<ComplexPoint> points() const;

    bool operator==(const GridSpec&) const = default;
};

/// E in linspace(-2.5, 2.5, 21), eta in logspace(-2, 0.3, 12): 252 points.
GridSpec default_grid();

std::vector<double> linspace(double lo, double hi, std::size_t count);
/// 10^lo .. 10^hi, `count` points.
std::vector<double> logspace(double lo, double hi, std::size_t count);

/// Strong-law bound 1/q^2 + 1/(N eta).
double strong_bound(std::size_t n, double q, double eta);
/// psi(z) = 1/q + 1/sqrt(N eta).
double psi(std::size_t n, double q, double eta);

struct PointRecord {
    std::optional<ComplexPoint> z;
    std::optional<std::pair<double, double>> interval;
    /// Aggregated residual (median over trials unless noted per scan).
    double residual = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool pass = false;
    std::vector<double> trial_residuals;
    /// Scan-specific diagnostics (psi, lambda_o, ...).
    std::map<std::string, double> extra;
};

struct VerificationReport {
    std::string scan;
    model::SbmParams params;
    std::size_t trials = 0;
    double margin = 0.0;
    double q = 0.0;
    double edge = 0.0;
    /// The model's fourth cumulant was negative and the law used c4 = 0.
    bool clamped = false;
    std::vector<PointRecord> points;
    /// Trials whose own residual exceeded margin * bound at some point.
    std::vector<std::size_t> failing_trials;
    double median_ratio = 0.0;
    double max_ratio = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

struct ScanOptions {
    std::size_t threads = 0;
    model::SampleOptions sample;
};

/// |m - m~| against 1/q^2 + 1/(N eta); per point, pass if the median ratio over
/// trials is <= margin.
VerificationReport strong_law_scan(const model::SbmParams& params, const GridSpec& grid, std::size_t trials,
                                   double margin = 10.0, ScanOptions options = {});

/// Dense-resolvent scan of Lambda_o and max_i |G_ii - m| against psi(z). A
/// trial passes at z when both are <= margin * psi; a point passes when at
/// least `min_fraction` of trials do. margin <= 0 selects N^{0.2}.
VerificationReport weak_law_scan(const model::SbmParams& params, const std::vector<ComplexPoint>& z_list,
                                 std::size_t trials, double margin = 0.0, double ell = 0.3,
                                 double min_fraction = 0.9, ScanOptions options = {});

/// n(E1, E2) against the integral of rho~, bound (E2 - E1)/q^2 + 1/N; per
/// interval, pass if the median residual is <= margin * bound.
VerificationReport ids_compare(const model::SbmParams& params, const std::vector<std::pair<double, double>>& intervals,
                               std::size_t trials, double margin = 5.0, ScanOptions options = {});

/// median | ||H|| - L | against q^-4 + N^{-2/3}. When q^-2 >= 5 N^{-2/3} the
/// shift by L must also beat the shift by 2.
VerificationReport matrix_norm_check(const model::SbmParams& params, std::size_t trials, double margin = 10.0,
                                     ScanOptions options = {});
/// Same, from extremes already computed for trials 0..n-1.
VerificationReport matrix_norm_check(const model::SbmParams& params, const std::vector<spectra::Extremes>& extremes,
                                     double margin = 10.0);

double median(std::vector<double> values);

}  // namespace sbm::verify
