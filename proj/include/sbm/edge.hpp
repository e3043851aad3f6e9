#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sbm/detlaw.hpp"
#include "sbm/model.hpp"
#include "sbm/spectra.hpp"

namespace sbm::edge {

/// Tabulated GOE Tracy-Widom CDF F1 with monotone cubic (PCHIP) interpolation.
class TWTable {
public:
    TWTable(double s0, double step, std::vector<double> cdf);

    /// The embedded table: s = -8 .. 8 in steps of 0.05.
    static const TWTable& goe();

    /// Interpolated F1(s), clamped to [0, 1]; 0 left of the grid, 1 right of it.
    double cdf(double s) const;
    /// Smallest s with cdf(s) >= p, by bisection on the interpolant.
    double quantile(double p) const;
    /// Moments of the tabulated law (Simpson's rule on the nodes).
    double mean() const;
    double variance() const;

    double lo() const { return s0_; }
    double hi() const { return s0_ + step_ * static_cast<double>(cdf_.size() - 1); }
    double step() const { return step_; }
    std::span<const double> values() const { return cdf_; }

private:
    double s0_;
    double step_;
    std::vector<double> cdf_;
    std::vector<double> slope_;
};

double tw1_cdf(double s, const TWTable& table = TWTable::goe());

/// Largest eigenvalues of an ensemble and their two edge rescalings.
struct EdgeEnsemble {
    model::SbmParams params;
    double edge = 2.0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> lambda1;
    /// N^{2/3} (lambda_1 - L)
    std::vector<double> rescaled_L;
    /// N^{2/3} (lambda_1 - 2)
    std::vector<double> rescaled_2;
};

EdgeEnsemble edge_ensemble(const model::SbmParams& params, std::size_t trials, const detlaw::DeterministicLaw& law,
                           std::size_t threads = 0, model::SampleOptions options = {});
/// Same, from extremes of trials 0..n-1 computed elsewhere.
EdgeEnsemble edge_ensemble(const model::SbmParams& params, const std::vector<spectra::Extremes>& extremes,
                           const detlaw::DeterministicLaw& law);

/// One-sample Kolmogorov-Smirnov statistic against the table. Throws Error(EmptyInput).
double ks_distance(std::span<const double> samples, const TWTable& table = TWTable::goe());

double sample_mean(std::span<const double> v);
double sample_variance(std::span<const double> v);

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

/// `bins` equal bins on [lo, hi); samples outside are dropped.
Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins);

/// Where a configuration sits relative to the edge-fluctuation regimes, by the
/// mean edge probability p = (p_s + (K-1) p_d) / K.
enum class Regime {
    tracy_widom,   // p >= N^{-2/3}
    crossover,     // log N / N <= p < N^{-2/3}: TW fit expected to fail
    disconnected,  // p < log N / N: isolated vertices
};

Regime regime(const model::SbmParams& params);
std::string_view to_string(Regime r);

}  // namespace sbm::edge
