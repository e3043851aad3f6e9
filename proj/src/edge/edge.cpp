#include "sbm/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sbm/error.hpp"
#include "sbm/rng.hpp"

namespace sbm::edge {

namespace {

constexpr double kTableValues[] = {
#include "tw1_table.inc"
};

int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Fritsch-Carlson slopes for uniform spacing, with the shape-preserving
// three-point formula at the ends.
std::vector<double> pchip_slopes(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / h;
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double a = delta[k - 1], b = delta[k];
        d[k] = (sign(a) * sign(b) <= 0) ? 0.0 : 2.0 / (1.0 / a + 1.0 / b);
    }
    auto end_slope = [](double d0, double d1) {
        double s = (3.0 * d0 - d1) / 2.0;
        if (sign(s) != sign(d0)) return 0.0;
        if (sign(d0) != sign(d1) && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    };
    d[0] = end_slope(delta[0], delta[1]);
    d[n - 1] = end_slope(delta[n - 2], delta[n - 3]);
    return d;
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0) throw Error(ErrorCode::InvalidArgument, "Simpson's rule needs an odd node count >= 3");
    double sum = f.front() + f.back();
    for (std::size_t k = 1; k + 1 < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f[k];
    return sum * h / 3.0;
}

}  // namespace

TWTable::TWTable(double s0, double step, std::vector<double> cdf) : s0_(s0), step_(step), cdf_(std::move(cdf)) {
    if (cdf_.size() < 3 || !(step_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "TW table needs >= 3 nodes");
    slope_ = pchip_slopes(cdf_, step_);
}

const TWTable& TWTable::goe() {
    static const TWTable table(-8.0, 0.05, std::vector<double>(std::begin(kTableValues), std::end(kTableValues)));
    return table;
}

double TWTable::cdf(double s) const {
    if (!(s >= s0_)) return 0.0;
    if (s >= hi()) return 1.0;
    const double x = (s - s0_) / step_;
    const auto k = std::min(static_cast<std::size_t>(x), cdf_.size() - 2);
    const double t = x - static_cast<double>(k);
    const double t2 = t * t, t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * cdf_[k] + (t3 - 2 * t2 + t) * step_ * slope_[k] +
                     (-2 * t3 + 3 * t2) * cdf_[k + 1] + (t3 - t2) * step_ * slope_[k + 1];
    return std::clamp(v, 0.0, 1.0);
}

double TWTable::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile needs 0 < p < 1");
    double a = lo(), b = hi();
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        (cdf(mid) >= p ? b : a) = mid;
    }
    return b;
}

// Integration by parts: E s = [s F] - int F, E s^2 = [s^2 F] - 2 int s F.
double TWTable::mean() const {
    return hi() * cdf_.back() - lo() * cdf_.front() - simpson(cdf_, step_);
}

double TWTable::variance() const {
    std::vector<double> sf(cdf_.size());
    for (std::size_t k = 0; k < cdf_.size(); ++k) sf[k] = (s0_ + step_ * static_cast<double>(k)) * cdf_[k];
    const double second = hi() * hi() * cdf_.back() - lo() * lo() * cdf_.front() - 2.0 * simpson(sf, step_);
    const double m = mean();
    return second - m * m;
}

double tw1_cdf(double s, const TWTable& table) { return table.cdf(s); }

EdgeEnsemble edge_ensemble(const model::SbmParams& params, std::size_t trials, const detlaw::DeterministicLaw& law,
                           std::size_t threads, model::SampleOptions options) {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    return edge_ensemble(params, spectra::ensemble_extremes(params, trials, threads, options), law);
}

EdgeEnsemble edge_ensemble(const model::SbmParams& params, const std::vector<spectra::Extremes>& extremes,
                           const detlaw::DeterministicLaw& law) {
    EdgeEnsemble out;
    out.params = params;
    out.edge = law.edge();
    const double scale = std::pow(static_cast<double>(params.n_vertices), 2.0 / 3.0);
    for (std::size_t i = 0; i < extremes.size(); ++i) {
        const double l1 = extremes[i].largest;
        out.seeds.push_back(trial_seed(params.seed, i));
        out.lambda1.push_back(l1);
        out.rescaled_L.push_back(scale * (l1 - out.edge));
        out.rescaled_2.push_back(scale * (l1 - 2.0));
    }
    return out;
}

double ks_distance(std::span<const double> samples, const TWTable& table) {
    if (samples.empty()) throw Error(ErrorCode::EmptyInput, "ks_distance needs samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = table.cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double sample_mean(std::span<const double> v) {
    if (v.empty()) throw Error(ErrorCode::EmptyInput, "mean of nothing");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw Error(ErrorCode::EmptyInput, "variance needs two samples");
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins) {
    if (bins == 0 || !(lo < hi)) throw Error(ErrorCode::InvalidArgument, "histogram needs bins >= 1 and lo < hi");
    Histogram h;
    h.counts.assign(bins, 0);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges.push_back(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins));
    for (double x : samples) {
        if (!(x >= lo && x < hi)) continue;
        const auto b = std::min(static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins)), bins - 1);
        ++h.counts[b];
    }
    return h;
}

Regime regime(const model::SbmParams& params) {
    params.validate();
    const double n = static_cast<double>(params.n_vertices);
    const double k = static_cast<double>(params.n_communities);
    const double p = (params.p_intra + (k - 1.0) * params.p_inter) / k;
    if (p < std::log(n) / n) return Regime::disconnected;
    if (p < std::pow(n, -2.0 / 3.0)) return Regime::crossover;
    return Regime::tracy_widom;
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::tracy_widom: return "tracy_widom";
        case Regime::crossover: return "crossover";
        case Regime::disconnected: return "disconnected";
    }
    return "unknown";
}

}  // namespace sbm::edge
