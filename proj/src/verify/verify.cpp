#include "sbm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sbm/error.hpp"
#include "sbm/parallel.hpp"
#include "sbm/rng.hpp"

namespace sbm::verify {

namespace {

using detlaw::DeterministicLaw;
using detlaw::NegativeQuartic;

struct Setup {
    model::CumulantProfile profile;
    DeterministicLaw law;
};

Setup setup(const model::SbmParams& params) {
    params.validate();
    auto profile = model::cumulant_profile(params);
    auto law = DeterministicLaw::from_profile(profile, 0.0, NegativeQuartic::clamp_to_zero);
    return {profile, law};
}

VerificationReport blank(const std::string& scan, const model::SbmParams& params, const Setup& s, std::size_t trials,
                         double margin) {
    VerificationReport r;
    r.scan = scan;
    r.params = params;
    r.trials = trials;
    r.margin = margin;
    r.q = s.profile.q;
    r.edge = s.law.edge();
    r.clamped = s.law.clamped();
    return r;
}

void summarize(VerificationReport& r) {
    std::vector<double> ratios;
    r.pass = !r.points.empty();
    for (const auto& p : r.points) {
        ratios.push_back(p.ratio);
        r.pass = r.pass && p.pass;
    }
    r.median_ratio = ratios.empty() ? 0.0 : median(ratios);
    r.max_ratio = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

// Trials whose own residual at some point exceeded margin * bound.
void collect_failures(VerificationReport& r) {
    std::vector<bool> failed(r.trials, false);
    for (const auto& p : r.points)
        for (std::size_t t = 0; t < p.trial_residuals.size(); ++t)
            if (p.trial_residuals[t] > r.margin * p.bound) failed[t] = true;
    for (std::size_t t = 0; t < r.trials; ++t)
        if (failed[t]) r.failing_trials.push_back(t);
}

void require_trials(std::size_t trials) {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
}

[[noreturn]] void domain_error(ComplexPoint z, const char* what) {
    std::ostringstream msg;
    msg << "grid point z = " << z.re << " + " << z.im << "i violates " << what;
    throw Error(ErrorCode::DomainViolation, msg.str());
}

void check_point(ComplexPoint z, Domain domain, double ell, std::size_t n) {
    if (!(z.im > 0.0)) domain_error(z, "eta > 0");
    if (!(z.im <= 3.0)) domain_error(z, "eta <= 3");
    if (!(std::abs(z.re) < 3.0)) domain_error(z, "|E| < 3");
    if (domain == Domain::local && !(z.im > std::pow(static_cast<double>(n), -1.0 + ell)))
        domain_error(z, "eta > N^{-1+ell}");
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "median of nothing");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

void GridSpec::validate(std::size_t n) const {
    if (energies.empty() || etas.empty()) throw Error(ErrorCode::EmptyInput, "grid has no points");
    for (const auto& z : points()) check_point(z, domain, ell, n);
}

std::vector<ComplexPoint> GridSpec::points() const {
    std::vector<ComplexPoint> out;
    out.reserve(energies.size() * etas.size());
    for (double e : energies)
        for (double eta : etas) out.push_back({e, eta});
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 1) return {lo};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    auto out = linspace(lo, hi, count);
    for (double& v : out) v = std::pow(10.0, v);
    return out;
}

GridSpec default_grid() { return {linspace(-2.5, 2.5, 21), logspace(-2.0, 0.3, 12), Domain::law, 0.3}; }

double strong_bound(std::size_t n, double q, double eta) {
    return 1.0 / (q * q) + 1.0 / (static_cast<double>(n) * eta);
}

double psi(std::size_t n, double q, double eta) { return 1.0 / q + 1.0 / std::sqrt(static_cast<double>(n) * eta); }

VerificationReport strong_law_scan(const model::SbmParams& params, const GridSpec& grid, std::size_t trials,
                                   double margin, ScanOptions options) {
    require_trials(trials);
    const Setup s = setup(params);
    grid.validate(params.n_vertices);
    const auto zs = grid.points();

    std::vector<detlaw::cplx> predicted(zs.size());
    for (std::size_t k = 0; k < zs.size(); ++k) predicted[k] = detlaw::mtilde(zs[k], s.law);

    std::vector<std::vector<double>> residual(zs.size(), std::vector<double>(trials));
    parallel_for(trials, resolve_threads(options.threads), [&](std::size_t t) {
        const auto h = model::sample_centered(params, trial_seed(params.seed, t), options.sample);
        const auto sample = spectra::eigen_sym(h);
        for (std::size_t k = 0; k < zs.size(); ++k)
            residual[k][t] = std::abs(spectra::empirical_stieltjes(sample, zs[k]) - predicted[k]);
    });

    auto report = blank("strong", params, s, trials, margin);
    for (std::size_t k = 0; k < zs.size(); ++k) {
        PointRecord p;
        p.z = zs[k];
        p.residual = median(residual[k]);
        p.bound = strong_bound(params.n_vertices, s.profile.q, zs[k].im);
        p.ratio = p.residual / p.bound;
        p.pass = p.ratio <= margin;
        p.trial_residuals = std::move(residual[k]);
        report.points.push_back(std::move(p));
    }
    collect_failures(report);
    summarize(report);
    return report;
}

VerificationReport weak_law_scan(const model::SbmParams& params, const std::vector<ComplexPoint>& z_list,
                                 std::size_t trials, double margin, double ell, double min_fraction,
                                 ScanOptions options) {
    require_trials(trials);
    if (z_list.empty()) throw Error(ErrorCode::EmptyInput, "no z points");
    const Setup s = setup(params);
    const std::size_t n = params.n_vertices;
    for (const auto& z : z_list) check_point(z, Domain::local, ell, n);
    if (margin <= 0.0) margin = std::pow(static_cast<double>(n), 0.2);

    struct Cell {
        double lambda_o, lambda_d, spread, m_msc;
    };
    std::vector<std::vector<Cell>> cells(z_list.size(), std::vector<Cell>(trials));
    parallel_for(trials, resolve_threads(options.threads), [&](std::size_t t) {
        const auto h = model::sample_centered(params, trial_seed(params.seed, t), options.sample);
        for (std::size_t k = 0; k < z_list.size(); ++k) {
            const auto st = spectra::resolvent_entry_stats(h, z_list[k]);
            cells[k][t] = {st.lambda_o, st.lambda_d, st.diag_spread, std::abs(st.m - detlaw::msc(z_list[k]))};
        }
    });

    auto report = blank("weak", params, s, trials, margin);
    for (std::size_t k = 0; k < z_list.size(); ++k) {
        const ComplexPoint z = z_list[k];
        PointRecord p;
        p.z = z;
        p.bound = psi(n, s.profile.q, z.im);
        std::vector<double> lo, ld, spread, mm;
        std::size_t good = 0;
        for (const auto& c : cells[k]) {
            lo.push_back(c.lambda_o);
            ld.push_back(c.lambda_d);
            spread.push_back(c.spread);
            mm.push_back(c.m_msc);
            p.trial_residuals.push_back(std::max(c.lambda_o, c.spread));
            if (c.lambda_o <= margin * p.bound && c.spread <= margin * p.bound) ++good;
        }
        p.residual = median(p.trial_residuals);
        p.ratio = p.residual / p.bound;
        const double fraction = static_cast<double>(good) / static_cast<double>(trials);
        p.pass = fraction >= min_fraction;
        const double m_bound = 1.0 / std::sqrt(s.profile.q) + std::cbrt(1.0 / (static_cast<double>(n) * z.im));
        p.extra = {{"psi", p.bound},
                   {"lambda_o_median", median(lo)},
                   {"lambda_d_median", median(ld)},
                   {"diag_spread_median", median(spread)},
                   {"m_msc_median", median(mm)},
                   {"m_msc_bound", m_bound},
                   {"m_msc_ratio", median(mm) / m_bound},
                   {"pass_fraction", fraction}};
        report.points.push_back(std::move(p));
    }
    collect_failures(report);
    summarize(report);
    return report;
}

VerificationReport ids_compare(const model::SbmParams& params, const std::vector<std::pair<double, double>>& intervals,
                               std::size_t trials, double margin, ScanOptions options) {
    require_trials(trials);
    if (intervals.empty()) throw Error(ErrorCode::EmptyInput, "no intervals");
    const Setup s = setup(params);
    for (const auto& [a, b] : intervals) {
        if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "interval needs E1 < E2");
        if (!(a > -3.0 && b < 3.0)) throw Error(ErrorCode::DomainViolation, "interval must lie inside (-3, 3)");
    }
    std::vector<double> predicted;
    for (const auto& [a, b] : intervals) predicted.push_back(detlaw::integrated_density(a, b, s.law));

    std::vector<std::vector<double>> residual(intervals.size(), std::vector<double>(trials));
    parallel_for(trials, resolve_threads(options.threads), [&](std::size_t t) {
        const auto sample =
            spectra::eigen_sym(model::sample_centered(params, trial_seed(params.seed, t), options.sample));
        for (std::size_t k = 0; k < intervals.size(); ++k)
            residual[k][t] =
                std::abs(spectra::esd_count(sample, intervals[k].first, intervals[k].second) - predicted[k]);
    });

    auto report = blank("ids", params, s, trials, margin);
    const double q2 = s.profile.q * s.profile.q;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        PointRecord p;
        p.interval = intervals[k];
        p.bound = (intervals[k].second - intervals[k].first) / q2 + 1.0 / static_cast<double>(params.n_vertices);
        p.residual = median(residual[k]);
        p.ratio = p.residual / p.bound;
        p.pass = p.ratio <= margin;
        p.extra = {{"predicted", predicted[k]}};
        p.trial_residuals = std::move(residual[k]);
        report.points.push_back(std::move(p));
    }
    collect_failures(report);
    summarize(report);
    return report;
}

VerificationReport matrix_norm_check(const model::SbmParams& params, std::size_t trials, double margin,
                                     ScanOptions options) {
    require_trials(trials);
    params.validate();
    return matrix_norm_check(params, spectra::ensemble_extremes(params, trials, options.threads, options.sample),
                             margin);
}

VerificationReport matrix_norm_check(const model::SbmParams& params, const std::vector<spectra::Extremes>& extremes,
                                     double margin) {
    require_trials(extremes.size());
    const Setup s = setup(params);
    const double n = static_cast<double>(params.n_vertices);
    const double q = s.profile.q;
    const double l = s.law.edge();

    std::vector<double> to_l, to_2;
    for (const auto& e : extremes) {
        const double norm = std::max(e.largest, -e.smallest);
        to_l.push_back(std::abs(norm - l));
        to_2.push_back(std::abs(norm - 2.0));
    }
    auto report = blank("norm", params, s, extremes.size(), margin);
    PointRecord p;
    p.bound = std::pow(q, -4.0) + std::pow(n, -2.0 / 3.0);
    p.residual = median(to_l);
    p.ratio = p.residual / p.bound;
    const double med2 = median(to_2);
    const bool shift_regime = 1.0 / (q * q) >= 5.0 * std::pow(n, -2.0 / 3.0);
    p.pass = p.ratio <= margin && (!shift_regime || p.residual < med2);
    p.extra = {{"median_shift_2", med2}, {"shift_regime", shift_regime ? 1.0 : 0.0}, {"edge", l}};
    p.trial_residuals = std::move(to_l);
    report.points.push_back(std::move(p));
    collect_failures(report);
    summarize(report);
    return report;
}

nlohmann::json VerificationReport::to_json() const {
    using nlohmann::json;
    json pts = json::array();
    for (const auto& p : points) {
        json j;
        if (p.z) j["z"] = {p.z->re, p.z->im};
        if (p.interval) j["interval"] = {p.interval->first, p.interval->second};
        j["residual"] = p.residual;
        j["bound"] = p.bound;
        j["ratio"] = p.ratio;
        j["pass"] = p.pass;
        for (const auto& [key, value] : p.extra) j[key] = value;
        pts.push_back(std::move(j));
    }
    return json{{"scan", scan},
                {"params",
                 {{"n", params.n_vertices},
                  {"k", params.n_communities},
                  {"p_intra", params.p_intra},
                  {"p_inter", params.p_inter},
                  {"seed", params.seed},
                  {"permuted_layout", params.permuted_layout}}},
                {"trials", trials},
                {"margin", margin},
                {"q", q},
                {"edge", edge},
                {"clamped", clamped},
                {"points", std::move(pts)},
                {"failing_trials", failing_trials},
                {"summary", {{"median_ratio", median_ratio}, {"max_ratio", max_ratio}, {"pass", pass}}}};
}

}  // namespace sbm::verify
