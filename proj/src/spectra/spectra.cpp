#include "sbm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lapack.hpp"
#include "sbm/error.hpp"
#include "sbm/parallel.hpp"
#include "sbm/rng.hpp"

namespace sbm::spectra {

namespace {

constexpr std::size_t kResolventSizeGuard = 2000;

void check_info(lapack_int info, const char* routine) {
    if (info == 0) return;
    std::ostringstream msg;
    msg << routine << " returned info = " << info;
    throw Error(info > 0 ? ErrorCode::NonConvergence : ErrorCode::InvalidArgument, msg.str());
}

SampleMeta meta_for(const model::SymMatrix& h) {
    SampleMeta meta;
    meta.source_trace = h.trace();
    return meta;
}

// Householder reduction in place. `a` is column-major (symmetric, so any
// layout of h works); on return the lower triangle holds the reflectors.
void reduce(std::vector<double>& a, lapack_int n, std::vector<double>& d, std::vector<double>& e,
            std::vector<double>& tau) {
    d.resize(n);
    e.resize(std::max<lapack_int>(n - 1, 1));
    tau.resize(std::max<lapack_int>(n - 1, 1));
    check_info(LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, a.data(), n, d.data(), e.data(), tau.data()), "dsytrd");
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const auto n = static_cast<lapack_int>(d.size());
    check_info(LAPACKE_dsterf(n, d.data(), e.data()), "dsterf");
    std::reverse(d.begin(), d.end());
    return d;
}

}  // namespace

SpectralSample eigen_sym(const model::SymMatrix& h, VectorMode mode, std::size_t top_k) {
    detail::prepare_blas();
    const std::size_t order = h.order();
    const auto n = static_cast<lapack_int>(order);
    SpectralSample out;
    out.meta = meta_for(h);
    if (order == 0) return out;
    for (double v : h.values())
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");

    std::vector<double> a(h.values().begin(), h.values().end());
    if (mode == VectorMode::all) {
        std::vector<double> w(order);
        std::vector<double> z(order * order);
        std::vector<lapack_int> support(2 * order);
        lapack_int found = 0;
        check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                                  w.data(), z.data(), n, support.data()),
                   "dsyevr");
        out.eigenvalues.assign(w.rbegin(), w.rend());
        out.vectors.resize(order * order);
        for (std::size_t j = 0; j < order; ++j)
            std::copy_n(z.begin() + static_cast<std::ptrdiff_t>((order - 1 - j) * order), order,
                        out.vectors.begin() + static_cast<std::ptrdiff_t>(j * order));
        out.vector_count = order;
        return out;
    }

    std::vector<double> d, e, tau;
    reduce(a, n, d, e, tau);
    out.eigenvalues = tridiagonal_eigenvalues(d, e);
    if (mode == VectorMode::none) return out;

    if (top_k == 0 || top_k > order) throw Error(ErrorCode::InvalidArgument, "top_k must lie in [1, N]");
    const auto k = static_cast<lapack_int>(top_k);
    std::vector<double> dd = d;
    std::vector<double> ee(order, 0.0);
    std::copy(e.begin(), e.begin() + (n - 1), ee.begin());
    std::vector<double> w(order);
    std::vector<double> z(order * top_k);
    std::vector<lapack_int> support(2 * top_k);
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    check_info(LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, dd.data(), ee.data(), 0.0, 0.0, n - k + 1, n, &found,
                              w.data(), z.data(), n, k, support.data(), &tryrac),
               "dstemr");
    if (found != k) throw Error(ErrorCode::NonConvergence, "dstemr returned fewer eigenvectors than requested");
    check_info(LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, k, a.data(), n, tau.data(), z.data(), n),
               "dormtr");
    out.vectors.resize(order * top_k);
    for (std::size_t j = 0; j < top_k; ++j)
        std::copy_n(z.begin() + static_cast<std::ptrdiff_t>((top_k - 1 - j) * order), order,
                    out.vectors.begin() + static_cast<std::ptrdiff_t>(j * order));
    out.vector_count = top_k;
    return out;
}

Tridiagonal tridiagonalize(const model::SymMatrix& h) {
    detail::prepare_blas();
    const auto n = static_cast<lapack_int>(h.order());
    std::vector<double> a(h.values().begin(), h.values().end());
    Tridiagonal t;
    std::vector<double> tau;
    reduce(a, n, t.diag, t.offdiag, tau);
    t.offdiag.resize(h.order() > 0 ? h.order() - 1 : 0);
    return t;
}

std::size_t sturm_count(const Tridiagonal& t, double x) {
    const std::size_t n = t.diag.size();
    if (n == 0) return 0;
    double scale = 0.0;
    for (double b : t.offdiag) scale = std::max(scale, b * b);
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale);
    std::size_t count = 0;
    double d = t.diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const double b = t.offdiag[i - 1];
        d = t.diag[i] - x - b * b / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

Extremes extremal_eigenvalues(const Tridiagonal& t) {
    const std::size_t n = t.diag.size();
    if (n == 0) throw Error(ErrorCode::EmptyInput, "empty matrix");
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(t.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.offdiag[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double radius = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * radius;
    lo -= tol;
    hi += tol;

    // Smallest x with sturm_count(x) >= target, by bisection.
    auto locate = [&](std::size_t target) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > tol; ++it) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(t, mid) >= target)
                b = mid;
            else
                a = mid;
        }
        return 0.5 * (a + b);
    };
    return {locate(n), locate(1)};
}

Extremes extremal_eigenvalues(const model::SymMatrix& h) { return extremal_eigenvalues(tridiagonalize(h)); }

std::vector<Extremes> ensemble_extremes(const model::SbmParams& params, std::size_t trials, std::size_t threads,
                                        model::SampleOptions options) {
    params.validate();
    std::vector<Extremes> out(trials);
    parallel_for(trials, resolve_threads(threads), [&](std::size_t i) {
        out[i] = extremal_eigenvalues(model::sample_centered(params, trial_seed(params.seed, i), options));
    });
    return out;
}

cplx empirical_stieltjes(const SpectralSample& sample, ComplexPoint z) {
    if (sample.eigenvalues.empty()) throw Error(ErrorCode::EmptyInput, "empty spectrum");
    const cplx zz = z.value();
    cplx sum = 0.0;
    for (double lambda : sample.eigenvalues) sum += 1.0 / (lambda - zz);
    return sum / static_cast<double>(sample.eigenvalues.size());
}

ResolventStats resolvent_entry_stats(const model::SymMatrix& h, ComplexPoint z, bool force) {
    const std::size_t order = h.order();
    if (order > kResolventSizeGuard && !force) {
        std::ostringstream msg;
        msg << "dense resolvent requested for N = " << order << " > " << kResolventSizeGuard << " (pass force)";
        throw Error(ErrorCode::SizeGuard, msg.str());
    }
    if (!(z.im > 0.0)) throw Error(ErrorCode::DomainViolation, "resolvent needs Im z > 0");
    if (order == 0) throw Error(ErrorCode::EmptyInput, "empty matrix");
    detail::prepare_blas();
    const auto n = static_cast<lapack_int>(order);
    const cplx zz = z.value();

    std::vector<cplx> g(order * order);
    for (std::size_t j = 0; j < order; ++j)
        for (std::size_t i = 0; i < order; ++i) {
            g[j * order + i] = h(i, j) - (i == j ? zz : 0.0);
        }
    std::vector<lapack_int> pivots(order);
    check_info(LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, g.data(), n, pivots.data()), "zgetrf");
    check_info(LAPACKE_zgetri(LAPACK_COL_MAJOR, n, g.data(), n, pivots.data()), "zgetri");

    auto entry = [&](std::size_t i, std::size_t j) { return g[j * order + i]; };
    ResolventStats stats;
    cplx trace = 0.0;
    for (std::size_t i = 0; i < order; ++i) trace += entry(i, i);
    stats.m = trace / static_cast<double>(order);
    const cplx m_sc = detlaw::msc(z);
    std::vector<double> row_norm(order, 0.0);
    for (std::size_t j = 0; j < order; ++j) {
        for (std::size_t i = 0; i < order; ++i) {
            const cplx gij = entry(i, j);
            row_norm[i] += std::norm(gij);
            if (i != j) stats.lambda_o = std::max(stats.lambda_o, std::abs(gij));
        }
    }
    for (std::size_t i = 0; i < order; ++i) {
        const cplx gii = entry(i, i);
        stats.lambda_d = std::max(stats.lambda_d, std::abs(gii - m_sc));
        stats.diag_spread = std::max(stats.diag_spread, std::abs(gii - stats.m));
        stats.wald_residual = std::max(stats.wald_residual, std::abs(row_norm[i] - gii.imag() / z.im));
    }
    return stats;
}

double esd_count(const SpectralSample& sample, double e1, double e2) {
    if (!(e1 < e2)) throw Error(ErrorCode::InvalidArgument, "esd_count needs e1 < e2");
    if (sample.eigenvalues.empty()) throw Error(ErrorCode::EmptyInput, "empty spectrum");
    const auto& ev = sample.eigenvalues;
    const auto above_e1 = std::partition_point(ev.begin(), ev.end(), [e1](double l) { return l > e1; });
    const auto at_least_e2 = std::partition_point(ev.begin(), ev.end(), [e2](double l) { return l >= e2; });
    return static_cast<double>(above_e1 - at_least_e2) / static_cast<double>(ev.size());
}

double delocalization_stat(const SpectralSample& sample) {
    if (!sample.has_vectors()) throw Error(ErrorCode::MissingVectors, "sample carries no eigenvectors");
    double worst = 0.0;
    for (double v : sample.vectors) worst = std::max(worst, std::abs(v));
    return worst;
}

double orthonormality_residual(const SpectralSample& sample) {
    if (!sample.has_vectors()) throw Error(ErrorCode::MissingVectors, "sample carries no eigenvectors");
    double worst = 0.0;
    for (std::size_t a = 0; a < sample.vector_count; ++a) {
        const auto ua = sample.vector(a);
        for (std::size_t b = a; b < sample.vector_count; ++b) {
            const auto ub = sample.vector(b);
            const double dot = std::inner_product(ua.begin(), ua.end(), ub.begin(), 0.0);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double reconstruction_residual(const model::SymMatrix& h, const SpectralSample& sample) {
    const std::size_t order = h.order();
    if (sample.vector_count != order) throw Error(ErrorCode::MissingVectors, "need a full set of eigenvectors");
    double sum = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = 0; j < order; ++j) {
            double r = h(i, j);
            for (std::size_t k = 0; k < order; ++k)
                r -= sample.vectors[k * order + i] * sample.eigenvalues[k] * sample.vectors[k * order + j];
            sum += r * r;
        }
    }
    return std::sqrt(sum);
}

}  // namespace sbm::spectra
