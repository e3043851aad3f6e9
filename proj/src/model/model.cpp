#include "sbm/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sbm/error.hpp"
#include "sbm/rng.hpp"

namespace sbm::model {

namespace {

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

std::uint64_t bounded(CounterRng& rng, std::uint64_t range) {
    const unsigned __int128 p = static_cast<unsigned __int128>(rng()) * range;
    return static_cast<std::uint64_t>(p >> 64);
}

}  // namespace

void SbmParams::validate() const {
    std::ostringstream why;
    if (n_vertices == 0) why << "n_vertices must be positive; ";
    if (n_communities == 0) why << "n_communities must be positive; ";
    if (n_communities != 0 && n_vertices % n_communities != 0)
        why << "n_communities (" << n_communities << ") must divide n_vertices (" << n_vertices << "); ";
    if (!open_unit(p_intra)) why << "p_intra must lie in (0,1); ";
    if (!open_unit(p_inter)) why << "p_inter must lie in (0,1); ";
    const std::string msg = why.str();
    if (!msg.empty()) throw Error(ErrorCode::InvalidArgument, msg.substr(0, msg.size() - 2));
}

double SbmParams::sigma_sq() const {
    const double n = static_cast<double>(n_vertices);
    const double k = static_cast<double>(n_communities);
    return n / k * p_intra * (1.0 - p_intra) + n * (k - 1.0) / k * p_inter * (1.0 - p_inter);
}

CommunityLayout::CommunityLayout(std::size_t n_vertices, std::size_t n_communities)
    : labels_(n_vertices), k_(n_communities) {
    if (n_communities == 0 || n_vertices % n_communities != 0)
        throw Error(ErrorCode::InvalidArgument, "n_communities must divide n_vertices");
    const std::size_t block = n_vertices / n_communities;
    for (std::size_t i = 0; i < n_vertices; ++i) labels_[i] = i / block;
}

CommunityLayout::CommunityLayout(const SbmParams& params)
    : CommunityLayout(params.n_vertices, params.n_communities) {
    if (!params.permuted_layout) return;
    CounterRng rng(params.seed, streams::layout);
    for (std::size_t i = labels_.size(); i > 1; --i) {
        const std::size_t j = bounded(rng, i);
        std::swap(labels_[i - 1], labels_[j]);
    }
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i];
    return t;
}

double SymMatrix::frobenius_norm() const {
    return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0));
}

double SymMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            worst = std::max(worst, std::abs(data_[i * n_ + j] - data_[j * n_ + i]));
    return worst;
}

SymMatrix SymMatrix::from_upper(std::size_t order, std::span<const double> row_major) {
    if (row_major.size() != order * order)
        throw Error(ErrorCode::DimensionMismatch, "buffer does not hold order^2 values");
    SymMatrix m(order);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = i; j < order; ++j) m.set(i, j, row_major[i * order + j]);
    return m;
}

double CumulantProfile::row_variance_sum() const {
    const double n = static_cast<double>(n_vertices);
    const double k = static_cast<double>(n_communities);
    return n / k * kappa2_s + n * (k - 1.0) / k * kappa2_d;
}

SymMatrix sample_adjacency(const SbmParams& params, std::uint64_t rng_seed, SampleOptions options) {
    params.validate();
    const double n = static_cast<double>(params.n_vertices);
    if (n * params.p_inter < 1.0 && !options.allow_below_connectivity) {
        std::ostringstream msg;
        msg << "N*p_inter = " << n * params.p_inter
            << " < 1: graph is below the connectivity scale and spectral statistics are meaningless"
               " (override with allow_below_connectivity)";
        throw Error(ErrorCode::BelowConnectivityScale, msg.str());
    }
    const CommunityLayout layout(params);
    const double value = 1.0 / std::sqrt(params.sigma_sq());
    const std::size_t order = params.n_vertices;
    SymMatrix a(order);
    CounterRng rng(rng_seed, streams::adjacency);
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = i + 1; j < order; ++j) {
            const double p = layout.same(i, j) ? params.p_intra : params.p_inter;
            if (rng.uniform() < p) a.set(i, j, value);
        }
    }
    return a;
}

SymMatrix center_rescale(const SymMatrix& adjacency, const SbmParams& params) {
    params.validate();
    if (adjacency.order() != params.n_vertices) {
        std::ostringstream msg;
        msg << "adjacency has order " << adjacency.order() << " but params.n_vertices = " << params.n_vertices;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    const CommunityLayout layout(params);
    const double sigma = std::sqrt(params.sigma_sq());
    const double shift_s = params.p_intra / sigma;
    const double shift_d = params.p_inter / sigma;
    SymMatrix centered(adjacency.order());
    for (std::size_t i = 0; i < adjacency.order(); ++i)
        for (std::size_t j = i + 1; j < adjacency.order(); ++j)
            centered.set(i, j, adjacency(i, j) - (layout.same(i, j) ? shift_s : shift_d));
    return centered;
}

SymMatrix expected_adjacency(const SbmParams& params) {
    params.validate();
    const CommunityLayout layout(params);
    const double sigma = std::sqrt(params.sigma_sq());
    SymMatrix ea(params.n_vertices);
    for (std::size_t i = 0; i < params.n_vertices; ++i)
        for (std::size_t j = i + 1; j < params.n_vertices; ++j)
            ea.set(i, j, (layout.same(i, j) ? params.p_intra : params.p_inter) / sigma);
    return ea;
}

SymMatrix sample_centered(const SbmParams& params, std::uint64_t rng_seed, SampleOptions options) {
    return center_rescale(sample_adjacency(params, rng_seed, options), params);
}

double bernoulli_centered_cumulant(double p, double sigma, int k) {
    if (!open_unit(p)) throw Error(ErrorCode::InvalidArgument, "p must lie in (0,1)");
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    const double v = p * (1.0 - p);
    switch (k) {
        case 2: return v / (sigma * sigma);
        case 3: return v * (1.0 - 2.0 * p) / (sigma * sigma * sigma);
        case 4: return v * (1.0 - 6.0 * p + 6.0 * p * p) / (sigma * sigma * sigma * sigma);
        default: throw Error(ErrorCode::InvalidArgument, "cumulant order must be 2, 3 or 4");
    }
}

CumulantProfile cumulant_profile(const SbmParams& params) {
    params.validate();
    CumulantProfile prof;
    prof.n_vertices = params.n_vertices;
    prof.n_communities = params.n_communities;
    prof.sigma_sq = params.sigma_sq();
    const double sigma = std::sqrt(prof.sigma_sq);
    prof.kappa2_s = bernoulli_centered_cumulant(params.p_intra, sigma, 2);
    prof.kappa2_d = bernoulli_centered_cumulant(params.p_inter, sigma, 2);
    prof.kappa3_s = bernoulli_centered_cumulant(params.p_intra, sigma, 3);
    prof.kappa3_d = bernoulli_centered_cumulant(params.p_inter, sigma, 3);
    prof.kappa4_s = bernoulli_centered_cumulant(params.p_intra, sigma, 4);
    prof.kappa4_d = bernoulli_centered_cumulant(params.p_inter, sigma, 4);

    const double n = static_cast<double>(params.n_vertices);
    const double k = static_cast<double>(params.n_communities);
    const double kappa2_eff = (prof.kappa2_s + (k - 1.0) * prof.kappa2_d) / k;
    const double kappa4_eff = (prof.kappa4_s + (k - 1.0) * prof.kappa4_d) / k;
    if (kappa4_eff == 0.0)
        throw Error(ErrorCode::InvalidArgument, "community-averaged fourth cumulant vanishes; q is undefined");
    prof.q = std::sqrt(kappa2_eff / std::abs(kappa4_eff));

    const double q = prof.q;
    prof.s2_s = n * prof.kappa2_s;
    prof.s2_d = n * prof.kappa2_d;
    prof.s3_s = n * q * prof.kappa3_s;
    prof.s3_d = n * q * prof.kappa3_d;
    prof.s4_s = n * q * q * prof.kappa4_s;
    prof.s4_d = n * q * q * prof.kappa4_d;
    prof.zeta = (prof.s2_s - prof.s2_d) / k;
    prof.xi4 = (prof.s4_s + (k - 1.0) * prof.s4_d) / k;
    return prof;
}

FlowSample dyson_flow_sample(const SymMatrix& h0, double t, std::uint64_t gauss_seed,
                             const CumulantProfile& profile, const CommunityLayout& layout) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "flow time t must be nonnegative");
    if (h0.order() != profile.n_vertices || layout.size() != h0.order())
        throw Error(ErrorCode::DimensionMismatch, "h0, profile and layout disagree on N");

    FlowSample out;
    out.t = t;
    out.q_t = profile.q * std::exp(t / 2.0);
    out.zeta_t = static_cast<double>(profile.n_vertices) / static_cast<double>(profile.n_communities) *
                 (profile.kappa2_s - profile.kappa2_d);
    if (t == 0.0) {
        out.matrix = h0;
        return out;
    }
    const double keep = std::exp(-t / 2.0);
    const double mix = std::sqrt(-std::expm1(-t));
    const double sd_s = std::sqrt(profile.kappa2_s);
    const double sd_d = std::sqrt(profile.kappa2_d);
    CounterRng rng(gauss_seed, streams::gaussian);
    const std::size_t order = h0.order();
    out.matrix = SymMatrix(order);
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = i + 1; j < order; ++j) {
            const double w = rng.normal() * (layout.same(i, j) ? sd_s : sd_d);
            out.matrix.set(i, j, keep * h0(i, j) + mix * w);
        }
    }
    return out;
}

FlowSample dyson_flow_sample(const SymMatrix& h0, double t, std::uint64_t gauss_seed,
                             const CumulantProfile& profile) {
    return dyson_flow_sample(h0, t, gauss_seed, profile,
                             CommunityLayout(profile.n_vertices, profile.n_communities));
}

}  // namespace sbm::model
