#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sbm::model {

/// Balanced stochastic block model: N vertices in K equal communities, edge
/// probability p_intra inside a community and p_inter across.
struct SbmParams {
    std::size_t n_vertices = 0;
    std::size_t n_communities = 1;
    double p_intra = 0.0;
    double p_inter = 0.0;
    std::uint64_t seed = 0;
    /// Assign vertices to communities by a seeded random permutation instead
    /// of contiguous index blocks.
    bool permuted_layout = false;

    /// Throws Error(InvalidArgument) unless K | N and both probabilities lie in (0,1).
    void validate() const;
    std::size_t block_size() const { return n_vertices / n_communities; }
    /// sigma^2 = (N/K) p_s (1-p_s) + (N(K-1)/K) p_d (1-p_d).
    double sigma_sq() const;

    bool operator==(const SbmParams&) const = default;
};

/// Community label of every vertex.
class CommunityLayout {
public:
    /// Contiguous blocks [l N/K, (l+1) N/K), or the seeded permutation of them.
    explicit CommunityLayout(const SbmParams& params);
    CommunityLayout(std::size_t n_vertices, std::size_t n_communities);

    std::size_t size() const { return labels_.size(); }
    std::size_t n_communities() const { return k_; }
    std::size_t community(std::size_t i) const { return labels_[i]; }
    bool same(std::size_t i, std::size_t j) const { return labels_[i] == labels_[j]; }
    std::span<const std::size_t> labels() const { return labels_; }

private:
    std::vector<std::size_t> labels_;
    std::size_t k_;
};

/// Dense real symmetric matrix, row-major with both triangles stored.
/// Writes go through set(), which keeps the triangles mirrored.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t order) : n_(order), data_(order * order, 0.0) {}

    std::size_t order() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        data_[i * n_ + j] = v;
        data_[j * n_ + i] = v;
    }

    std::span<const double> values() const { return data_; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    double trace() const;
    double frobenius_norm() const;
    /// Max |a_ij - a_ji|; zero for anything built through set().
    double asymmetry() const;

    /// Adopts a full row-major buffer; the upper triangle is authoritative.
    static SymMatrix from_upper(std::size_t order, std::span<const double> row_major);

    bool operator==(const SymMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Normalized cumulant profile of the centered, rescaled model.
struct CumulantProfile {
    std::size_t n_vertices = 0;
    std::size_t n_communities = 1;
    double sigma_sq = 0.0;
    /// Raw entry cumulants kappa^(k) for same-block (s) and cross-block (d) pairs.
    double kappa2_s = 0.0, kappa2_d = 0.0;
    double kappa3_s = 0.0, kappa3_d = 0.0;
    double kappa4_s = 0.0, kappa4_d = 0.0;
    double q = 0.0;
    /// s^(k) = N q^(k-2) kappa^(k).
    double s2_s = 0.0, s2_d = 0.0, s3_s = 0.0, s3_d = 0.0, s4_s = 0.0, s4_d = 0.0;
    double zeta = 0.0;
    double xi4 = 0.0;

    /// Sum_j sigma_ij^2 with the balanced block counts (N/K, N(K-1)/K).
    double row_variance_sum() const;
};

struct SampleOptions {
    /// Sample even when N p_inter < 1, where the graph is below connectivity scale.
    bool allow_below_connectivity = false;
};

/// A_ij = 1/sigma with probability p_s (same block) or p_d (different blocks), else 0;
/// zero diagonal. Throws Error(BelowConnectivityScale) when N p_d < 1 unless overridden.
SymMatrix sample_adjacency(const SbmParams& params, std::uint64_t rng_seed, SampleOptions options = {});

/// Subtracts E A entrywise: off-diagonal entries shift by -p_x / sigma.
SymMatrix center_rescale(const SymMatrix& adjacency, const SbmParams& params);

/// E A itself (block-constant p_x / sigma off the diagonal, zero diagonal).
SymMatrix expected_adjacency(const SbmParams& params);

/// Centered and rescaled sample in one step; what every ensemble routine draws.
SymMatrix sample_centered(const SbmParams& params, std::uint64_t rng_seed, SampleOptions options = {});

/// k-th cumulant (k = 2, 3, 4) of the two-point law (1-p)/sigma w.p. p, -p/sigma w.p. 1-p.
double bernoulli_centered_cumulant(double p, double sigma, int k);

/// sigma^2, block cumulants, q := sqrt(kappa2_eff / |kappa4_eff|) with
/// kappa_eff = (kappa_s + (K-1) kappa_d)/K, then s^(k), zeta and xi4.
CumulantProfile cumulant_profile(const SbmParams& params);

/// Output of the Dyson matrix flow with its time-dependent parameters.
struct FlowSample {
    SymMatrix matrix;
    double t = 0.0;
    /// q_t = q e^{t/2}.
    double q_t = 0.0;
    /// zeta_t = (N/K)(kappa2_{t,s} - kappa2_{t,d}); second cumulants are conserved.
    double zeta_t = 0.0;
};

/// H_t = e^{-t/2} H_0 + sqrt(1 - e^{-t}) W, W symmetric Gaussian with zero diagonal
/// and per-block variance matching H_0. Throws Error(InvalidArgument) for t < 0.
FlowSample dyson_flow_sample(const SymMatrix& h0, double t, std::uint64_t gauss_seed,
                             const CumulantProfile& profile, const CommunityLayout& layout);
/// Same, with the contiguous layout implied by the profile.
FlowSample dyson_flow_sample(const SymMatrix& h0, double t, std::uint64_t gauss_seed,
                             const CumulantProfile& profile);

}  // namespace sbm::model
