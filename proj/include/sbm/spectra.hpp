#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sbm/detlaw.hpp"
#include "sbm/model.hpp"

namespace sbm::spectra {

using detlaw::ComplexPoint;
using detlaw::cplx;

struct SampleMeta {
    model::SbmParams params;
    std::uint64_t seed = 0;
    double flow_time = 0.0;
    /// Trace of the source matrix, kept for the eigenvalue-sum check.
    double source_trace = 0.0;
};

/// Eigenvalues in descending order, optionally with eigenvectors.
///
/// Vectors are stored column-major as an N x M block, M <= N, column j
/// belonging to eigenvalues[j]. M = N for a full decomposition, M = k for a
/// top-k request.
struct SpectralSample {
    std::vector<double> eigenvalues;
    std::vector<double> vectors;
    std::size_t vector_count = 0;
    SampleMeta meta;

    std::size_t size() const { return eigenvalues.size(); }
    bool has_vectors() const { return vector_count > 0; }
    std::span<const double> vector(std::size_t j) const {
        return {vectors.data() + j * eigenvalues.size(), eigenvalues.size()};
    }
};

enum class VectorMode { none, all, top };

/// Symmetric eigendecomposition (Householder tridiagonalization + LAPACK
/// tridiagonal solvers). VectorMode::top returns all eigenvalues but only the
/// `top_k` leading eigenvectors. Throws Error(NonConvergence) if the
/// tridiagonal iteration fails.
SpectralSample eigen_sym(const model::SymMatrix& h, VectorMode mode = VectorMode::none, std::size_t top_k = 0);
inline SpectralSample eigen_sym(const model::SymMatrix& h, bool want_vectors) {
    return eigen_sym(h, want_vectors ? VectorMode::all : VectorMode::none);
}

/// Symmetric tridiagonal form: diagonal and off-diagonal.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag;
};

Tridiagonal tridiagonalize(const model::SymMatrix& h);

/// Number of eigenvalues of the tridiagonal matrix strictly below x (Sturm count).
std::size_t sturm_count(const Tridiagonal& t, double x);

struct Extremes {
    double largest = 0.0;
    double smallest = 0.0;
};

/// lambda_1 and lambda_N by Sturm bisection on the tridiagonal form, to
/// absolute accuracy ~1e-13 (relative to the spectral radius).
Extremes extremal_eigenvalues(const model::SymMatrix& h);
Extremes extremal_eigenvalues(const Tridiagonal& t);

/// Extremes of sample_centered(params, trial_seed(params.seed, i)) for
/// i < trials, in trial order, using the Sturm fast path.
std::vector<Extremes> ensemble_extremes(const model::SbmParams& params, std::size_t trials, std::size_t threads = 0,
                                        model::SampleOptions options = {});

/// (1/N) sum_k 1/(lambda_k - z).
cplx empirical_stieltjes(const SpectralSample& sample, ComplexPoint z);

struct ResolventStats {
    /// max_k |G_kk - m_sc(z)|
    double lambda_d = 0.0;
    /// max_{k != l} |G_kl|
    double lambda_o = 0.0;
    /// max_i |sum_j |G_ij|^2 - Im G_ii / eta|
    double wald_residual = 0.0;
    /// max_i |G_ii - m|, m = tr G / N
    double diag_spread = 0.0;
    cplx m;
};

/// Full resolvent G = (H - z)^{-1} by complex LU with partial pivoting.
/// Throws Error(SizeGuard) for N > 2000 unless `force`.
ResolventStats resolvent_entry_stats(const model::SymMatrix& h, ComplexPoint z, bool force = false);

/// (1/N) |{i : e1 < lambda_i < e2}|. Infinite bounds are allowed.
double esd_count(const SpectralSample& sample, double e1, double e2);

/// max_i ||u_i||_inf over the stored eigenvectors. Throws Error(MissingVectors).
double delocalization_stat(const SpectralSample& sample);

/// max |<u_i, u_j> - delta_ij| over the stored eigenvectors.
double orthonormality_residual(const SpectralSample& sample);

/// ||H - V diag(lambda) V^T||_F for a full decomposition.
double reconstruction_residual(const model::SymMatrix& h, const SpectralSample& sample);

}  // namespace sbm::spectra
