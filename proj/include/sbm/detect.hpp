#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sbm/model.hpp"
#include "sbm/spectra.hpp"

namespace sbm::detect {

struct GapReport {
    double lambda_K = 0.0;
    double lambda_K1 = 0.0;
    double bulk_edge_threshold = 2.1;
    /// lambda_K - lambda_{K+1}
    double gap = 0.0;
    /// lambda_{K+1} - lambda_{K+2}
    double intra_bulk_gap = 0.0;
    bool pass = false;
};

/// |{i : lambda_i > threshold}|. Meant for the non-centered rescaled A.
std::size_t count_outliers(const spectra::SpectralSample& sample, double threshold = 2.1);

/// pass iff lambda_{K+1} < 2 + c < lambda_K and gap > 10 * intra_bulk_gap.
/// Throws Error(InvalidArgument) unless 1 <= k and N > k + 2.
GapReport gap_check(const spectra::SpectralSample& sample, std::size_t k, double c = 0.1);

struct Partition {
    std::vector<std::size_t> labels;
    std::size_t k = 0;
};

struct KMeansOptions {
    std::size_t restarts = 20;
    std::size_t max_iterations = 100;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
};

/// Lloyd k-means on the rows of the top-k eigenvector block, k-means++
/// seeding, best inertia over restarts (ties to the lower restart index).
/// Throws Error(MissingVectors) without k stored vectors and
/// Error(DegenerateEmbedding) if lambda_k - lambda_{k+1} <= 1e-6.
Partition spectral_partition(const spectra::SpectralSample& sample, std::size_t k, KMeansOptions options = {});

/// k = 2 reference: split on the sign of the second eigenvector.
Partition sign_split(const spectra::SpectralSample& sample);

/// Planted communities of the model.
Partition ground_truth(const model::SbmParams& params);

/// Fraction of vertices on which the partitions agree under the best label
/// matching (Hungarian assignment on the confusion matrix).
double detection_accuracy(const Partition& p, const Partition& truth);

/// Minimum-cost assignment of rows to columns of a square cost matrix.
/// Returns column index per row.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace sbm::detect
