#include "sbm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbm/error.hpp"
#include "sbm/parallel.hpp"
#include "sbm/rng.hpp"

namespace sbm::detect {

namespace {

constexpr double kSeparation = 1e-6;

struct Clustering {
    std::vector<std::size_t> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

double dist2(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
}

// Rows of the n x k embedding, row-major.
Clustering lloyd(const std::vector<double>& x, std::size_t n, std::size_t k, const KMeansOptions& opt,
                 std::uint64_t restart) {
    CounterRng rng(trial_seed(opt.seed, restart), streams::kmeans);
    std::vector<double> centers(k * k);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    // k-means++: first center uniform, the rest with probability ~ D^2.
    std::size_t pick = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)), n - 1);
    for (std::size_t c = 0; c < k; ++c) {
        std::copy_n(&x[pick * k], k, &centers[c * k]);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], dist2(&x[i * k], &centers[c * k], k));
            total += nearest[i];
        }
        if (c + 1 == k) break;
        if (total <= 0.0) {
            pick = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)), n - 1);
            continue;
        }
        double target = rng.uniform() * total;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            target -= nearest[i];
            if (target < 0.0) {
                pick = i;
                break;
            }
        }
    }

    Clustering out;
    out.labels.assign(n, 0);
    std::vector<double> next(k * k);
    std::vector<std::size_t> size(k);
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        out.inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = dist2(&x[i * k], &centers[c * k], k);
                if (d < best) {
                    best = d;
                    out.labels[i] = c;
                }
            }
            nearest[i] = best;
            out.inertia += best;
        }
        std::fill(next.begin(), next.end(), 0.0);
        std::fill(size.begin(), size.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++size[out.labels[i]];
            for (std::size_t d = 0; d < k; ++d) next[out.labels[i] * k + d] += x[i * k + d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (size[c] == 0) {
                // Empty cluster: move it onto the worst-served point.
                const auto far = static_cast<std::size_t>(
                    std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
                std::copy_n(&x[far * k], k, &next[c * k]);
                nearest[far] = 0.0;
            } else {
                for (std::size_t d = 0; d < k; ++d) next[c * k + d] /= static_cast<double>(size[c]);
            }
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(dist2(&next[c * k], &centers[c * k], k)));
        centers.swap(next);
        if (shift <= opt.tolerance) break;
    }
    return out;
}

}  // namespace

std::size_t count_outliers(const spectra::SpectralSample& sample, double threshold) {
    const auto& ev = sample.eigenvalues;
    return static_cast<std::size_t>(
        std::partition_point(ev.begin(), ev.end(), [threshold](double l) { return l > threshold; }) - ev.begin());
}

GapReport gap_check(const spectra::SpectralSample& sample, std::size_t k, double c) {
    const auto& ev = sample.eigenvalues;
    if (k < 1 || ev.size() <= k + 2) throw Error(ErrorCode::InvalidArgument, "gap_check needs 1 <= k and N > k + 2");
    GapReport r;
    r.lambda_K = ev[k - 1];
    r.lambda_K1 = ev[k];
    r.bulk_edge_threshold = 2.0 + c;
    r.gap = r.lambda_K - r.lambda_K1;
    r.intra_bulk_gap = ev[k] - ev[k + 1];
    r.pass = r.lambda_K1 < r.bulk_edge_threshold && r.bulk_edge_threshold < r.lambda_K &&
             r.gap > 10.0 * r.intra_bulk_gap;
    return r;
}

Partition spectral_partition(const spectra::SpectralSample& sample, std::size_t k, KMeansOptions options) {
    const std::size_t n = sample.size();
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "spectral_partition needs k >= 2");
    if (sample.vector_count < k) throw Error(ErrorCode::MissingVectors, "need the top-k eigenvectors");
    if (n <= k) throw Error(ErrorCode::InvalidArgument, "need more vertices than communities");
    if (!(sample.eigenvalues[k - 1] - sample.eigenvalues[k] > kSeparation))
        throw Error(ErrorCode::DegenerateEmbedding, "top-k eigenvalues are not separated from lambda_{k+1}");
    if (options.restarts == 0) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");

    std::vector<double> x(n * k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto u = sample.vector(j);
        for (std::size_t i = 0; i < n; ++i) x[i * k + j] = u[i];
    }
    std::vector<Clustering> runs(options.restarts);
    parallel_for(options.restarts, resolve_threads(options.threads),
                 [&](std::size_t r) { runs[r] = lloyd(x, n, k, options, r); });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].inertia < runs[best].inertia) best = r;
    return {std::move(runs[best].labels), k};
}

Partition sign_split(const spectra::SpectralSample& sample) {
    if (sample.vector_count < 2) throw Error(ErrorCode::MissingVectors, "sign split needs two eigenvectors");
    const auto u = sample.vector(1);
    Partition p{std::vector<std::size_t>(u.size()), 2};
    for (std::size_t i = 0; i < u.size(); ++i) p.labels[i] = u[i] >= 0.0 ? 0 : 1;
    return p;
}

Partition ground_truth(const model::SbmParams& params) {
    const model::CommunityLayout layout(params);
    return {std::vector<std::size_t>(layout.labels().begin(), layout.labels().end()), layout.n_communities()};
}

double detection_accuracy(const Partition& p, const Partition& truth) {
    if (p.labels.size() != truth.labels.size())
        throw Error(ErrorCode::SizeMismatch, "partitions cover different vertex counts");
    if (p.labels.empty()) throw Error(ErrorCode::EmptyInput, "empty partition");
    std::size_t k = std::max(p.k, truth.k);
    for (std::size_t i = 0; i < p.labels.size(); ++i) k = std::max({k, p.labels[i] + 1, truth.labels[i] + 1});
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < p.labels.size(); ++i) cost[p.labels[i]][truth.labels[i]] -= 1.0;
    const auto match = min_cost_assignment(cost);
    double agree = 0.0;
    for (std::size_t r = 0; r < k; ++r) agree -= cost[r][match[r]];
    return agree / static_cast<double>(p.labels.size());
}

// Hungarian method with row/column potentials, O(n^3).
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    for (const auto& row : cost)
        if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "cost matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> match(n);
    for (std::size_t j = 1; j <= n; ++j) match[owner[j] - 1] = j - 1;
    return match;
}

}  // namespace sbm::detect
