#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "../support/oracles.hpp"
#include "sbm/error.hpp"
#include "sbm/matrix_io.hpp"
#include "sbm/model.hpp"
#include "sbm/rng.hpp"

using namespace sbm;
using model::SbmParams;

namespace {

struct Moments {
    double n = 0, m1 = 0, m2 = 0, m4 = 0;
    void add(double x) {
        n += 1;
        m1 += x;
        m2 += x * x;
        m4 += x * x * x * x;
    }
    double mean() const { return m1 / n; }
    double var() const { return m2 / n - mean() * mean(); }
    // Central moments assume a centered variable, which holds for every use below.
    double k4() const { return m4 / n - 3.0 * (m2 / n) * (m2 / n); }
};

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("model") {
    TEST_CASE("parameter validation") {
        CHECK_NOTHROW(SbmParams{6, 3, 0.5, 0.2, 0}.validate());
        CHECK(code_of([] { SbmParams{7, 3, 0.5, 0.2, 0}.validate(); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { SbmParams{6, 3, 1.0, 0.2, 0}.validate(); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { SbmParams{6, 3, 0.5, 0.0, 0}.validate(); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { SbmParams{0, 1, 0.5, 0.5, 0}.validate(); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("sigma^2 by hand: N=2, K=1, p=1/2") {
        const SbmParams p{2, 1, 0.5, 0.5, 0};
        // (N/K) p (1-p) = 2 * 0.5 * 0.5, no cross-block term.
        CHECK(p.sigma_sq() == doctest::Approx(0.5).epsilon(1e-15));
        const auto a = model::sample_adjacency(p, 0, {});
        const auto b = model::sample_adjacency(p, 1, {});
        for (const auto& m : {a, b})
            CHECK((m(0, 1) == 0.0 || m(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15)));
    }

    TEST_CASE("sampled adjacency: symmetric, zero diagonal, two values") {
        const SbmParams p{60, 3, 0.3, 0.1, 5};
        const auto a = model::sample_adjacency(p, 5, {});
        const double v = 1.0 / std::sqrt(p.sigma_sq());
        CHECK(a.asymmetry() == 0.0);
        for (std::size_t i = 0; i < a.order(); ++i) {
            CHECK(a(i, i) == 0.0);
            for (std::size_t j = 0; j < a.order(); ++j) CHECK((a(i, j) == 0.0 || a(i, j) == v));
        }
        CHECK(model::sample_adjacency(p, 5, {}) == a);
        CHECK_FALSE(model::sample_adjacency(p, 6, {}) == a);
    }

    TEST_CASE("Bernoulli entry mean within 3 standard errors") {
        const SbmParams p{4, 2, 0.5, 0.5, 0};
        const double v = 1.0 / std::sqrt(p.sigma_sq());
        Moments m;
        for (std::uint64_t s = 0; s < 100000; ++s) m.add(model::sample_adjacency(p, s, {})(0, 1));
        const double se = v * std::sqrt(0.25 / m.n);
        CHECK(std::abs(m.mean() - 0.5 * v) < 3.0 * se);
    }

    TEST_CASE("connectivity guard") {
        const SbmParams p{100, 2, 0.05, 0.005, 0};
        CHECK(code_of([&] { model::sample_adjacency(p, 1, {}); }) == ErrorCode::BelowConnectivityScale);
        CHECK_NOTHROW(model::sample_adjacency(p, 1, {true}));
    }

    TEST_CASE("center_rescale entry values and mismatch") {
        const SbmParams p{6, 2, 0.4, 0.1, 0};
        const double sigma = std::sqrt(p.sigma_sq());
        model::SymMatrix a(6);
        a.set(0, 1, 1.0 / sigma);  // same block, edge
        const auto c = model::center_rescale(a, p);
        CHECK(c(0, 1) == doctest::Approx((1.0 - 0.4) / sigma).epsilon(1e-15));
        CHECK(c(0, 5) == doctest::Approx(-0.1 / sigma).epsilon(1e-15));
        CHECK(c(2, 2) == 0.0);
        CHECK(code_of([&] { model::center_rescale(model::SymMatrix(5), p); }) == ErrorCode::DimensionMismatch);
    }

    TEST_CASE("centered entries have zero mean per block") {
        const SbmParams p{200, 2, 0.2, 0.05, 0};
        const model::CommunityLayout layout(p);
        Moments same, cross;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto h = model::sample_centered(p, s);
            for (std::size_t i = 0; i < 200; ++i)
                for (std::size_t j = i + 1; j < 200; ++j) (layout.same(i, j) ? same : cross).add(h(i, j));
        }
        CHECK(std::abs(same.mean()) < 3.0 * std::sqrt(same.var() / same.n));
        CHECK(std::abs(cross.mean()) < 3.0 * std::sqrt(cross.var() / cross.n));
    }

    TEST_CASE("row sums of squares average to 1") {
        const SbmParams p{500, 2, 0.1, 0.04, 0};
        double total = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto h = model::sample_centered(p, s);
            double sq = 0.0;
            for (double x : h.values()) sq += x * x;
            total += sq / 500.0;
        }
        CHECK(std::abs(total / 100.0 - 1.0) < 0.05);
        CHECK(model::cumulant_profile(p).row_variance_sum() == doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("cumulant closed forms match moment enumeration") {
        for (double p : {0.01, 0.1, 0.5, 0.9})
            for (double sigma : {0.5, 1.0, 7.0})
                for (int k = 2; k <= 4; ++k) {
                    const double got = model::bernoulli_centered_cumulant(p, sigma, k);
                    const double want = oracle::two_point_cumulant(p, sigma, k);
                    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
                }
        CHECK(model::bernoulli_centered_cumulant(0.5, 1.0, 3) == 0.0);
        CHECK(model::bernoulli_centered_cumulant(0.5, 1.0, 2) == 0.25);
        // Frozen from the enumeration oracle: 0.09 * 0.46 / 16.
        CHECK(model::bernoulli_centered_cumulant(0.1, 2.0, 4) == doctest::Approx(0.0025875).epsilon(1e-13));
        CHECK(oracle::two_point_cumulant(0.1, 2.0, 4) == doctest::Approx(0.0025875).epsilon(1e-13));
        CHECK(code_of([] { model::bernoulli_centered_cumulant(0.1, 1.0, 5); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { model::bernoulli_centered_cumulant(0.1, 1.0, 1); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("profile identities") {
        const auto flat = model::cumulant_profile({300, 3, 0.05, 0.05, 0});
        CHECK(flat.zeta == 0.0);
        CHECK(flat.s2_s == flat.s2_d);
        CHECK(flat.s4_s == flat.s4_d);

        // Erdos-Renyi: N q^2 kappa4 = s4 = xi4 with the closed-form kappa4.
        const std::size_t n = 1000;
        const double p = std::pow(double(n), -1.0 + 2.0 * 0.3);
        const auto er = model::cumulant_profile({n, 1, p, p, 0});
        const double sigma = std::sqrt(n * p * (1 - p));
        const double k4 = p * (1 - p) * (1 - 6 * p + 6 * p * p) / std::pow(sigma, 4);
        CHECK(n * er.q * er.q * k4 == doctest::Approx(er.xi4).epsilon(1e-12));
        CHECK(er.xi4 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(er.q == doctest::Approx(std::sqrt(n * p * (1 - p) / (1 - 6 * p + 6 * p * p))).epsilon(1e-12));

        const auto fig2 = model::cumulant_profile({3000, 3, 0.03, 0.01, 0});
        CHECK(fig2.q > 0.0);
        CHECK(fig2.row_variance_sum() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(fig2.xi4 == doctest::Approx(1.0).epsilon(1e-12));
        // zeta = (N/K)(kappa2_s - kappa2_d)
        CHECK(fig2.zeta == doctest::Approx(1000.0 * (fig2.kappa2_s - fig2.kappa2_d)).epsilon(1e-12));
    }

    TEST_CASE("dyson flow: identity, guards, q_t") {
        const SbmParams p{50, 2, 0.3, 0.1, 0};
        const auto prof = model::cumulant_profile(p);
        const auto h0 = model::sample_centered(p, 1);
        const auto f0 = model::dyson_flow_sample(h0, 0.0, 9, prof);
        CHECK(f0.matrix == h0);
        CHECK(f0.q_t == prof.q);
        const auto f = model::dyson_flow_sample(h0, 2.0 * std::log(2.0), 9, prof);
        CHECK(f.q_t == doctest::Approx(2.0 * prof.q).epsilon(1e-15));
        CHECK(f.zeta_t == doctest::Approx(prof.zeta).epsilon(1e-12));
        CHECK(f.matrix.asymmetry() == 0.0);
        for (std::size_t i = 0; i < 50; ++i) CHECK(f.matrix(i, i) == 0.0);
        CHECK(code_of([&] { model::dyson_flow_sample(h0, -0.1, 9, prof); }) == ErrorCode::InvalidArgument);
        CHECK(model::dyson_flow_sample(h0, 1.0, 9, prof).matrix == model::dyson_flow_sample(h0, 1.0, 9, prof).matrix);
    }

    TEST_CASE("dyson flow preserves entry variance and kills the fourth cumulant") {
        // One block of 448 vertices gives 100128 entries per draw.
        const SbmParams p{448, 1, 0.05, 0.05, 0};
        const auto prof = model::cumulant_profile(p);
        const auto h0 = model::sample_centered(p, 3);
        const double k2 = prof.kappa2_s;
        for (double t : {0.5, 2.0}) {
            Moments m;
            const auto ht = model::dyson_flow_sample(h0, t, 11, prof).matrix;
            for (std::size_t i = 0; i < 448; ++i)
                for (std::size_t j = i + 1; j < 448; ++j) m.add(ht(i, j));
            const double se = std::sqrt((m.m4 / m.n - k2 * k2) / m.n);
            CHECK(std::abs(m.m2 / m.n - k2) < 3.0 * se);
        }
        Moments late;
        const auto h50 = model::dyson_flow_sample(h0, 50.0, 11, prof).matrix;
        for (std::size_t i = 0; i < 448; ++i)
            for (std::size_t j = i + 1; j < 448; ++j) late.add(h50(i, j));
        // Gaussian limit: sd of the k4 estimate is sqrt(24/n) k2^2.
        CHECK(std::abs(late.k4()) < 4.0 * std::sqrt(24.0 / late.n) * k2 * k2);
    }

    TEST_CASE("permuted layout is a balanced relabeling") {
        SbmParams p{30, 3, 0.3, 0.1, 17, true};
        const model::CommunityLayout layout(p);
        std::vector<int> count(3, 0);
        for (auto l : layout.labels()) ++count[l];
        CHECK(count == std::vector<int>{10, 10, 10});
        p.permuted_layout = false;
        const model::CommunityLayout plain(p);
        CHECK(plain.community(0) == 0);
        CHECK(plain.community(29) == 2);
    }

    TEST_CASE("matrix container round trip") {
        const auto h = model::sample_centered({40, 2, 0.3, 0.1, 0}, 2);
        std::stringstream buf;
        io::write_matrix(buf, h, 2);
        const auto back = io::read_matrix(buf);
        CHECK(back.matrix == h);
        CHECK(back.n_communities == 2);
        std::stringstream bad("SBMX");
        CHECK(code_of([&] { io::read_matrix(bad); }) == ErrorCode::Io);
    }
}
