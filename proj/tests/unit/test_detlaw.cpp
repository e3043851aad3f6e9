#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "../support/oracles.hpp"
#include "sbm/detlaw.hpp"
#include "sbm/error.hpp"
#include "sbm/verify.hpp"

using namespace sbm;
using detlaw::ComplexPoint;
using detlaw::cplx;
using detlaw::DeterministicLaw;

namespace {

DeterministicLaw law_c4(double c4) { return DeterministicLaw::from_quartic_coefficient(c4); }

double halton(std::size_t i, std::size_t base) {
    double f = 1.0, r = 0.0;
    for (; i > 0; i /= base) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
    }
    return r;
}

// 200 points of the law domain, E in (-3, 3), eta in (0, 3].
std::vector<ComplexPoint> quasi_random_points() {
    std::vector<ComplexPoint> z;
    for (std::size_t i = 1; i <= 200; ++i) z.push_back({-2.99 + 5.98 * halton(i, 2), 1e-3 + 2.999 * halton(i, 3)});
    return z;
}

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

TEST_SUITE("detlaw") {
    TEST_CASE("m_sc closed form, equation and bound") {
        const cplx m = detlaw::msc({0.0, 1.0});
        CHECK(std::abs(m - cplx(0.0, (std::sqrt(5.0) - 1.0) / 2.0)) < 1e-15);
        for (const auto& z : verify::default_grid().points()) {
            const cplx v = detlaw::msc(z);
            CHECK(std::abs(v + 1.0 / v + z.value()) < 1e-13);
            CHECK(std::abs(v) <= 1.0 + 1e-15);
            CHECK(v.imag() > 0.0);
        }
        for (double e : {-5.0, 0.0, 5.0}) CHECK(detlaw::msc({e, 1e-3}).imag() > 0.0);
    }

    TEST_CASE("|1 - m_sc^2| scales like sqrt(eta) at the edge") {
        for (double eta : {1e-6, 1e-8}) {
            const cplx m = detlaw::msc({2.0, eta});
            const double ratio = std::abs(1.0 - m * m) / std::sqrt(eta);
            CHECK(ratio > 0.5);
            CHECK(ratio < 4.0);
        }
    }

    TEST_CASE("mtilde reduces to m_sc at c4 = 0") {
        const auto law = law_c4(0.0);
        CHECK(law.edge() == 2.0);
        CHECK(std::abs(detlaw::mtilde({0.0, 1.0}, law) - cplx(0.0, 0.6180339887498949)) < 1e-15);
        for (const auto& z : verify::default_grid().points())
            CHECK(std::abs(detlaw::mtilde(z, law) - detlaw::msc(z)) <= 1e-12);
    }

    TEST_CASE("mtilde agrees with the 80-bit continuation oracle") {
        const auto w = detlaw::mtilde({0.0, 0.5}, law_c4(0.01));
        const auto ref = oracle::mtilde_long(0.01L, {0.0L, 0.5L});
        CHECK(std::abs(w.real() - double(ref.real())) < 1e-12);
        CHECK(std::abs(w.imag() - double(ref.imag())) < 1e-12);
        // Frozen: iy with 1 - y/2 - y^2 + y^4/100 = 0, solved in 30 digits.
        CHECK(w.real() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(w.imag() == doctest::Approx(0.7825943042273007).epsilon(1e-12));
        for (double c4 : {1e-3, 1e-2, 1e-1}) {
            const auto law = law_c4(c4);
            for (const auto& z : quasi_random_points()) {
                const cplx got = detlaw::mtilde(z, law);
                const auto want = oracle::mtilde_long(c4, {z.re, z.im});
                CHECK(std::abs(got - cplx(double(want.real()), double(want.imag()))) < 1e-10);
            }
        }
    }

    TEST_CASE("domain guard") {
        const auto law = law_c4(0.01);
        CHECK(code_of([&] { detlaw::mtilde({0.0, 3.5}, law); }) == ErrorCode::DomainViolation);
        CHECK(code_of([&] { detlaw::mtilde({3.0, 1.0}, law); }) == ErrorCode::DomainViolation);
        CHECK(code_of([&] { detlaw::mtilde({0.0, 0.0}, law); }) == ErrorCode::DomainViolation);
    }

    TEST_CASE("quartic roots are roots") {
        for (double c4 : {1e-4, 0.02, 0.3}) {
            const cplx z(0.7, 0.2);
            for (const cplx& w : detlaw::quartic_roots(c4, z))
                CHECK(std::abs(c4 * std::pow(w, 4) + w * w + z * w + 1.0) < 1e-11 * std::max(1.0, std::norm(w) * std::norm(w)));
        }
    }

    TEST_CASE("law construction guards") {
        CHECK(code_of([] { DeterministicLaw(-0.5, 2.0); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { DeterministicLaw(1.0, 0.0); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { DeterministicLaw(1.0, 1.0, -1.0); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { law_c4(5.0); }) == ErrorCode::EdgeNotBracketed);
        // Fourth cumulant negative near p = 1/2.
        const auto prof = model::cumulant_profile({400, 2, 0.45, 0.4, 0});
        CHECK(prof.xi4 < 0.0);
        CHECK(code_of([&] { DeterministicLaw::from_profile(prof); }) == ErrorCode::InvalidArgument);
        const auto clamped = DeterministicLaw::from_profile(prof, 0.0, detlaw::NegativeQuartic::clamp_to_zero);
        CHECK(clamped.clamped());
        CHECK(clamped.c4() == 0.0);
        CHECK(clamped.edge() == 2.0);
    }

    TEST_CASE("flow time folds into c4") {
        const DeterministicLaw a(1.0, 5.0, 0.0), b(1.0, 5.0, 1.0);
        CHECK(a.c4() == doctest::Approx(0.04).epsilon(1e-15));
        CHECK(b.c4() == doctest::Approx(0.04 * std::exp(-2.0)).epsilon(1e-14));
    }

    TEST_CASE("Im mtilde outside the support decays like eta / sqrt(kappa + eta)") {
        const auto law = law_c4(0.05);
        const double e = law.edge() + 0.1, eta = 1e-4;
        const double ratio = detlaw::mtilde({e, eta}, law).imag() / (eta / std::sqrt(0.1 + eta));
        CHECK(ratio > 0.2);
        CHECK(ratio < 5.0);
    }

    TEST_CASE("Im mtilde in the bulk scales like sqrt(kappa + eta)") {
        const auto law = law_c4(0.05);
        for (double kappa : {0.5, 0.1, 0.01})
            for (double eta : {1e-3, 1e-2}) {
                const double ratio =
                    detlaw::mtilde({law.edge() - kappa, eta}, law).imag() / std::sqrt(kappa + eta);
                CHECK(ratio > 0.2);
                CHECK(ratio < 5.0);
            }
    }

    TEST_CASE("density: center value, mass, symmetry, square-root edge") {
        CHECK(detlaw::rho_tilde(0.0, law_c4(0.0)) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-9));
        for (double c4 : {0.0, 0.01, 0.05, 0.1}) {
            const auto law = law_c4(c4);
            CHECK(std::abs(detlaw::integrated_density(-law.edge(), law.edge(), law) - 1.0) < 1e-6);
            for (double e : {0.3, 1.1, 1.9, law.edge() - 1e-3, 2.5})
                CHECK(std::abs(detlaw::rho_tilde(e, law) - detlaw::rho_tilde(-e, law)) < 1e-10);
            CHECK(detlaw::rho_tilde(law.edge() + 0.01, law) == 0.0);
            double lo = 1e300, hi = 0.0;
            for (double d : {0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4}) {
                const double r = detlaw::rho_tilde(law.edge() - d, law) / std::sqrt(d);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            CHECK(lo > 0.0);
            CHECK(hi / lo < 5.0);
        }
    }

    TEST_CASE("edge: semicircle, double-root oracle, asymptotics") {
        CHECK(detlaw::edge_L(law_c4(0.0)) == 2.0);
        const double l = detlaw::edge_L(law_c4(0.05));
        CHECK(std::abs(l - oracle::double_root_edge(0.05)) < 1e-10);
        // Frozen from a 30-digit evaluation of the double-root condition.
        CHECK(l == doctest::Approx(2.0453588664594028).epsilon(1e-12));
        for (double c4 : {0.1, 0.05, 0.025, 0.0125, 1e-3}) {
            const double lc = detlaw::edge_L(law_c4(c4));
            CHECK(std::abs(lc - oracle::double_root_edge(c4)) < 1e-10);
            CHECK(std::abs(lc - 2.0 - c4) / (c4 * c4) <= 5.0);
        }
        // Density switches off at L.
        const auto law = law_c4(0.05);
        CHECK(detlaw::rho_tilde(l - 1e-6, law) > 0.0);
        CHECK(detlaw::rho_tilde(l + 1e-3, law) == 0.0);
    }

    TEST_CASE("edge for the large-N edge-figure parameters") {
        const auto prof = model::cumulant_profile({27000, 3, 0.03, 0.01, 0});
        const auto law = DeterministicLaw::from_profile(prof);
        CHECK(law.c4() == doctest::Approx(1.0 / (prof.q * prof.q)).epsilon(1e-12));
        CHECK(law.edge() > 2.0);
        CHECK(std::abs(law.edge() - 2.0 - law.c4()) <= 5.0 * law.c4() * law.c4());
    }

    TEST_CASE("polynomial evaluation") {
        for (double c4 : {1e-3, 1e-2, 1e-1}) {
            const auto law = law_c4(c4);
            for (const auto& z : verify::default_grid().points())
                CHECK(std::abs(detlaw::eval_P(detlaw::mtilde(z, law), z, law, 0.3).p1) <= 1e-10);
        }
        const auto law = law_c4(0.02);
        const ComplexPoint z{0.4, 0.7};
        const cplx m(0.3, -1.2);
        const auto zero = detlaw::eval_P(m, z, law, 0.0);
        CHECK(std::abs(zero.p2 - (z.value() + m) * (z.value() + m)) < 1e-14);
        const auto v = detlaw::eval_P(m, z, law, 0.37);
        CHECK(std::abs(v.p - v.p1 * v.p2) <= 1e-13 * std::max(1.0, std::abs(v.p)));
        const cplx p1 = 1.0 + z.value() * m + m * m + 0.02 * m * m * m * m;
        CHECK(std::abs(v.p1 - p1) < 1e-14);
    }

    TEST_CASE("Stieltjes positivity on quasi-random points") {
        for (double c4 : {0.0, 1e-3, 1e-2, 1e-1}) {
            const auto law = law_c4(c4);
            for (const auto& z : quasi_random_points()) CHECK(detlaw::mtilde(z, law).imag() > 0.0);
        }
    }

    TEST_CASE("odd real part, even imaginary part") {
        const auto law = law_c4(0.05);
        for (const auto& z : quasi_random_points()) {
            const cplx a = detlaw::mtilde(z, law);
            const cplx b = detlaw::mtilde({-z.re, z.im}, law);
            CHECK(std::abs(a.real() + b.real()) < 1e-12);
            CHECK(std::abs(a.imag() - b.imag()) < 1e-12);
        }
    }

    TEST_CASE("semicircle limit: |mtilde - m_sc| / c4 stays bounded") {
        for (double c4 : {1e-2, 1e-3, 1e-4}) {
            const auto law = law_c4(c4);
            double worst = 0.0;
            for (const auto& z : verify::default_grid().points())
                worst = std::max(worst, std::abs(detlaw::mtilde(z, law) - detlaw::msc(z)) / c4);
            CHECK(worst <= 10.0);
        }
    }
}
