#include "sbm/detlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lapack.hpp"
#include "sbm/error.hpp"

namespace sbm::detlaw {

namespace {

constexpr double kImagSlack = 1e-12;     // admissible roots: Im w > -kImagSlack
constexpr double kRadius = 5.0 + 1e-6;   // admissible roots: |w| <= kRadius
constexpr double kTieDistance = 1e-10;   // roots closer than this are one root
constexpr double kDensityClamp = 1e-7;
constexpr double kEdgeCeiling = 2.999;

cplx quartic(double c4, cplx z, cplx w) { return 1.0 + w * (z + w * (1.0 + c4 * w * w)); }
cplx quartic_derivative(double c4, cplx z, cplx w) { return z + w * (2.0 + 4.0 * c4 * w * w); }

cplx polish(double c4, cplx z, cplx w) {
    cplx f = quartic(c4, z, w);
    for (int it = 0; it < 8 && std::abs(f) > 0.0; ++it) {
        const cplx d = quartic_derivative(c4, z, w);
        if (std::abs(d) == 0.0) break;
        const cplx next = w - f / d;
        const cplx fn = quartic(c4, z, next);
        if (!(std::abs(fn) < std::abs(f))) break;
        w = next;
        f = fn;
    }
    return w;
}

// Right edge from the real double-root conditions P1 = P1' = 0:
// eliminating z gives 3 c4 w^4 + w^2 = 1, so w^2 = 2 / (1 + sqrt(1 + 12 c4)),
// and L = -z = |w| (2 + 4 c4 w^2) at the negative root w.
double double_root_edge(double c4) {
    if (c4 == 0.0) return 2.0;
    const double w2 = 2.0 / (1.0 + std::sqrt(1.0 + 12.0 * c4));
    return std::sqrt(w2) * (2.0 + 4.0 * c4 * w2);
}

void require_domain(ComplexPoint z) {
    if (!z.in_law_domain()) {
        std::ostringstream msg;
        msg << "z = " << z.re << " + " << z.im << "i lies outside |E| < 3, 0 < eta <= 3";
        throw Error(ErrorCode::DomainViolation, msg.str());
    }
}

}  // namespace

cplx msc(ComplexPoint zp) {
    const cplx z = zp.value();
    const cplx s = std::sqrt(z * z - 4.0);
    // Roots of m^2 + z m + 1 multiply to 1; take the large one without
    // cancellation and invert it, which is the branch with |m| <= 1.
    const cplx a = (-z + s) / 2.0;
    const cplx b = (-z - s) / 2.0;
    const cplx big = std::abs(a) >= std::abs(b) ? a : b;
    return 1.0 / big;
}

DeterministicLaw::DeterministicLaw(double xi4, double q, double t) : xi4_(xi4), q_(q), t_(t) {
    if (!(q > 0.0) || !std::isfinite(q)) throw Error(ErrorCode::InvalidArgument, "q must be positive and finite");
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be nonnegative");
    if (!std::isfinite(xi4)) throw Error(ErrorCode::InvalidArgument, "xi4 must be finite");
    c4_ = std::exp(-2.0 * t) * xi4 / (q * q);
    if (c4_ < -1e-12) {
        std::ostringstream msg;
        msg << "quartic coefficient c4 = " << c4_ << " is negative; the refined law is only defined for c4 >= 0";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    c4_ = std::max(c4_, 0.0);
    edge_ = double_root_edge(c4_);
    if (!(edge_ < kEdgeCeiling)) {
        std::ostringstream msg;
        msg << "support edge " << edge_ << " for c4 = " << c4_ << " is not below " << kEdgeCeiling;
        throw Error(ErrorCode::EdgeNotBracketed, msg.str());
    }
}

DeterministicLaw DeterministicLaw::from_profile(const model::CumulantProfile& profile, double t,
                                                NegativeQuartic policy) {
    if (profile.xi4 < 0.0 && policy == NegativeQuartic::clamp_to_zero) {
        DeterministicLaw law(0.0, profile.q, t);
        law.clamped_ = true;
        return law;
    }
    return DeterministicLaw(profile.xi4, profile.q, t);
}

DeterministicLaw DeterministicLaw::from_quartic_coefficient(double c4) { return DeterministicLaw(c4, 1.0, 0.0); }

std::array<cplx, 4> quartic_roots(double c4, cplx z) {
    if (!(c4 > 0.0)) throw Error(ErrorCode::InvalidArgument, "quartic_roots needs c4 > 0");
    // With w = v / sqrt(c4) the monic quartic v^4 + v^2 + z sqrt(c4) v + c4
    // has O(1) coefficients, so its companion matrix is well scaled.
    const double r = std::sqrt(c4);
    const cplx a0 = c4, a1 = z * r, a2 = 1.0, a3 = 0.0;
    // Column-major companion: ones on the subdiagonal, -a in the last column.
    std::array<cplx, 16> comp{};
    auto at = [&](int i, int j) -> cplx& { return comp[static_cast<std::size_t>(j * 4 + i)]; };
    for (int i = 1; i < 4; ++i) at(i, i - 1) = 1.0;
    const std::array<cplx, 4> coeff{a0, a1, a2, a3};
    for (int i = 0; i < 4; ++i) at(i, 3) = -coeff[i];

    std::array<cplx, 4> eig{};
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', 4, comp.data(), 4, eig.data(), nullptr, 1,
                                          nullptr, 1);
    if (info != 0) throw Error(ErrorCode::NonConvergence, "companion eigenvalue iteration failed");
    std::array<cplx, 4> roots;
    for (int i = 0; i < 4; ++i) {
        roots[i] = polish(c4, z, eig[i] / r);
    }
    return roots;
}

cplx mtilde(ComplexPoint z, const DeterministicLaw& law) {
    require_domain(z);
    if (law.c4() == 0.0) return msc(z);
    const auto roots = quartic_roots(law.c4(), z.value());

    std::vector<cplx> admissible;
    for (const cplx& w : roots)
        if (w.imag() > -kImagSlack && std::abs(w) <= kRadius) admissible.push_back(w);
    if (admissible.empty()) {
        std::ostringstream msg;
        msg << "no root with Im w > 0 and |w| <= 5 at z = " << z.re << " + " << z.im << "i";
        throw Error(ErrorCode::RootSelectionAmbiguous, msg.str());
    }
    std::sort(admissible.begin(), admissible.end(),
              [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });

    // Floating-point ties (near a coalescence) resolve to the larger Im w.
    cplx best = admissible.front();
    std::vector<cplx> distinct;
    for (std::size_t i = 1; i < admissible.size(); ++i) {
        if (std::abs(admissible[i] - admissible.front()) <= kTieDistance) {
            if (admissible[i].imag() > best.imag()) best = admissible[i];
        } else {
            distinct.push_back(admissible[i]);
        }
    }
    // Once c4 is not small the companion branch w ~ i/sqrt(c4) can also land in
    // the admissible region; the Stieltjes branch is the one continuing m_sc,
    // which is the admissible root of least modulus.
    if (!distinct.empty() && std::abs(distinct.front()) <= std::abs(best) * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "two admissible roots of equal modulus at z = " << z.re << " + " << z.im << "i";
        throw Error(ErrorCode::RootSelectionAmbiguous, msg.str());
    }
    return best;
}

double rho_tilde(double e, const DeterministicLaw& law, double eta_floor) {
    if (!(eta_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta_floor must be positive");
    const double value = mtilde({e, eta_floor}, law).imag() / std::numbers::pi;
    if (value < kDensityClamp && std::abs(e) > law.edge()) return 0.0;
    return std::max(value, 0.0);
}

double edge_L(const DeterministicLaw& law) { return law.edge(); }

double integrated_density(double e1, double e2, const DeterministicLaw& law) {
    if (!(e1 < e2)) throw Error(ErrorCode::InvalidArgument, "integrated_density needs e1 < e2");
    const double lo = std::max(e1, -law.edge());
    const double hi = std::min(e2, law.edge());
    if (!(lo < hi)) return 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto f = [&law](double x) { return rho_tilde(x, law); };
    return integrator.integrate(f, lo, hi, 1e-10);
}

PolynomialValues eval_P(cplx m, ComplexPoint zp, const DeterministicLaw& law, double zeta) {
    const cplx z = zp.value();
    PolynomialValues out;
    out.p1 = 1.0 + z * m + m * m + law.c4() * m * m * m * m;
    const cplx lin = z + m + zeta * m;
    out.p2 = lin * lin - zeta * (1.0 + m * z + m * m);
    out.p = out.p1 * out.p2;
    return out;
}

}  // namespace sbm::detlaw
