#pragma once

#include <array>
#include <complex>

#include "sbm/model.hpp"

namespace sbm::detlaw {

using cplx = std::complex<double>;

/// z = E + i eta in the upper half plane.
struct ComplexPoint {
    double re = 0.0;
    double im = 1.0;

    cplx value() const { return {re, im}; }
    /// |E| < 3 and 0 < eta <= 3.
    bool in_law_domain() const { return std::abs(re) < 3.0 && im > 0.0 && im <= 3.0; }

    bool operator==(const ComplexPoint&) const = default;
};

/// Stieltjes transform of the semicircle law, the branch with Im > 0.
cplx msc(ComplexPoint z);

/// How to treat a negative community-averaged fourth cumulant when building a law.
enum class NegativeQuartic { reject, clamp_to_zero };

/// The refined deterministic law: the Stieltjes transform m~_t solving
///   1 + z m + m^2 + c4 m^4 = 0,  c4 = e^{-2t} xi4 / q^2,
/// and the density rho~_t supported on [-L_t, L_t].
///
/// The edge is computed at construction; the object is immutable afterwards.
class DeterministicLaw {
public:
    /// Throws Error(InvalidArgument) if q <= 0, t < 0, or c4 < -1e-12.
    DeterministicLaw(double xi4, double q, double t = 0.0);

    static DeterministicLaw from_profile(const model::CumulantProfile& profile, double t = 0.0,
                                         NegativeQuartic policy = NegativeQuartic::reject);
    /// Law with the given quartic coefficient (xi4 = c4, q = 1, t = 0).
    static DeterministicLaw from_quartic_coefficient(double c4);

    double xi4() const { return xi4_; }
    double q() const { return q_; }
    double t() const { return t_; }
    double c4() const { return c4_; }
    double edge() const { return edge_; }
    /// True if a negative c4 was replaced by 0 under NegativeQuartic::clamp_to_zero.
    bool clamped() const { return clamped_; }

private:
    double xi4_;
    double q_;
    double t_;
    double c4_;
    double edge_;
    bool clamped_ = false;
};

/// All four roots of c4 w^4 + w^2 + z w + 1 (c4 > 0), Newton-polished.
std::array<cplx, 4> quartic_roots(double c4, cplx z);

/// m~(z): the root of the quartic in the upper half plane with |w| <= 5.
/// Falls back to msc(z) when c4 = 0. Throws Error(DomainViolation) outside
/// |E| < 3, 0 < eta <= 3 and Error(RootSelectionAmbiguous) if no admissible
/// root, or two indistinguishable ones, remain.
cplx mtilde(ComplexPoint z, const DeterministicLaw& law);

/// (1/pi) Im m~(E + i eta_floor), clamped to 0 outside [-L, L] when below 1e-7.
double rho_tilde(double e, const DeterministicLaw& law, double eta_floor = 1e-9);

/// Right edge L of the support, located as the real double root of the
/// quartic. Throws Error(EdgeNotBracketed) if it falls outside [2, 2.999).
double edge_L(const DeterministicLaw& law);

/// Integral of rho~ over (e1, e2) by tanh-sinh quadrature on the support.
double integrated_density(double e1, double e2, const DeterministicLaw& law);

struct PolynomialValues {
    cplx p1;
    cplx p2;
    cplx p;
};

/// P1(m) = 1 + z m + m^2 + c4 m^4,
/// P2(m) = (z + m + zeta m)^2 - zeta (1 + m z + m^2), P = P1 P2.
PolynomialValues eval_P(cplx m, ComplexPoint z, const DeterministicLaw& law, double zeta);

}  // namespace sbm::detlaw
