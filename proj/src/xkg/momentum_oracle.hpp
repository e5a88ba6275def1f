#pragma once
// Independent extremal-metric oracle from the momentum (Calabi) construction.
//
// On the blowup of P^n along the linear P^{n-k}, in the class
// [omega_FS] - eps^2 [E], the Calabi ansatz reduces the extremal equation to
// a linear ODE for the momentum profile phi(m) = dm/dlambda on m in [a, 1],
// a = eps^2. With Q(m) = m^{k-1} (1-m)^{n-k} and
// R0(m) = k(k-1)/m + (n-k)(n-k+1)/(1-m):
//
//   (Q phi)''(m) = Q(m) [ R0(m) - A - B m ],   S(m) = A + B m.
//
// Boundary data (Q phi)(a) = 0, (Q phi)'(a) = Q(a) closes the exceptional
// divisor with slope phi'(a) = 1; the two affine unknowns (A, B) are fixed by
// (Q phi)(1) = (Q phi)'(1) = 0, which closes the zero section with slope
// phi'(1) = -1 automatically. Every integrand is polynomial, so the whole
// solve is exact Gauss-Legendre quadrature: the oracle shares no
// discretization code with the finite-difference gluing pipeline.
// (Check against Fubini-Study: a = 0 gives phi = m(1-m), A = n(n+1), B = 0.)

#include <stdexcept>

#include "xkg/fixed_point.hpp"

namespace xkg {

struct ClassNotPositive : std::runtime_error {
    explicit ClassNotPositive(const std::string& m) : std::runtime_error(m) {}
};
struct NoSolutionInClass : std::runtime_error {
    explicit NoSolutionInClass(const std::string& m) : std::runtime_error(m) {}
};
struct ClassMismatch : std::runtime_error {
    explicit ClassMismatch(const std::string& m) : std::runtime_error(m) {}
};

struct MomentumProfile {
    int n = 4, k = 3;
    double eps = 0.0, a = 0.0;  // momentum interval [a, 1], a = eps^2
    double A = 0.0, B = 0.0;    // extremal affine data: S(m) = A + B m

    double slope_a = 0.0, slope_b = 0.0;  // phi'(a), phi'(1); must be +1, -1
    double phi_min = 0.0;                 // min over interior samples
    double affine_defect = 0.0;  // sup |S reconstructed from phi - (A + B m)|
    double vol_ratio = 0.0;      // int_a^1 Q / int_0^1 Q (class volume / FS)
    double vol_deficit = 0.0;    // int_0^a Q / int_0^1 Q (blown-down volume)

    double phi(double m) const;  // profile by collapsed double quadrature
    double S_of(double m) const { return A + B * m; }
};

// eps = 0 is the formal blowdown limit (Fubini-Study itself).
MomentumProfile solve_extremal_profile(int n, int k, double eps);

// Comparison of the oracle against a converged glued fixed point in the same
// class. The fixed point satisfies S(omega_u) = A_fixed + B_fixed * m exactly
// in its own momentum m = momentum_of(u), so both pipelines are summarized by
// affine data; sup_S_diff compares the full curvature fields node by node.
struct GluedComparison {
    double eps = 0.0;
    double sup_S_diff = 0.0;  // sup over {d > 2 r_eps} of |S_glued - S_oracle|
    double affine_sup_diff = 0.0;  // sup_{[a,1]} of the affine-data difference
    double A_oracle = 0.0, B_oracle = 0.0;
    double A_fixed = 0.0, B_fixed = 0.0;
    double vol_ratio_glued = 0.0, vol_ratio_oracle = 0.0;
    double min_momentum_rel = 0.0;  // |min m_glued - a| / a
};
GluedComparison compare_with_glued(const MomentumProfile& o,
                                   const FixedPointProblem& p,
                                   const IterationState& st);

}  // namespace xkg
