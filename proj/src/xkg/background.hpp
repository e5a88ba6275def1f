#pragma once
// Cohomogeneity-one backgrounds on the projective model.
//
// On P^n with S a linear P^{n-k}, every metric in play is a Calabi-ansatz
// metric: omega = pi^* omega_B + i ddbar Phi(lambda) on the rank-k bundle
// O(-1)^k -> P^{n-k}, with lambda = log tan^2 d and d the FS distance to S.
// Writing m = Phi_lambda (the momentum) and m0 = sin^2 d (the FS momentum),
// the whole calculus reduces to one radial variable:
//
//   Delta h   = h_ll / m_l + (k-1) h_l / m - (n-k) h_l / (1-m)
//   log det g = Lambda - (n+1) * (FS potential),   Lambda as below
//   S         = -Delta Lambda + (n+1) T
//   grad a . grad b = 2 a_l b_l / m_l
//
// with Lambda = (k-1)(log m - lambda) + (n-k) log(1-m) + log m_l - lambda
// + (n+1) log(1+t), which vanishes identically for Fubini-Study, and
// T = m0_l/m_l + (k-1) m0/m + (n-k)(1-m0)/(1-m) (= n for FS, so S = n(n+1)).
// All node quantities are built from analytic jets; finite differences enter
// only through the operator matrices acting on perturbations.

#include "xkg/burns_simanca.hpp"
#include "xkg/grid.hpp"
#include "xkg/model.hpp"
#include "xkg/radial_profile.hpp"

namespace xkg {

// d-jet of the gluing potential
//   A(d) = eps^2 * gamma2(d) * [ gamma(d/eps) log(eps^{-2} d^2) + psi(eps^{-2} d^2) ]
// The log summand is kept symbolic against its cutoff so the near-E and
// far-field cancellations happen in closed form. Identically zero for
// d >= 2 r_eps.
J5 glue_potential_jet(const BSMetric& bs, const GlueCutoffs& cut, double d);

// The four (overlapping) regions of the gluing: outside the glue, the
// cutoff annulus, the matching annulus, and the scaled-up core.
struct RegionMasks {
  std::vector<char> outer;    // d > 2 r_eps
  std::vector<char> neck;     // r_eps/2 < d < 4 r_eps
  std::vector<char> annulus;  // 2 eps < d < r_eps
  std::vector<char> core;     // d < 2 eps
};
RegionMasks region_masks(const std::vector<double>& d, const GlueCutoffs& cut);

struct ProjectiveBackground {
    int n = 4, k = 3;
    double eps = 0.0;  // 0 means pure Fubini-Study
    MappedGrid grid;
    std::vector<double> d;  // node coordinates (copy of grid.d)
    DerivTable D;           // d-derivatives, even closure both ends
    Vec lamj[5];            // jets of lambda(d) = 2 log tan d
    SpMat Dl[5];            // Dl[i]: i-th lambda-derivative matrix (i = 1..4)
    Vec A;                  // gluing potential values (zero for FS)
    Vec mx[4];              // excess momentum x = m - m0, lambda-jets
    Vec mj[4];              // momentum m and lambda-derivatives to order 3
    Vec m0, c0;             // sin^2 d, cos^2 d
    Vec Lamj[3];            // Lambda, Lambda_l, Lambda_ll
    Vec S;                  // scalar curvature at nodes (analytic jets)
    Vec l2w;                // L^2 quadrature weights (volume measure)

    int size() const { return static_cast<int>(d.size()); }
    double mu_ref() const { return static_cast<double>(k) / (n + 1); }
    Vec mu() const;  // mu_Delta = m0 - k/(n+1)

    SpMat laplacian() const;
    // Delta^2 assembled directly on D_lambda^{1..4} with analytic
    // coefficients (not as laplacian()*laplacian(), whose one-sided edge
    // truncation error compounds).
    SpMat bilaplacian() const;
    SpMat ricci_contract() const;  // u -> R^{kj} u_{jk}
    SpMat lichnerowicz() const;    // D*D = Delta^2 + R# + (1/2) grad S . grad
    SpMat linearized() const;      // L = -Delta^2 - R#
    Vec grad_pair(const Vec& a, const Vec& b) const;

    // Scalar curvature of omega + i ddbar u for a nodal radial field u
    // (lambda-derivatives of u by finite differences, the rest analytic).
    Vec scalar_curvature_of(const Vec& u) const;
    // Momentum of the perturbed metric, m + u_lambda.
    Vec momentum_of(const Vec& u) const;

    bool positive() const;
    void check_positivity() const;  // PositivityViolation names the region
};

// eps <= 0 or bs == nullptr gives the Fubini-Study background.
// inner_scale < 0 picks eps/4 (or a mild default for FS). The grid is
// truncated below d_lo (default: where the fiber coordinate eps^{-2} d^2
// reaches 1e-3, or 0.005 for FS) because the radial coordinate degenerates
// at the exceptional locus; the inner closure is one-sided.
ProjectiveBackground make_projective_background(int n, int k, double eps,
                                                const BSMetric* bs,
                                                int n_nodes = 1024,
                                                double inner_scale = -1.0,
                                                double d_lo = -1.0);

// Glued profile on the flat model: f(t) = t + A(sqrt t) as a RadialProfile
// in s = log t (d = |z| = sqrt t, eps scaling inside A).
RadialProfile make_flat_glued_profile(const BSMetric& bs, double eps,
                                      const std::vector<double>& s);

// Pointwise Lichnerowicz operator of the Fubini-Study metric applied to a
// radial function supplied by analytic d-jets (valid through order 4).
// On FS, Ricci = (n+1) omega and S is constant, so D*D h = Delta^2 h +
// (n+1) Delta h; both Laplacians are evaluated through the jet algebra.
double fs_lichnerowicz_point(int n, int k, double d, const J5& h_d);
// Same, but just the Laplacian (returned with two lambda-derivatives so it
// can be chained; out[i] = (d/dlambda)^i Delta h).
void fs_laplacian_jet(int n, int k, double d, const J5& h_d, double out[3]);

}  // namespace xkg
