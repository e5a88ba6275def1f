#pragma once
// Curvature calculus for U(k)-invariant Kähler metrics on (punctured or
// blown-up) C^k, optionally times a flat C^{n-k} factor.
//
// Convention (fixed for the whole repository): complex curvature,
//   S(omega) = g^{jk̄} R_{jk̄},  R_{jk̄} = -∂_j ∂_k̄ log det g,
// which is half the Riemannian scalar curvature. Under this convention the
// Fubini-Study metric on P^n has S = n(n+1) and the complex Laplacian
// Δ = g^{jk̄}∂_j∂_k̄ satisfies Δ|w|^2 = k on flat C^k.
//
// In s = log t, t = |w|^2, with u = f_s and p = f_ss:
//   Δh   = h_ss/p + (k-1) h_s/u
//   log det g = (k-1) log u + log p - k s   (up to an additive constant)
//   S    = -Δ log det g
//   R^{k̄j} a_{jk̄} = -[(k-1) L_s a_s / u^2 + L_ss a_ss / p^2],  L = log det g
//   ∇a·∇b = 2 a_s b_s / p
// A flat C^{n-k} factor contributes nothing to any of these on invariant
// functions, so it enters only through bookkeeping (the `ambient` flag).

#include "xkg/radial_profile.hpp"

namespace xkg {

// S(omega) at the nodes, evaluated pointwise from the stored jets.
Vec radial_scalar_curvature(const RadialProfile& p);

// Δ_omega u for a field sampled on the profile's grid.
Vec radial_laplacian(const RadialProfile& p, const Vec& u);

// L(u) = -Δ²u - R^{k̄j} u_{jk̄}
Vec radial_linearized_scalar_op(const RadialProfile& p, const Vec& u);

// 𝒟*𝒟 u = Δ²u + R^{k̄j} u_{jk̄} + ½ ∇S·∇u
Vec radial_lichnerowicz(const RadialProfile& p, const Vec& u);

// ∇a·∇b (real gradient pairing in the metric of p)
Vec radial_grad_pair(const RadialProfile& p, const Vec& a, const Vec& b);

// Sparse operator matrices on the grid (for solves and dense oracles).
SpMat radial_laplacian_matrix(const RadialProfile& p);
SpMat radial_lichnerowicz_matrix(const RadialProfile& p);
SpMat radial_linearized_matrix(const RadialProfile& p);

// L² weights: \int a b dV ≈ sum w_i a_i b_i over the radial sector.
// dV = c_k t^{k-1} det(..) dt restricted to invariant functions reduces to
// density u^{k-1} p ds (up to the sphere volume, omitted consistently).
Vec radial_l2_weights(const RadialProfile& p);

// Scalar-curvature jet (S, S_s, S_ss) at node i from the profile jets; used
// by the drift term and by pointwise composite operators.
void radial_S_jet(const RadialProfile& p, int i, double out[3]);

}  // namespace xkg
