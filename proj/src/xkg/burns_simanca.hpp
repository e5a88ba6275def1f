#pragma once
// The scalar-flat, asymptotically flat U(k)-invariant metric on Bl_0 C^k.
//
// With u = f_s (the momentum coordinate) and p(u) = du/ds, scalar-flatness
// integrates in closed form to
//   p(u) = u - (k-1) u^{2-k} + (k-2) u^{1-k}
//        = P(u) / u^{k-1},  P(u) = u^k - (k-1) u + (k-2),
// normalized so the exceptional divisor sits at u = 1 (p(1) = 0, p'(1) = 1).
// For k = 2 this is the Burns metric f = t + log t exactly. The coordinate
// and potential are recovered by quadrature:
//   s(u) = log(u-1) + E(u),   E(u) = -∫_u^∞ [x^{k-1}/P(x) - 1/(x-1)] dx
//   f(u) = u + ∫_∞^u [(k-1)x - (k-2)]/P(x) dx   (k ≥ 3; anchored so f - t → 0)
// and all s-jets of f are exact rational expressions in u. The expansion
// ψ(t) = f(t) - t - γ(√t) log t has tail ψ ~ -t^{2-k}/(k-2) for k ≥ 3.

#include <string>

#include "xkg/radial_profile.hpp"

namespace xkg {

struct BSMetric {
  int k = 3;
  double t_min = 0.0, t_max = 0.0;
  RadialProfile profile;     // full potential f with exact s-jets
  double log_coeff = 1.0;    // coefficient of the (cutoff) log t summand
  double tol = 1e-10;        // claimed sup|S| tolerance

  // Pointwise evaluation at arbitrary t > 0 (not just grid nodes).
  double potential(double t) const;          // f(t)
  double momentum(double t) const;           // u = f_s
  void jets(double t, double out[5]) const;  // f, f_s, .., f_ssss
  double psi(double t) const;                // f - t - gamma(sqrt t) log t
  void psi_jets(double t, double out[5]) const;  // s-jets of psi
};

struct BSExpansion {
  double leading_coeff = 0.0;   // fitted coefficient of t^{2-k} in psi
  double leading_exponent = 0;  // fitted tail exponent of psi
  double tilde_exponent = 0;    // fitted tail exponent of psi - leading term
  bool degenerate = false;      // k = 2: the t^0 "tail" collides with log t
};

// Closed-form solve; grid covers [t_min, t_max] in s with n_nodes nodes.
BSMetric solve_burns_simanca(int k, double t_min = 1e-4, double t_max = 1e4,
                             int n_nodes = 2048);

BSExpansion expansion_data(const BSMetric& m);

double evaluate_bs_potential(const BSMetric& m, double t);

// Exact closed-form value of the t^{2-k} coefficient, -1/(k-2), kept for
// cross-checks against the fitted value.
double bs_leading_coeff_exact(int k);

// CSV: node table (s, f, f', f'', f''', f'''') with a sidecar comment line
// recording k, grid bounds, log coefficient and fitted leading coefficient.
void write_bs_csv(const BSMetric& m, const BSExpansion& e, const std::string& path);

}  // namespace xkg
