#pragma once

#include "greens.hpp"
#include "linear.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace xkg {

struct NotContracting : std::runtime_error {
    explicit NotContracting(const std::string& m) : std::runtime_error(m) {}
};
struct LeftBall : std::runtime_error {
    explicit LeftBall(const std::string& m) : std::runtime_error(m) {}
};

// Full nonlinear scalar curvature S(omega_eps + i ddbar u).
Vec nonlinear_S(const GluedMetric& g, const Vec& u);

struct IterationState {
    Vec v;                  // potential correction, orthogonal to the lifts
    double g0 = 0.0;        // h-bar element g = g0 + g1 mu_Delta
    double g1 = 0.0;
    double v_norm = 0.0;    // C^{4,alpha}_delta norm of v
    double g_norm = 0.0;
    int iter = 0;
    std::vector<double> step_history;   // per-step norm deltas
    std::vector<double> ratio_history;  // successive step ratios
};

// Everything fixed during one Picard run: the glued metric with its Green's
// correction w = eps^{2k-2} gamma_1 Gamma, the chord linearization at
// omega_eps, and the balancing h-bar element h = (h0, h1) from the
// correction solve.
struct FixedPointProblem {
    GluedMetric metric;       // corrected: u_corr holds w
    GreensCorrection corr;
    LinearSystem sys;
    double delta = -1.9;
    Vec lift_mu_field;        // l(mu_Delta) at the nodes
    NormSpec vnorm, rnorm;    // C^{4,alpha}_delta and C^{0,alpha}_{delta-4}
};

FixedPointProblem make_fixed_point_problem(const ModelSpace& space,
                                           const BSMetric& bs, double eps,
                                           double delta, int n_nodes = 512);

// Equation residual R(v,g) = l(f) + 1/2 grad l(f) . grad u - S(omega_eps + i ddbar u)
// with f = s + eps^{2k-2} h + g and u = w + v. Zero exactly at a solution of
// the extremal equation with extremal datum f.
Vec residual_F(const FixedPointProblem& p, const IterationState& st);

struct ResidualBreakdown {
    double core = 0, annulus = 0, neck = 0, outer = 0, total = 0;
};
ResidualBreakdown residual_breakdown(const FixedPointProblem& p, const Vec& F);

struct ScalingStudy {
    std::vector<double> eps, norm;
    double exponent = 0, exponent_stderr = 0, target = 0;
};
// Fit of log ||F(0,0)||_{C^{0,alpha}_{delta-4}} against log eps; the claimed
// exponent is alpha(3-delta) with alpha = 2k/(2k+1). with_correction = false
// drops the Green's correction (negative control: strictly smaller exponent).
ScalingStudy residual_scaling_study(const ModelSpace& space, const BSMetric& bs,
                                    const std::vector<double>& eps_sweep,
                                    double delta, int n_nodes = 512,
                                    bool with_correction = true);

// Max over random distinct pairs in the scaled ball of
// ||N(p1) - N(p2)|| / ||p1 - p2|| where N(p) = p + P(R(p)).
double contraction_ratio(const FixedPointProblem& p, int pairs, double ball,
                         unsigned seed);

struct PicardResult {
    IterationState state;
    double C = 0;             // measured inverse bound used for the ball
    double ball_radius = 0;   // 2 C r_eps^{3-delta}
    double final_residual = 0;  // weighted norm of R at the fixed point
    double equation_sup = 0;    // sup |S(omega~) - 1/2 grad l(f).grad u - l(f)|
    double eps = 0;
    Vec u_full;               // w + v
};

PicardResult picard_solve(const ModelSpace& space, const BSMetric& bs,
                          double eps, double delta, int n_nodes = 512,
                          double C = -1.0, double tol = 1e-10,
                          int max_iter = 50, unsigned seed = 12345);

struct FExpansion {
    // intercept estimate of (f - s)/eps^{2k-2}, components on {1, mu_Delta}
    double intercept[2] = {0, 0};
    double target[2] = {0, 0};  // h = (h0, h1) from the Green's correction
    double kappa_hat = 0, kappa_stderr = 0;
    double kappa_floor = 0;  // 2k-2
};
FExpansion extract_f_expansion(const std::vector<PicardResult>& sweep,
                               const GreensCorrection& corr);

// Discretization-error study for the solved equation.  The converged state
// satisfies its own discrete system to backward-error level, so the honest
// refinement observable is the residual of the coarse solution re-evaluated on
// an independent fine grid: solve at each n in coarse_ns, interpolate the full
// potential onto the fine_n grid, and take the weighted norm of F there (nodes
// within 2*d_lo of the inner edge are excluded; interpolation is one-sided and
// meaningless that close to the boundary rows).
struct RefinementStudy {
    std::vector<int> n;
    std::vector<double> residual;
    double order = 0, order_stderr = 0;  // fit of log residual vs log(1/n)
    int fine_n = 0;
};
RefinementStudy picard_refinement_study(const ModelSpace& space,
                                        const BSMetric& bs, double eps,
                                        double delta,
                                        const std::vector<int>& coarse_ns = {256, 512, 1024},
                                        int fine_n = 2048);

}  // namespace xkg
