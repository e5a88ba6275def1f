#include "fixed_point.hpp"

#include "curvature_radial.hpp"
#include "fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace xkg {

Vec nonlinear_S(const GluedMetric& g, const Vec& u) {
    if (g.space.kind == ModelKind::Projective)
        return g.bg.scalar_curvature_of(u);
    // flat model: perturb the radial potential jets directly
    RadialProfile p = g.flat;
    const int N = static_cast<int>(p.s.size());
    if (u.size() != N) throw GridMismatch("nonlinear_S: field size mismatch");
    p.jet[0] += u;
    for (int o = 1; o <= 4; ++o) p.jet[o] += p.D.apply(o, u);
    for (int i = 0; i < N; ++i)
        if (!(p.jet[1][i] > 0.0 && p.jet[2][i] > 0.0))
            throw PositivityViolation("nonlinear_S: perturbed flat metric not positive");
    return radial_scalar_curvature(p);
}

FixedPointProblem make_fixed_point_problem(const ModelSpace& space,
                                           const BSMetric& bs, double eps,
                                           double delta, int n_nodes) {
    if (space.kind != ModelKind::Projective)
        throw std::invalid_argument("make_fixed_point_problem: projective model only");
    FixedPointProblem p;
    p.corr = greens_correction(space, std::max(n_nodes, 1024));
    GluedMetric g = assemble_omega_eps(space, bs, eps, n_nodes);
    p.metric = assemble_omega_tilde(g, p.corr);
    p.delta = delta;
    p.lift_mu_field = lift(p.metric, 0.0, 1.0).field;
    // Fold the frozen part of the drift term 1/2 grad l(f) . grad u into the
    // chord operator.  Its coefficient -eps^{2k-2} h1 is O(eps^{2k-4}) after
    // the grad-pair weight, vanishing as eps -> 0, but at desk eps it is the
    // dominant off-chord piece of dF and omitting it breaks contraction.
    {
        const auto& bg = p.metric.bg;
        // chord = dS - d(drift); residual drift coeff is c1 = -eps^{2k-2} h1,
        // grad_pair(a,b) = 2 (D1 a)(D1 b)/m1, so extra = +eps^{2k-2} h1 * ...
        const double c1 = std::pow(eps, 2.0 * space.k - 2.0) * p.corr.h1;
        const Vec coef =
            (c1 * (bg.Dl[1] * p.lift_mu_field).array() / bg.mj[1].array())
                .matrix();
        SpMat drift = coef.asDiagonal() * bg.Dl[1];
        p.sys = build_linear_system(p.metric, delta, &drift);
    }
    p.vnorm = NormSpec{delta, 4, 0.5, eps};
    p.rnorm = NormSpec{delta - 4.0, 0, 0.5, eps};
    return p;
}

Vec residual_F(const FixedPointProblem& p, const IterationState& st) {
    const auto& bg = p.metric.bg;
    const int N = bg.size();
    const int k = p.metric.space.k, n = p.metric.space.n;
    const double s = static_cast<double>(n) * (n + 1);
    const double e2k = std::pow(p.metric.eps, 2.0 * k - 2.0);
    Vec u = p.metric.u_corr;
    if (st.v.size() == N) u += st.v;
    else if (st.v.size() != 0) throw GridMismatch("residual_F: v size mismatch");
    // f = s - eps^{2k-2} h + g: the Green's element enters with a minus sign
    // because dS = -D*D while the correction solve used D*D Gamma = h0 + h1 mu.
    const double c0 = -e2k * p.corr.h0 + st.g0;
    const double c1 = -e2k * p.corr.h1 + st.g1;
    Vec lf = Vec::Constant(N, s + c0) + c1 * p.lift_mu_field;
    const Vec drift = 0.5 * c1 * bg.grad_pair(p.lift_mu_field, u);
    return lf + drift - bg.scalar_curvature_of(u);
}

static double masked_norm(const FixedPointProblem& p, const Vec& F,
                          const std::vector<char>& mask) {
    bool any = false;
    for (char c : mask)
        if (c) { any = true; break; }
    if (!any) return 0.0;
    return weighted_norm(p.sys.d, p.metric.bg.D, F, p.rnorm, &mask);
}

ResidualBreakdown residual_breakdown(const FixedPointProblem& p, const Vec& F) {
    ResidualBreakdown b;
    b.core = masked_norm(p, F, p.metric.regions.core);
    b.annulus = masked_norm(p, F, p.metric.regions.annulus);
    b.neck = masked_norm(p, F, p.metric.regions.neck);
    b.outer = masked_norm(p, F, p.metric.regions.outer);
    b.total = weighted_norm(p.sys.d, p.metric.bg.D, F, p.rnorm);
    return b;
}

ScalingStudy residual_scaling_study(const ModelSpace& space, const BSMetric& bs,
                                    const std::vector<double>& eps_sweep,
                                    double delta, int n_nodes,
                                    bool with_correction) {
    if (eps_sweep.size() < 4)
        throw InsufficientSweep("residual_scaling_study: need >= 4 eps values");
    if (space.k <= 2)
        throw std::invalid_argument("residual_scaling_study: needs k > 2");
    ScalingStudy st;
    for (double eps : eps_sweep) {
        FixedPointProblem p = make_fixed_point_problem(space, bs, eps, delta, n_nodes);
        if (!with_correction) {
            p.metric.u_corr.setZero();
            p.corr.h0 = p.corr.h1 = 0.0;
        }
        const Vec F = residual_F(p, IterationState{});
        st.eps.push_back(eps);
        st.norm.push_back(weighted_norm(p.sys.d, p.metric.bg.D, F, p.rnorm));
    }
    const LineFit f = fit_loglog(st.eps, st.norm);
    st.exponent = f.slope;
    st.exponent_stderr = f.slope_stderr;
    const double alpha = 2.0 * space.k / (2.0 * space.k + 1.0);
    st.target = alpha * (3.0 - delta);
    return st;
}

// random bump in the constrained subspace, scaled to a given v-norm
static Vec random_constrained_field(const FixedPointProblem& p, std::mt19937& rng,
                                    double vnorm_target) {
    const auto& bg = p.metric.bg;
    const int N = bg.size();
    std::uniform_real_distribution<double> C(0.08, 1.3), W(0.05, 0.3);
    Vec v(N);
    const double c = C(rng), w = W(rng);
    for (int i = 0; i < N; ++i) {
        const double x = (bg.d[i] - c) / w;
        v[i] = std::exp(-0.5 * x * x);
    }
    // project out the lifts in the L2 pairing
    const Vec& one = p.sys.lift_one;
    const Vec& mu = p.sys.lift_mu;
    const auto& wts = bg.l2w;
    Eigen::Matrix2d G;
    G << (one.array() * one.array() * wts.array()).sum(),
        (one.array() * mu.array() * wts.array()).sum(),
        (one.array() * mu.array() * wts.array()).sum(),
        (mu.array() * mu.array() * wts.array()).sum();
    Eigen::Vector2d rhsv((v.array() * one.array() * wts.array()).sum(),
                         (v.array() * mu.array() * wts.array()).sum());
    const Eigen::Vector2d ab = G.ldlt().solve(rhsv);
    v -= ab[0] * one + ab[1] * mu;
    // Push the probe into the admissible subspace of the discrete inverse
    // (inner-edge regularity rows + lift constraints).  The iteration itself
    // only ever visits this subspace: v starts at 0 and moves by P-outputs,
    // so measuring Lipschitz ratios outside it would charge the operator for
    // grid-truncation modes it never sees.
    v = solve(p.sys, p.sys.L * v).u;
    const double nv = weighted_norm(p.sys.d, bg.D, v, p.vnorm);
    return v * (vnorm_target / std::max(nv, 1e-300));
}

static double pair_norm(const FixedPointProblem& p, const Vec& v, double g0, double g1) {
    return weighted_norm(p.sys.d, p.metric.bg.D, v, p.vnorm) + hbar_norm(g0, g1);
}

double contraction_ratio(const FixedPointProblem& p, int pairs, double ball,
                         unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> scale(0.2, 1.0), gdist(-0.5, 0.5);
    double worst = 0.0;
    for (int q = 0; q < pairs; ++q) {
        IterationState a, b;
        a.v = random_constrained_field(p, rng, ball * scale(rng));
        b.v = random_constrained_field(p, rng, ball * scale(rng));
        a.g0 = ball * gdist(rng); a.g1 = ball * gdist(rng);
        b.g0 = ball * gdist(rng); b.g1 = ball * gdist(rng);
        const SolveResult ra = solve(p.sys, residual_F(p, a));
        const SolveResult rb = solve(p.sys, residual_F(p, b));
        // N(p) = p + P(R(p)); the affine parts cancel in the difference
        const Vec dv = (a.v + ra.u) - (b.v + rb.u);
        const double dg0 = (a.g0 + ra.f0) - (b.g0 + rb.f0);
        const double dg1 = (a.g1 + ra.f1) - (b.g1 + rb.f1);
        const double num = pair_norm(p, dv, dg0, dg1);
        const double den = pair_norm(p, a.v - b.v, a.g0 - b.g0, a.g1 - b.g1);
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

PicardResult picard_solve(const ModelSpace& space, const BSMetric& bs,
                          double eps, double delta, int n_nodes, double C,
                          double tol, int max_iter, unsigned seed) {
    FixedPointProblem p = make_fixed_point_problem(space, bs, eps, delta, n_nodes);
    const auto& bg = p.metric.bg;
    const int N = bg.size();
    if (C <= 0.0) {
        // measure the inverse bound on this system with a few probes
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> Cd(0.08, 1.3), W(0.05, 0.3);
        for (int q = 0; q < 8; ++q) {
            Vec rhs(N);
            const double c = Cd(rng), w = W(rng);
            for (int i = 0; i < N; ++i) {
                const double x = (bg.d[i] - c) / w;
                rhs[i] = std::exp(-0.5 * x * x);
            }
            C = std::max(C, solve(p.sys, rhs).bound);
        }
    }
    PicardResult out;
    out.C = C;
    out.eps = eps;
    // ball U = {|(v,g)| <= 2 C r^{3-delta}} with C absorbing both measured
    // constants: the inverse bound and the residual constant |F(0,0)| / r^{3-delta}
    const double f0norm = weighted_norm(
        p.sys.d, bg.D, residual_F(p, IterationState{}), p.rnorm);
    out.ball_radius = 2.0 * C * f0norm;
    IterationState st;
    st.v = Vec::Zero(N);
    Vec F;
    double prev_step = -1.0;
    int bad_streak = 0;
    for (st.iter = 0; st.iter < max_iter; ++st.iter) {
        F = residual_F(p, st);
        const SolveResult r = solve(p.sys, F);
        st.v += r.u;
        st.g0 += r.f0;
        st.g1 += r.f1;
        const double step = pair_norm(p, r.u, r.f0, r.f1);
        st.step_history.push_back(step);
        st.v_norm = weighted_norm(p.sys.d, bg.D, st.v, p.vnorm);
        st.g_norm = hbar_norm(st.g0, st.g1);
        if (st.v_norm + st.g_norm > out.ball_radius)
            throw LeftBall("picard_solve: iterate left the ball U");
        const double state_norm = std::max(st.v_norm + st.g_norm, 1e-300);
        if (prev_step > 0.0) {
            const double ratio = step / prev_step;
            st.ratio_history.push_back(ratio);
            // transient upticks happen (the ratio fluctuates about its
            // asymptotic value); call divergence only on a sustained trend,
            // and treat a stall deep below the initial step as convergence
            // at the solver's noise floor
            if (ratio >= 1.0 && step > 10.0 * tol * state_norm) {
                if (++bad_streak >= 2) {
                    // genuine divergence climbs back to the initial-step
                    // scale; sustained upticks far below it are the solver's
                    // noise floor, i.e. convergence to attainable accuracy
                    if (step >= 0.5 * st.step_history.front())
                        throw NotContracting("picard_solve: step ratio >= 1");
                    break;
                }
            } else {
                bad_streak = 0;
            }
        }
        prev_step = step;
        if (step <= tol * state_norm) break;
    }
    if (st.iter >= max_iter)
        throw SolverFailed("picard_solve: no convergence within max_iter");
    ++st.iter;
    F = residual_F(p, st);
    out.final_residual = weighted_norm(p.sys.d, bg.D, F, p.rnorm);
    out.equation_sup = F.cwiseAbs().maxCoeff();
    out.u_full = p.metric.u_corr + st.v;
    out.state = std::move(st);
    return out;
}

FExpansion extract_f_expansion(const std::vector<PicardResult>& sweep,
                               const GreensCorrection& corr) {
    const size_t M = sweep.size();
    if (M < 3)
        throw InsufficientSweep("extract_f_expansion: need >= 3 fixed points");
    const int k = corr.k;
    FExpansion fx;
    fx.kappa_floor = 2.0 * k - 2.0;
    fx.target[0] = -corr.h0;
    fx.target[1] = -corr.h1;
    // y(eps) = (f - s)/eps^{2k-2}, componentwise on {1, mu_Delta}
    std::vector<double> eps(M), y0(M), y1(M);
    for (size_t i = 0; i < M; ++i) {
        eps[i] = sweep[i].eps;
        const double e2k = std::pow(eps[i], 2.0 * k - 2.0);
        y0[i] = -corr.h0 + sweep[i].state.g0 / e2k;
        y1[i] = -corr.h1 + sweep[i].state.g1 / e2k;
    }
    // successive differences decay like eps^{kappa - (2k-2)} on a dyadic sweep
    std::vector<double> em, dn;
    for (size_t i = 0; i + 1 < M; ++i) {
        em.push_back(std::sqrt(eps[i] * eps[i + 1]));
        dn.push_back(std::hypot(y0[i] - y0[i + 1], y1[i] - y1[i + 1]));
    }
    const LineFit f = fit_loglog(em, dn);
    fx.kappa_hat = fx.kappa_floor + f.slope;
    fx.kappa_stderr = f.slope_stderr;
    // geometric-series extrapolation of the intercept from the last step
    const double den = std::pow(2.0, f.slope) - 1.0;
    const size_t L = M - 1;
    fx.intercept[0] = y0[L] - (den > 0 ? (y0[L - 1] - y0[L]) / den : 0.0);
    fx.intercept[1] = y1[L] - (den > 0 ? (y1[L - 1] - y1[L]) / den : 0.0);
    return fx;
}

RefinementStudy picard_refinement_study(const ModelSpace& space,
                                        const BSMetric& bs, double eps,
                                        double delta,
                                        const std::vector<int>& coarse_ns,
                                        int fine_n) {
    RefinementStudy out;
    out.fine_n = fine_n;
    FixedPointProblem fine = make_fixed_point_problem(space, bs, eps, delta, fine_n);
    const Vec& xf = fine.sys.d;
    const int Nf = static_cast<int>(xf.size());
    const double d_cut = 2.0 * xf[0];
    std::vector<char> mask(Nf, 0);
    for (int i = 0; i < Nf; ++i) mask[i] = xf[i] >= d_cut ? 1 : 0;

    for (int n : coarse_ns) {
        const PicardResult r = picard_solve(space, bs, eps, delta, n);
        // 6-point Lagrange interpolation of the full potential onto the fine grid
        FixedPointProblem coarse = make_fixed_point_problem(space, bs, eps, delta, n);
        const Vec& xc = coarse.sys.d;
        const int Nc = static_cast<int>(xc.size());
        Vec uf(Nf);
        for (int i = 0; i < Nf; ++i) {
            auto it = std::lower_bound(xc.data(), xc.data() + Nc, xf[i]);
            int lo = std::clamp(static_cast<int>(it - xc.data()) - 3, 0, Nc - 6);
            std::vector<double> nodes(xc.data() + lo, xc.data() + lo + 6);
            const auto w = fornberg_weights(xf[i], nodes, 0);
            double v = 0;
            for (int m = 0; m < 6; ++m) v += w[m] * r.u_full[lo + m];
            uf[i] = v;
        }
        IterationState st;
        st.v = uf - fine.metric.u_corr;
        st.g0 = r.state.g0;
        st.g1 = r.state.g1;
        const Vec F = residual_F(fine, st);
        out.n.push_back(n);
        out.residual.push_back(
            weighted_norm(xf, fine.metric.bg.D, F, fine.rnorm, &mask));
    }
    std::vector<double> h, res;
    for (size_t i = 0; i < out.n.size(); ++i) {
        h.push_back(1.0 / out.n[i]);
        res.push_back(out.residual[i]);
    }
    const LineFit f = fit_loglog(h, res);
    out.order = f.slope;
    out.order_stderr = f.slope_stderr;
    return out;
}

}  // namespace xkg
