#include "xkg/momentum_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "xkg/quadrature.hpp"

namespace xkg {

namespace {

double Qm(int n, int k, double m) {
    return std::pow(m, k - 1) * std::pow(1.0 - m, n - k);
}

// Q * R0 is polynomial (k >= 2, n - k >= 1): the endpoint poles cancel.
double QR0(int n, int k, double m) {
    return k * (k - 1.0) * std::pow(m, k - 2) * std::pow(1.0 - m, n - k) +
           (n - k) * (n - k + 1.0) * std::pow(m, k - 1) *
               std::pow(1.0 - m, n - k - 1);
}

double gl_int(const std::function<double(double)>& f, double a, double b) {
    // integrands here are polynomials of degree <= n + 1; 8 nodes are exact
    // far beyond that
    const QuadRule q = gauss_legendre(8, a, b);
    double s = 0.0;
    for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * f(q.x[i]);
    return s;
}

}  // namespace

double MomentumProfile::phi(double m) const {
    // psi = Q phi from the collapsed double integral; the ODE right-hand side
    // is polynomial so this is exact up to rounding
    const int nn = n, kk = k;
    const double Aa = A, Bb = B;
    const double psi =
        Qm(nn, kk, a) * (m - a) +
        gl_int(
            [&](double s) {
                return (m - s) *
                       (QR0(nn, kk, s) - (Aa + Bb * s) * Qm(nn, kk, s));
            },
            a, m);
    return psi / Qm(nn, kk, m);
}

MomentumProfile solve_extremal_profile(int n, int k, double eps) {
    if (!(k >= 2 && n > k))
        throw ClassNotPositive("solve_extremal_profile: need 2 <= k < n");
    if (!(eps >= 0.0) || eps * eps >= 1.0)
        throw ClassNotPositive(
            "solve_extremal_profile: class positive only for 0 <= eps < 1");
    MomentumProfile o;
    o.n = n;
    o.k = k;
    o.eps = eps;
    o.a = eps * eps;
    const double a = o.a;

    // (A, B) from psi(1) = psi'(1) = 0; all moments of Q are polynomial
    const auto Q = [&](double s) { return Qm(n, k, s); };
    const auto QR = [&](double s) { return QR0(n, k, s); };
    const double IA1 = gl_int([&](double s) { return (1.0 - s) * Q(s); }, a, 1);
    const double IB1 =
        gl_int([&](double s) { return (1.0 - s) * s * Q(s); }, a, 1);
    const double IR1 = gl_int([&](double s) { return (1.0 - s) * QR(s); }, a, 1);
    const double IA0 = gl_int(Q, a, 1);
    const double IB0 = gl_int([&](double s) { return s * Q(s); }, a, 1);
    const double IR0 = gl_int(QR, a, 1);
    const double r1 = Q(a) * (1.0 - a) + IR1;
    const double r0 = Q(a) + IR0;
    const double det = IA1 * IB0 - IB1 * IA0;
    o.A = (r1 * IB0 - IB1 * r0) / det;
    o.B = (IA1 * r0 - r1 * IA0) / det;

    // compactification slopes (one-sided 2nd-order differences; phi = 0 at
    // both ends by construction)
    // near a the profile turns over on the scale a itself
    const double ha = a > 0.0 ? 1e-3 * a : 1e-5;
    const double hb = 1e-5 * (1.0 - a);
    o.slope_a = (4.0 * o.phi(a + ha) - o.phi(a + 2 * ha)) / (2.0 * ha);
    o.slope_b = -(4.0 * o.phi(1.0 - hb) - o.phi(1.0 - 2 * hb)) / (2.0 * hb);

    // positivity of the profile and the affine-curvature reconstruction.
    // S is rebuilt from phi alone through a local 5-point second difference
    // of psi = Q phi (check-only rule, not the pipeline stencils), so this
    // exercises the boundary solve rather than restating the ODE.
    o.phi_min = std::numeric_limits<double>::infinity();
    o.affine_defect = 0.0;
    const int samples = 60;
    const double hd = 1e-3 * (1.0 - a);
    for (int i = 1; i < samples; ++i) {
        const double m = a + (1.0 - a) * i / samples;
        o.phi_min = std::min(o.phi_min, o.phi(m));
        if (m - 2 * hd <= a || m + 2 * hd >= 1.0) continue;
        const auto psi = [&](double x) { return Q(x) * o.phi(x); };
        const double psi2 =
            (-psi(m - 2 * hd) + 16.0 * psi(m - hd) - 30.0 * psi(m) +
             16.0 * psi(m + hd) - psi(m + 2 * hd)) /
            (12.0 * hd * hd);
        const double S_rec = QR(m) / Q(m) - psi2 / Q(m);
        o.affine_defect =
            std::max(o.affine_defect, std::fabs(S_rec - o.S_of(m)));
    }
    if (!(o.phi_min > 0.0))
        throw NoSolutionInClass(
            "solve_extremal_profile: momentum profile not positive");

    const double I_full = gl_int(Q, 0, 1);
    o.vol_ratio = IA0 / I_full;
    o.vol_deficit = gl_int(Q, 0, a) / I_full;
    return o;
}

GluedComparison compare_with_glued(const MomentumProfile& o,
                                   const FixedPointProblem& p,
                                   const IterationState& st) {
    const auto& bg = p.metric.bg;
    const int n = p.metric.space.n, k = p.metric.space.k;
    if (o.n != n || o.k != k || std::fabs(o.eps - p.metric.eps) > 1e-14)
        throw ClassMismatch("compare_with_glued: (n, k, eps) differ");

    GluedComparison r;
    r.eps = o.eps;
    r.A_oracle = o.A;
    r.B_oracle = o.B;

    // f = s + c0 + c1 l(mu) with l(mu) = m - k/(n+1): affine data of the
    // fixed point in its own momentum coordinate
    const double e2k = std::pow(o.eps, 2.0 * k - 2.0);
    const double c0 = -e2k * p.corr.h0 + st.g0;
    const double c1 = -e2k * p.corr.h1 + st.g1;
    r.B_fixed = c1;
    r.A_fixed = n * (n + 1.0) + c0 - c1 * bg.mu_ref();

    Vec u = p.metric.u_corr;
    if (st.v.size() == bg.size()) u += st.v;
    const Vec m_g = bg.momentum_of(u);
    const Vec S_g = bg.scalar_curvature_of(u);
    // Field comparison on {d > 2 r_eps}, where the glued background is the
    // base metric exactly.  Closer in, pointwise S needs fourth differences
    // across the C^4 cutoff seams and the one-sided inner closure, whose
    // conditioning grows as eps shrinks at fixed n; that noise belongs to the
    // evaluation, not to either metric (see affine_sup_diff for the
    // seam-free global comparison).
    r.sup_S_diff = 0.0;
    for (int i = 0; i < bg.size(); ++i) {
        if (!p.metric.regions.outer[i]) continue;
        r.sup_S_diff =
            std::max(r.sup_S_diff, std::fabs(S_g[i] - o.S_of(m_g[i])));
    }
    // At the fixed point S_glued = A_fixed + B_fixed * m holds exactly in its
    // own momentum, so this is sup_{[a,1]} |S_glued - S_oracle| as functions
    // of the momentum coordinate.
    const double dA = r.A_fixed - o.A, dB = r.B_fixed - o.B;
    r.affine_sup_diff = std::max(std::fabs(dA + dB * o.a), std::fabs(dA + dB));
    r.min_momentum_rel = std::fabs(m_g.minCoeff() - o.a) / o.a;

    r.vol_ratio_glued = bg.l2w.sum() / vol_pn(n);
    r.vol_ratio_oracle = o.vol_ratio;
    return r;
}

}  // namespace xkg
