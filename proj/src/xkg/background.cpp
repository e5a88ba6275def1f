#include "xkg/background.hpp"

#include "xkg/cutoff.hpp"
#include "xkg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace xkg {

namespace {

// jets of lambda(d) = 2 log tan d = 2 log sin d - 2 log cos d
J5 lambda_jets(double d) {
    const J5 js = {std::sin(d), std::cos(d), -std::sin(d), -std::cos(d), std::sin(d)};
    const J5 jc = {std::cos(d), -std::sin(d), -std::cos(d), std::sin(d), std::cos(d)};
    return jscale(jsub(jlog(js), jlog(jc)), 2.0);
}

// lambda-jets of the FS momentum m0 = sin^2 d: m0' = m0(1-m0), etc.
// c0v = cos^2 d passed separately so no precision is lost near either pole.
J5 fs_momentum_jets(double m0v, double c0v) {
    const double delta = c0v - m0v;  // 1 - 2 m0
    J5 M{};
    M[0] = m0v;
    M[1] = m0v * c0v;
    M[2] = M[1] * delta;
    M[3] = M[2] * delta - 2.0 * M[1] * M[1];
    M[4] = M[3] * delta - 6.0 * M[1] * M[2];
    return M;
}

J5 shiftj(const J5& a, int s) {
    J5 r{};
    for (int i = 0; i + s < 5; ++i) r[i] = a[i + s];
    return r;
}

// Lambda jets and scalar curvature at one node, parametrized by the excess
// momentum x = m - m0 (lambda-jets). Lambda is evaluated in ratio form
// against the analytic FS momentum,
//   Lambda = (k-1) log(m/m0) + (n-k) log((1-m)/(1-m0)) + log(m_l/m0_l),
// with m = m0 + x and 1-m = (1-m0) - x formed from the analytic jets, so
// Lambda (and S - n(n+1)) vanish bit-exactly wherever x does and no
// cancellation occurs near the poles m -> 0, 1.
void curvature_point(int n, int k, const double xjet[4], double m0v, double c0v,
                     double Lam[3], double* Sout) {
    const J5 x = {xjet[0], xjet[1], xjet[2], xjet[3], 0.0};
    const J5 M0 = fs_momentum_jets(m0v, c0v);
    // jets of 1-m0; the value is cos^2 d computed directly, not by subtraction
    const J5 C0 = {c0v, -M0[1], -M0[2], -M0[3], -M0[4]};
    const J5 m = jadd(M0, x);
    const J5 c = jsub(C0, x);
    const J5 m1 = shiftj(m, 1);
    const J5 M1 = shiftj(M0, 1);
    J5 L = jscale(jlog(jdiv(m, M0)), k - 1);
    L = jadd(L, jscale(jlog(jdiv(c, C0)), n - k));
    L = jadd(L, jlog(jdiv(m1, M1)));
    for (int i = 0; i < 3; ++i) Lam[i] = L[i];
    const double lap_L = L[2] / m1[0] + (k - 1) * L[1] / m[0] - (n - k) * L[1] / c[0];
    const double T = M1[0] / m1[0] + (k - 1) * m0v / m[0] + (n - k) * C0[0] / c[0];
    *Sout = -lap_L + (n + 1) * T;
}

SpMat dmul(const Vec& c, const SpMat& A) { return SpMat(c.asDiagonal() * A); }

}  // namespace

J5 glue_potential_jet(const BSMetric& bs, const GlueCutoffs& cut, double d) {
    if (d >= 2.0 * cut.r_eps) return jconst(0.0);
    if (d <= 0.0) throw std::invalid_argument("glue_potential_jet: d must be positive");
    const double e = cut.eps;
    const double t = (d / e) * (d / e);
    // s(d) = log(eps^{-2} d^2); its value is also the log summand
    const double d2 = d * d;
    const J5 sd = {std::log(t), 2.0 / d, -2.0 / d2, 4.0 / (d2 * d), -12.0 / (d2 * d2)};
    J5 psis;
    bs.psi_jets(t, psis.data());
    const J5 psid = jcompose(psis, sd);
    J5 gam, g2;
    for (int i = 0; i < 5; ++i) {
        gam[i] = cutoff_at_scale(d, e, i);
        g2[i] = cut.gamma2(d, i);
    }
    const J5 core = jadd(jmul(gam, sd), psid);
    return jscale(jmul(g2, core), e * e);
}

RegionMasks region_masks(const std::vector<double>& d, const GlueCutoffs& cut) {
    const size_t n = d.size();
    RegionMasks r;
    r.outer.assign(n, 0);
    r.neck.assign(n, 0);
    r.annulus.assign(n, 0);
    r.core.assign(n, 0);
    for (size_t j = 0; j < n; ++j) {
        if (d[j] > 2.0 * cut.r_eps) r.outer[j] = 1;
        if (d[j] > 0.5 * cut.r_eps && d[j] < 4.0 * cut.r_eps) r.neck[j] = 1;
        if (d[j] > 2.0 * cut.eps && d[j] < cut.r_eps) r.annulus[j] = 1;
        if (d[j] < 2.0 * cut.eps) r.core[j] = 1;
    }
    return r;
}

Vec ProjectiveBackground::mu() const {
    return m0.array() - mu_ref();
}

SpMat ProjectiveBackground::laplacian() const {
    const Vec c2 = mj[1].cwiseInverse();
    const auto cm = (c0.array() - mx[0].array());  // 1 - m without cancellation
    const Vec c1 = ((k - 1) / mj[0].array() - (n - k) / cm).matrix();
    return dmul(c2, Dl[2]) + dmul(c1, Dl[1]);
}

SpMat ProjectiveBackground::bilaplacian() const {
    const auto m = mj[0].array();
    const auto m1 = mj[1].array();
    const auto m2 = mj[2].array();
    const auto m3 = mj[3].array();
    const auto cm = (c0.array() - mx[0].array());
    const auto a = 1.0 / m1;
    const auto ap = -m2 / (m1 * m1);
    const auto app = -m3 / (m1 * m1) + 2.0 * m2 * m2 / (m1 * m1 * m1);
    const auto c = (k - 1) / m - (n - k) / cm;
    const auto cp = -(k - 1) * m1 / (m * m) - (n - k) * m1 / (cm * cm);
    const auto cpp = -(k - 1) * (m2 / (m * m) - 2.0 * m1 * m1 / (m * m * m)) -
                     (n - k) * (m2 / (cm * cm) + 2.0 * m1 * m1 / (cm * cm * cm));
    const Vec k4 = (a * a).matrix();
    const Vec k3 = (2.0 * a * (ap + c)).matrix();
    const Vec k2 = (a * (app + 2.0 * cp) + c * (ap + c)).matrix();
    const Vec k1 = (a * cpp + c * cp).matrix();
    return dmul(k4, Dl[4]) + dmul(k3, Dl[3]) + dmul(k2, Dl[2]) + dmul(k1, Dl[1]);
}

SpMat ProjectiveBackground::ricci_contract() const {
    const auto m = mj[0].array();
    const auto m1 = mj[1].array();
    const auto cm = (c0.array() - mx[0].array());
    const Vec c2 =
        ((-Lamj[2].array() + (n + 1) * m0.array() * c0.array()) / (m1 * m1)).matrix();
    const Vec c1 = ((k - 1) * (-Lamj[1].array() + (n + 1) * m0.array()) / (m * m) -
                    (n - k) * (Lamj[1].array() + (n + 1) * c0.array()) / (cm * cm))
                       .matrix();
    return dmul(c2, Dl[2]) + dmul(c1, Dl[1]);
}

SpMat ProjectiveBackground::lichnerowicz() const {
    const Vec S_l = Dl[1] * S;
    const Vec cd = (S_l.array() / mj[1].array()).matrix();
    return bilaplacian() + ricci_contract() + dmul(cd, Dl[1]);
}

SpMat ProjectiveBackground::linearized() const {
    return SpMat(-(bilaplacian() + ricci_contract()));
}

Vec ProjectiveBackground::grad_pair(const Vec& a, const Vec& b) const {
    const Vec al = Dl[1] * a, bl = Dl[1] * b;
    return (2.0 * al.array() * bl.array() / mj[1].array()).matrix();
}

Vec ProjectiveBackground::scalar_curvature_of(const Vec& u) const {
    if (u.size() != mj[0].size())
        throw GridMismatch("scalar_curvature_of: field size mismatch");
    Vec du[4];
    for (int i = 0; i < 4; ++i) du[i] = Dl[i + 1] * u;
    const int N = size();
    Vec out(N);
    for (int j = 0; j < N; ++j) {
        double xjet[4], Lam[3], Sv;
        for (int i = 0; i < 4; ++i) xjet[i] = mx[i][j] + du[i][j];
        const double m = m0[j] + xjet[0];
        if (!(m > 0.0 && m0[j] * c0[j] + xjet[1] > 0.0 && m < 1.0))
            throw PositivityViolation("scalar_curvature_of: perturbed metric not positive");
        curvature_point(n, k, xjet, m0[j], c0[j], Lam, &Sv);
        out[j] = Sv;
    }
    return out;
}

Vec ProjectiveBackground::momentum_of(const Vec& u) const {
    return mj[0] + Dl[1] * u;
}

bool ProjectiveBackground::positive() const {
    for (int j = 0; j < size(); ++j)
        if (!(mj[0][j] > 0.0 && mj[1][j] > 0.0 && c0[j] - mx[0][j] > 0.0)) return false;
    return true;
}

void ProjectiveBackground::check_positivity() const {
    for (int j = 0; j < size(); ++j) {
        if (mj[0][j] > 0.0 && mj[1][j] > 0.0 && c0[j] - mx[0][j] > 0.0) continue;
        std::string region = "fubini-study";
        if (eps > 0.0) {
            const GlueCutoffs cut = make_cutoffs(eps, k);
            if (d[j] > 2.0 * cut.r_eps) region = "outer";
            else if (d[j] > cut.r_eps / 2.0) region = "neck";
            else if (d[j] > 2.0 * eps) region = "annulus";
            else region = "core";
        }
        throw PositivityViolation("metric degenerates in region '" + region +
                                  "' at d = " + std::to_string(d[j]));
    }
}

ProjectiveBackground make_projective_background(int n, int k, double eps,
                                                const BSMetric* bs, int n_nodes,
                                                double inner_scale, double d_lo) {
    if (k < 2 || n <= k) throw std::invalid_argument("background: need 2 <= k < n");
    if (eps > 0.0 && (!bs || bs->k != k))
        throw std::invalid_argument("background: BS metric missing or wrong k");
    if (inner_scale <= 0.0) inner_scale = (eps > 0.0) ? eps / 4.0 : 0.01;
    if (d_lo <= 0.0) d_lo = (eps > 0.0) ? eps * std::sqrt(1e-3) : 0.005;

    ProjectiveBackground bg;
    bg.n = n;
    bg.k = k;
    bg.eps = eps;
    bg.grid = truncate_below(mapped_grid(M_PI / 2.0, inner_scale, n_nodes), d_lo);
    bg.d = bg.grid.d;
    bg.D = bg.grid.deriv_onesided_even();
    const int N = static_cast<int>(bg.d.size());

    for (int i = 0; i < 5; ++i) bg.lamj[i] = Vec(N);
    bg.A = Vec::Zero(N);
    for (int i = 0; i < 4; ++i) {
        bg.mx[i] = Vec(N);
        bg.mj[i] = Vec(N);
    }
    bg.m0 = Vec(N);
    bg.c0 = Vec(N);
    for (int i = 0; i < 3; ++i) bg.Lamj[i] = Vec(N);
    bg.S = Vec(N);

    GlueCutoffs cut;
    if (eps > 0.0) cut = make_cutoffs(eps, k);

    for (int j = 0; j < N; ++j) {
        const double dj = bg.d[j];
        const J5 lam = lambda_jets(dj);
        for (int i = 0; i < 5; ++i) bg.lamj[i][j] = lam[i];
        const double sn = std::sin(dj), cs = std::cos(dj);
        bg.m0[j] = sn * sn;
        bg.c0[j] = cs * cs;

        // excess over FS comes only from the glue potential
        double xjet[4] = {0.0, 0.0, 0.0, 0.0};
        if (eps > 0.0 && dj < 2.0 * cut.r_eps) {
            const J5 Aj = glue_potential_jet(*bs, cut, dj);
            bg.A[j] = Aj[0];
            const J5 Al = jchain_invert(Aj, lam);
            for (int i = 0; i < 4; ++i) xjet[i] = Al[i + 1];
        }
        const J5 M0 = fs_momentum_jets(bg.m0[j], bg.c0[j]);
        for (int i = 0; i < 4; ++i) {
            bg.mx[i][j] = xjet[i];
            bg.mj[i][j] = M0[i] + xjet[i];
        }
        double Lam[3], Sv;
        curvature_point(n, k, xjet, bg.m0[j], bg.c0[j], Lam, &Sv);
        for (int i = 0; i < 3; ++i) bg.Lamj[i][j] = Lam[i];
        bg.S[j] = Sv;
    }

    // lambda-derivative matrices by the inverse chain rule
    const Vec& l1 = bg.lamj[1];
    const Vec& l2 = bg.lamj[2];
    const Vec& l3 = bg.lamj[3];
    const Vec& l4 = bg.lamj[4];
    const Vec i1 = l1.cwiseInverse();
    const Vec i2 = i1.cwiseProduct(i1);
    bg.Dl[1] = dmul(i1, bg.D.d(1));
    bg.Dl[2] = dmul(i2, SpMat(bg.D.d(2) - dmul(l2, bg.Dl[1])));
    bg.Dl[3] = dmul(i2.cwiseProduct(i1),
                    SpMat(bg.D.d(3) - dmul(Vec(3.0 * l1.cwiseProduct(l2)), bg.Dl[2]) -
                          dmul(l3, bg.Dl[1])));
    bg.Dl[4] = dmul(i2.cwiseProduct(i2),
                    SpMat(bg.D.d(4) -
                          dmul(Vec(6.0 * l1.cwiseProduct(l1).cwiseProduct(l2)), bg.Dl[3]) -
                          dmul(Vec(3.0 * l2.cwiseProduct(l2) +
                                   4.0 * l1.cwiseProduct(l3)),
                               bg.Dl[2]) -
                          dmul(l4, bg.Dl[1])));

    // volume quadrature: measure pushes to Cnorm m^{k-1} (1-m)^{n-k} dm
    const double Cnorm = radial_measure(n, k).norm;
    const std::vector<double> w = bg.grid.int_weights();
    bg.l2w = Vec(N);
    for (int j = 0; j < N; ++j) {
        const double m = bg.mj[0][j];
        const double cm = bg.c0[j] - bg.mx[0][j];
        bg.l2w[j] = Cnorm * std::pow(m, k - 1) * std::pow(cm, n - k) *
                    bg.mj[1][j] * bg.lamj[1][j] * w[static_cast<size_t>(j)];
    }
    return bg;
}

RadialProfile make_flat_glued_profile(const BSMetric& bs, double eps,
                                      const std::vector<double>& s) {
    const GlueCutoffs cut = make_cutoffs(eps, bs.k);
    auto fjet = [&bs, cut](double sv, int order) {
        const double t = std::exp(sv);
        const double dd = std::sqrt(t);  // d = |z| on the flat model
        J5 f = jexp(jvar(sv));
        if (dd < 2.0 * cut.r_eps) {
            const J5 ds = {dd, dd / 2.0, dd / 4.0, dd / 8.0, dd / 16.0};
            f = jadd(f, jcompose(glue_potential_jet(bs, cut, dd), ds));
        }
        return f[static_cast<size_t>(order)];
    };
    return make_radial_profile(bs.k, s, fjet);
}

void fs_laplacian_jet(int n, int k, double d, const J5& h_d, double out[3]) {
    const J5 lam = lambda_jets(d);
    const J5 H = jchain_invert(h_d, lam);
    const double sn = std::sin(d), cs = std::cos(d);
    const J5 M0 = fs_momentum_jets(sn * sn, cs * cs);
    const J5 C0 = {cs * cs, -M0[1], -M0[2], -M0[3], -M0[4]};
    const J5 lap = jadd(jdiv(shiftj(H, 2), shiftj(M0, 1)),
                        jsub(jscale(jdiv(shiftj(H, 1), M0), k - 1),
                             jscale(jdiv(shiftj(H, 1), C0), n - k)));
    for (int i = 0; i < 3; ++i) out[i] = lap[i];
}

double fs_lichnerowicz_point(int n, int k, double d, const J5& h_d) {
    double g[3];
    fs_laplacian_jet(n, k, d, h_d, g);
    const double sn = std::sin(d), cs = std::cos(d);
    const double m0v = sn * sn, c0v = cs * cs;
    const double lap2 = g[2] / (m0v * c0v) + (k - 1) * g[1] / m0v - (n - k) * g[1] / c0v;
    return lap2 + (n + 1) * g[0];
}

}  // namespace xkg
