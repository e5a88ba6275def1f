#include "xkg/moment.hpp"

#include <cmath>
#include <random>

#include "xkg/quadrature.hpp"

namespace xkg {

double Hamiltonian::value(const CVec& x) const {
    if (A.size() == 0) return c;
    const std::complex<double> q = x.dot(A * x);  // x* A x
    return q.real() / x.squaredNorm() + c;
}

namespace {

// p on the simplex has m+1 barycentric entries; the integrator exposes all
// of them (last = 1 - sum of the first m).
void simplex_recurse(int level, int m, int q, const std::vector<double>& gx,
                     const std::vector<double>& gw, Eigen::VectorXd& p,
                     double rem, double wacc,
                     const std::function<double(const Eigen::VectorXd&)>& f,
                     double& acc) {
    if (level == m) {
        p[m] = rem;
        acc += wacc * f(p);
        return;
    }
    for (int i = 0; i < q; ++i) {
        const double t = 0.5 * (gx[i] + 1.0);
        p[level] = rem * t;
        simplex_recurse(level + 1, m, q, gx, gw, p, rem - p[level],
                        wacc * gw[i] * 0.5 * rem, f, acc);
    }
}

}  // namespace

double simplex_integrate(int n, int q,
                         const std::function<double(const Eigen::VectorXd&)>& f) {
    if (n == 0) {
        Eigen::VectorXd p(1);
        p[0] = 1.0;
        return f(p);
    }
    const QuadRule rule = gauss_legendre(q, -1.0, 1.0);
    const std::vector<double>&gx = rule.x, &gw = rule.w;
    Eigen::VectorXd p(n + 1);
    double acc = 0.0;
    simplex_recurse(0, n, q, gx, gw, p, 1.0, 1.0, f, acc);
    return acc;
}

namespace {

// value of a diagonal-part Hamiltonian on barycentric coordinates indexed by
// the coordinate subset `coords` (phases average out for diagonal elements)
double diag_value(const Hamiltonian& h, const std::vector<int>& coords,
                  const Eigen::VectorXd& p) {
    double v = h.c;
    if (h.A.size() > 0)
        for (size_t i = 0; i < coords.size(); ++i)
            v += h.A(coords[i], coords[i]).real() * p[static_cast<int>(i)];
    return v;
}

std::vector<int> all_coords(int n) {
    std::vector<int> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = i;
    return c;
}

}  // namespace

HamiltonianSpace make_hamiltonian_space(const ModelSpace& space, int quad_order) {
    HamiltonianSpace hs;
    hs.space = space;
    hs.quad_order = quad_order;
    const int n = space.n;
    Hamiltonian one;
    one.c = 1.0;
    hs.basis.push_back(one);
    if (space.kind == ModelKind::Flat) {
        hs.gram = Eigen::MatrixXd::Ones(1, 1);
        return hs;
    }
    for (int i = 0; i < n; ++i) {
        Hamiltonian mu;
        mu.A = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        mu.A(i, i) = 1.0;
        mu.c = -1.0 / (n + 1);
        hs.basis.push_back(mu);
    }
    const int nb = static_cast<int>(hs.basis.size());
    const auto coords = all_coords(n);
    hs.gram.resize(nb, nb);
    const double mass = vol_pn(n) * tgamma(n + 1.0);  // pi^n; simplex vol is 1/n!
    for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) {
            const double v = mass * simplex_integrate(n, quad_order, [&](const Eigen::VectorXd& p) {
                return diag_value(hs.basis[a], coords, p) *
                       diag_value(hs.basis[b], coords, p);
            });
            hs.gram(a, b) = hs.gram(b, a) = v;
        }
    return hs;
}

double hamiltonian_mean(const HamiltonianSpace& hs, const Hamiltonian& h) {
    if (hs.space.kind == ModelKind::Flat) return h.c;
    const int n = hs.space.n;
    const auto coords = all_coords(n);
    return vol_pn(n) * tgamma(n + 1.0) *
           simplex_integrate(n, hs.quad_order, [&](const Eigen::VectorXd& p) {
               return diag_value(h, coords, p);
           });
}

Hamiltonian normalized_moment(const ModelSpace& space, const Eigen::VectorXd& xi) {
    if (space.kind == ModelKind::Flat) {
        if (xi.size() != 0 && xi.cwiseAbs().maxCoeff() != 0.0)
            throw NotHamiltonian("normalized_moment: flat model admits only constants");
        return Hamiltonian{};
    }
    if (xi.size() != space.n + 1)
        throw NotHamiltonian("normalized_moment: generator dimension");
    Hamiltonian h;
    h.A = Eigen::MatrixXcd::Zero(space.n + 1, space.n + 1);
    for (int i = 0; i <= space.n; ++i) h.A(i, i) = xi[i];
    h.c = -xi.sum() / (space.n + 1);  // E[p_i] = 1/(n+1)
    return h;
}

MomentResult submanifold_moment(const HamiltonianSpace& hs,
                                const std::vector<int>& normal) {
    MomentResult res;
    if (hs.space.kind == ModelKind::Flat) {
        // only constants: mu_S(S) is the (unit-normalized) volume component
        res.vector = Eigen::VectorXd::Ones(1);
        res.integrals = Eigen::VectorXd::Ones(1);
        res.vol_S = 1.0;
        res.const_coeff = 1.0;
        return res;
    }
    const int n = hs.space.n, k = static_cast<int>(normal.size());
    if (k != hs.space.k) throw GridMismatch("submanifold_moment: codimension");
    std::vector<int> comp;
    for (int i = 0; i <= n; ++i)
        if (std::find(normal.begin(), normal.end(), i) == normal.end())
            comp.push_back(i);
    const int m = n - k;  // dim of S
    const double mass = vol_pn(m) * tgamma(m + 1.0);
    const int nb = static_cast<int>(hs.basis.size());

    auto integrals_at = [&](int q) {
        Eigen::VectorXd b(nb);
        for (int j = 0; j < nb; ++j)
            b[j] = mass * simplex_integrate(m, q, [&](const Eigen::VectorXd& p) {
                return diag_value(hs.basis[j], comp, p);
            });
        return b;
    };
    res.integrals = integrals_at(hs.quad_order);
    const Eigen::VectorXd b2 = integrals_at(2 * hs.quad_order);
    res.vector = hs.gram.ldlt().solve(res.integrals);
    const Eigen::VectorXd v2 = hs.gram.ldlt().solve(b2);
    if ((res.vector - v2).cwiseAbs().maxCoeff() > 1e-8)
        throw QuadratureNotConverged("submanifold_moment: doubling the order moved coefficients");
    res.vol_S = vol_pn(m);

    // decomposition in {1, mu_Delta} (mu_Delta = sum of normal p_i - k/(n+1))
    Hamiltonian hS;
    hS.A = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    hS.c = 0.0;
    for (int j = 0; j < nb; ++j) {
        if (hs.basis[j].A.size() > 0) hS.A += res.vector[j] * hs.basis[j].A;
        hS.c += res.vector[j] * hs.basis[j].c;
    }
    Hamiltonian muD;
    muD.A = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int i : normal) muD.A(i, i) = 1.0;
    muD.c = -double(k) / (n + 1);
    const auto coords = all_coords(n);
    const double massM = vol_pn(n) * tgamma(n + 1.0);
    auto pair = [&](const Hamiltonian& a, const Hamiltonian& c2) {
        return massM * simplex_integrate(n, hs.quad_order, [&](const Eigen::VectorXd& p) {
            return diag_value(a, coords, p) * diag_value(c2, coords, p);
        });
    };
    const double V = vol_pn(n);
    res.const_coeff = hamiltonian_mean(hs, hS) / V;
    res.mu_delta_coeff = pair(hS, muD) / pair(muD, muD);

    // off-diagonal probes Re(conj(x_i) x_j)/|x|^2 integrate to zero on S:
    // phases by 8-point trapezoid (exact), magnitudes by the simplex rule
    for (size_t a = 0; a + 1 < comp.size(); ++a) {
        double ph = 0.0;
        for (int t = 0; t < 8; ++t) ph += std::cos(2.0 * M_PI * t / 8.0) / 8.0;
        const double val =
            mass * ph * simplex_integrate(m, hs.quad_order, [&](const Eigen::VectorXd& p) {
                return std::sqrt(p[static_cast<int>(a)] * p[static_cast<int>(a) + 1]);
            });
        res.offdiag_sup = std::max(res.offdiag_sup, std::fabs(val));
    }
    return res;
}

double tangency_check(const ModelSpace& space, const std::vector<int>& normal,
                      const Hamiltonian& h, int samples, unsigned seed) {
    if (space.kind == ModelKind::Flat) return 0.0;
    std::mt19937 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    double sup = 0.0;
    for (int s = 0; s < samples; ++s) {
        CVec x = CVec::Zero(space.n + 1);
        for (int i = 0; i <= space.n; ++i)
            if (std::find(normal.begin(), normal.end(), i) == normal.end())
                x[i] = std::complex<double>(N(rng), N(rng));
        x /= x.norm();
        if (h.A.size() == 0) continue;  // constant: zero field
        const CVec w = h.A * x;
        double nn = 0.0;
        for (int i : normal) nn += std::norm(w[i]);
        sup = std::max(sup, std::sqrt(nn));
    }
    return sup;
}

double equivariance_defect(const HamiltonianSpace& hs, const std::vector<int>& perm) {
    const int n = hs.space.n, k = hs.space.k;
    if (static_cast<int>(perm.size()) != n + 1)
        throw GridMismatch("equivariance_defect: permutation size");
    std::vector<int> normal0, normal1;
    for (int i = 0; i < k; ++i) {
        normal0.push_back(i);
        normal1.push_back(perm[i]);
    }
    const MomentResult m0 = submanifold_moment(hs, normal0);
    const MomentResult m1 = submanifold_moment(hs, normal1);
    // compare as functions: assemble both A-matrices and push m0 through sigma
    // gauge-fix: a multiple of the identity is the constant function on P^n,
    // so move the trace part of A into c before comparing
    auto assemble = [&](const MomentResult& m) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        double c = 0.0;
        for (size_t j = 0; j < hs.basis.size(); ++j) {
            if (hs.basis[j].A.size() > 0) A += m.vector[j] * hs.basis[j].A;
            c += m.vector[j] * hs.basis[j].c;
        }
        const double t = A.trace().real() / (n + 1);
        A -= t * Eigen::MatrixXcd::Identity(n + 1, n + 1);
        return std::make_pair(A, c + t);
    };
    auto [A0, c0] = assemble(m0);
    auto [A1, c1] = assemble(m1);
    Eigen::MatrixXcd A0p = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) A0p(perm[i], perm[j]) = A0(i, j);
    double defect = (A1 - A0p).cwiseAbs().maxCoeff();
    defect = std::max(defect, std::fabs(c1 - c0));
    return defect;
}

}  // namespace xkg
