#pragma once
// Normalized Hamiltonians on the projective model, the L^2 Gram matrix,
// the submanifold moment mu_S(S), tangency and equivariance checks.
//
// The Fubini-Study volume pushes forward to pi^n times the uniform measure
// on the simplex {p_i = |x_i|^2/|x|^2}; integrals of torus-invariant
// Hamiltonians reduce to polynomial integrals over the simplex, evaluated
// exactly by iterated Gauss-Legendre rules. Phases enter only through
// off-diagonal Hamiltonians and are integrated by trapezoid rules (exact
// for the circle).

#include <Eigen/Dense>

#include "xkg/model.hpp"

namespace xkg {

struct NotHamiltonian : std::runtime_error {
    explicit NotHamiltonian(const std::string& m) : std::runtime_error(m) {}
};
struct QuadratureNotConverged : std::runtime_error {
    explicit QuadratureNotConverged(const std::string& m) : std::runtime_error(m) {}
};

// h(x) = x* A x / |x|^2 + c with A Hermitian
struct Hamiltonian {
    Eigen::MatrixXcd A;
    double c = 0.0;
    double value(const CVec& x) const;
};

struct HamiltonianSpace {
    ModelSpace space;
    std::vector<Hamiltonian> basis;  // {1, mu_0, .., mu_{n-1}}; flat: {1}
    Eigen::MatrixXd gram;            // L^2 Gram under omega^n/n!
    int quad_order = 8;
};

// Iterated-Gauss integral of f(p) over the n-simplex (sum p_i <= 1, p_i >= 0),
// uniform measure (volume 1/n!).
double simplex_integrate(int n, int q,
                         const std::function<double(const Eigen::VectorXd&)>& f);

HamiltonianSpace make_hamiltonian_space(const ModelSpace& space, int quad_order = 8);

// mean of h under omega^n/n! (total mass Vol(P^n))
double hamiltonian_mean(const HamiltonianSpace& hs, const Hamiltonian& h);

// Hamiltonian of the diagonal torus generator xi (weights), normalized to
// zero mean. NotHamiltonian if xi has the wrong dimension.
Hamiltonian normalized_moment(const ModelSpace& space, const Eigen::VectorXd& xi);

struct MomentResult {
    Eigen::VectorXd vector;       // coefficients in the basis (Gram solve)
    Eigen::VectorXd integrals;    // int_S g_j for each basis element
    double vol_S = 0.0;
    double const_coeff = 0.0;     // decomposition in {1, mu_Delta}
    double mu_delta_coeff = 0.0;  // (radial part; exact for linear S)
    double offdiag_sup = 0.0;     // integrals against off-diagonal probes
};

// S cut out by the homogeneous coordinates in `normal`; the default model
// submanifold is normal = {0..k-1}. Doubling the quadrature order must move
// the coefficients by < 1e-8 (QuadratureNotConverged otherwise).
MomentResult submanifold_moment(const HamiltonianSpace& hs,
                                const std::vector<int>& normal);

// sup over sampled points of S of the normal component of the h-gradient.
double tangency_check(const ModelSpace& space, const std::vector<int>& normal,
                      const Hamiltonian& h, int samples, unsigned seed);

// max coefficient difference between mu_S(sigma . S) and sigma . mu_S(S)
// for a coordinate permutation sigma (a torus-normalizing isometry).
double equivariance_defect(const HamiltonianSpace& hs,
                           const std::vector<int>& perm);

}  // namespace xkg
