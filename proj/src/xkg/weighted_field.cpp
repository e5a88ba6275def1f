#include "xkg/weighted_field.hpp"

#include "xkg/model.hpp"
#include "xkg/radial_profile.hpp"

#include <algorithm>
#include <cmath>

namespace xkg {

namespace {

struct NormWork {
    std::vector<Vec> der;  // der[i] = i-th derivative at all nodes
    int n = 0;
};

NormWork prepare(const Vec& d, const DerivTable& D, const Vec& values,
                 const NormSpec& spec) {
    if (values.size() != d.size())
        throw GridMismatch("weighted_norm: field/grid size mismatch");
    if (spec.l < 0 || spec.l > 4)
        throw GridMismatch("weighted_norm: derivative order out of range");
    NormWork w;
    w.n = static_cast<int>(d.size());
    w.der.resize(spec.l + 1);
    w.der[0] = values;
    for (int i = 1; i <= spec.l; ++i) w.der[i] = D.apply(i, values);
    return w;
}

inline bool active(const std::vector<char>* mask, int j) {
    return !mask || (*mask)[static_cast<size_t>(j)];
}

// Contribution of node j: weighted derivative sups plus the Hölder quotient
// against nodes ahead of j within tau_j/10.
double node_term(const Vec& d, const NormWork& w, const NormSpec& spec,
                 const std::vector<char>* mask, int j) {
    const double tau = weight_tau(d[j], spec.eps);
    double best = 0.0;
    for (int i = 0; i <= spec.l; ++i)
        best = std::max(best, std::pow(tau, i - spec.delta) * std::fabs(w.der[i][j]));
    const Vec& top = w.der[spec.l];
    const double wt = std::pow(tau, spec.l + spec.alpha - spec.delta);
    const double reach = tau / 10.0;
    for (int jp = j + 2; jp < w.n; ++jp) {
        const double gap = d[jp] - d[j];
        if (gap > reach) break;
        if (!active(mask, jp)) continue;
        const double quot = std::fabs(top[jp] - top[j]) / std::pow(gap, spec.alpha);
        best = std::max(best, wt * quot);
    }
    return best;
}

}  // namespace

double weighted_norm_serial(const Vec& d, const DerivTable& D, const Vec& values,
                            const NormSpec& spec, const std::vector<char>* mask) {
    const NormWork w = prepare(d, D, values, spec);
    double norm = 0.0;
    for (int j = 0; j < w.n; ++j) {
        if (!active(mask, j)) continue;
        norm = std::max(norm, node_term(d, w, spec, mask, j));
    }
    return norm;
}

double weighted_norm(const Vec& d, const DerivTable& D, const Vec& values,
                     const NormSpec& spec, const std::vector<char>* mask) {
    const NormWork w = prepare(d, D, values, spec);
    double norm = 0.0;
#pragma omp parallel for schedule(static) reduction(max : norm)
    for (int j = 0; j < w.n; ++j) {
        if (!active(mask, j)) continue;
        norm = std::max(norm, node_term(d, w, spec, mask, j));
    }
    return norm;
}

double hbar_norm(double g0, double g1) { return std::fabs(g0) + std::fabs(g1); }

}  // namespace xkg
