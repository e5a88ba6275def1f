#pragma once
// 4-jet calculus (value + four derivatives in one variable) and the
// RadialProfile type: a U(k)-invariant Kähler potential on a log-radial
// grid with precomputed jets. Jets are computed once at construction;
// operations never re-differentiate raw samples.

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "xkg/stencil.hpp"

namespace xkg {

// value + derivatives d/dx .. d^4/dx^4
using J5 = std::array<double, 5>;

J5 jconst(double c);
J5 jvar(double x);  // the coordinate itself
J5 jadd(const J5& a, const J5& b);
J5 jsub(const J5& a, const J5& b);
J5 jscale(const J5& a, double c);
J5 jmul(const J5& a, const J5& b);                  // Leibniz
J5 jdiv(const J5& a, const J5& b);
J5 jcompose(const J5& outer, const J5& inner);      // outer derivs wrt inner value
J5 jlog(const J5& a);
J5 jexp(const J5& a);
J5 jpow(const J5& a, double p);

// Derivatives of H wrt y given jets of h(x) = H(y(x)) and of y(x)
// (inverse chain rule; y must be strictly monotone: y' != 0).
J5 jchain_invert(const J5& h_x, const J5& y_x);

// Exceptions shared across the numerical modules.
struct PositivityViolation : std::runtime_error {
  explicit PositivityViolation(const std::string& m) : std::runtime_error(m) {}
};
struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct GridTooCoarse : std::runtime_error {
  explicit GridTooCoarse(const std::string& m) : std::runtime_error(m) {}
};
struct ToleranceNotMet : std::runtime_error {
  explicit ToleranceNotMet(const std::string& m) : std::runtime_error(m) {}
};
struct InsufficientSweep : std::runtime_error {
  explicit InsufficientSweep(const std::string& m) : std::runtime_error(m) {}
};

// U(k)-invariant potential f on C^k (or a punctured/blowup chart), sampled
// in s = log t, t = |w|^2, with s-jets of f to order 4.
struct RadialProfile {
  int k = 2;
  std::vector<double> s;      // strictly increasing nodes
  Vec jet[5];                 // jet[i] = d^i f / ds^i at nodes
  DerivTable D;               // differentiation on the s grid

  int size() const { return static_cast<int>(s.size()); }
  void check_positivity() const;  // f_s > 0 and f_ss > 0 (metric positivity)
};

// Jets supplied analytically: fjet(s, order) for order 0..4.
RadialProfile make_radial_profile(int k, const std::vector<double>& s,
                                  const std::function<double(double, int)>& fjet,
                                  EdgeClosure left = {EdgeRule::OneSided, 0.0},
                                  EdgeClosure right = {EdgeRule::OneSided, 0.0});

// Jets from finite differences of sampled values.
RadialProfile make_radial_profile(int k, const std::vector<double>& s, const Vec& f,
                                  EdgeClosure left = {EdgeRule::OneSided, 0.0},
                                  EdgeClosure right = {EdgeRule::OneSided, 0.0});

}  // namespace xkg
