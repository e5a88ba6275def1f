#pragma once
// Finite-difference machinery on arbitrary monotone node sets.
//
// Weights come from Fornberg's algorithm, so the same code path serves the
// log-radial grids, the sinh-mapped blowup grids, and one-sided boundary
// closures. Interior stencils are 7 nodes wide, which gives at least
// 4th-order accuracy for derivatives up to order 4 on smoothly graded grids.

#include <vector>
#include <Eigen/Sparse>

namespace xkg {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Weights w such that sum_j w[j] f(x[j]) ~ f^(m)(x0).
std::vector<double> fornberg_weights(double x0, const std::vector<double>& x, int m);

// How a derivative table closes the two ends of a 1-D grid.
enum class EdgeRule {
  OneSided,      // shift the stencil inward
  EvenReflect,   // ghost nodes mirrored about `axis`, same values (even fn)
  OddReflect,    // ghost nodes mirrored about `axis`, negated values
  ZeroGhost,     // ghost nodes mirrored about `axis`, value 0 (decay clamp)
};

struct EdgeClosure {
  EdgeRule rule = EdgeRule::OneSided;
  double axis = 0.0;  // reflection axis in grid coordinate
};

// Sparse differentiation matrices D1..D4 in the grid coordinate.
class DerivTable {
public:
  DerivTable() = default;
  DerivTable(const std::vector<double>& nodes, EdgeClosure left, EdgeClosure right,
             int width = 7);

  const SpMat& d(int order) const { return d_[order - 1]; }
  int size() const { return n_; }

  // Apply derivative of given order to node values.
  Vec apply(int order, const Vec& f) const { return d_[order - 1] * f; }

private:
  int n_ = 0;
  SpMat d_[4];
};

}  // namespace xkg
