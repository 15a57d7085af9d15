#pragma once

#include <Eigen/Dense>

namespace pdc {

enum class GridKind { radial, azimuthal, spectral };

// Sampled 1D axis with quadrature weights. Invariants: strictly increasing
// points, positive weights, sum(weights) = covered interval length (b - a)
// within 1e-10 relative.
struct Grid {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  double a = 0.0, b = 0.0;  // covered interval
  GridKind kind = GridKind::radial;

  Eigen::Index size() const { return points.size(); }
};

// Gauss-Legendre nodes and weights on [a, b]. Integrates polynomials up to
// degree 2n-1 exactly.
Grid gauss_legendre(double a, double b, int n, GridKind kind);

// Closed uniform trapezoid rule on [a, b] (endpoint weights h/2).
Grid trapezoid(double a, double b, int n, GridKind kind);

// Throws std::invalid_argument if a Grid invariant is violated.
void validate(const Grid& g);

}  // namespace pdc
