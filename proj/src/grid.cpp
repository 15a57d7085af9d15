#include "pdc/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "pdc/constants.hpp"

namespace pdc {

// Legendre P_n(x) and derivative by the three-term recurrence.
static void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

Grid gauss_legendre(double a, double b, int n, GridKind kind) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: need b > a");

  Eigen::VectorXd x(n), w(n);
  if (n == 1) {
    x(0) = 0.0;
    w(0) = 2.0;
  } else {
    // Nodes are symmetric; solve the upper half by Newton iteration from the
    // Chebyshev-like initial guess and mirror.
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double xi = std::cos(pi * (i + 0.75) / (n + 0.5));
      double p, dp;
      for (int it = 0; it < 100; ++it) {
        legendre(n, xi, p, dp);
        double dx = -p / dp;
        xi += dx;
        if (std::abs(dx) < 1e-15) break;
      }
      legendre(n, xi, p, dp);
      double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
      x(n - 1 - i) = xi;  // initial guesses descend from +1
      w(n - 1 - i) = wi;
      x(i) = -xi;
      w(i) = wi;
    }
  }

  Grid g;
  g.points = (0.5 * (b - a) * x.array() + 0.5 * (a + b)).matrix();
  g.weights = 0.5 * (b - a) * w;
  g.a = a;
  g.b = b;
  g.kind = kind;
  return g;
}

Grid trapezoid(double a, double b, int n, GridKind kind) {
  if (n < 2) throw std::invalid_argument("trapezoid: n must be >= 2");
  if (!(b > a)) throw std::invalid_argument("trapezoid: need b > a");
  double h = (b - a) / (n - 1);
  Grid g;
  g.points = Eigen::VectorXd::LinSpaced(n, a, b);
  g.weights = Eigen::VectorXd::Constant(n, h);
  g.weights(0) = 0.5 * h;
  g.weights(n - 1) = 0.5 * h;
  g.a = a;
  g.b = b;
  g.kind = kind;
  return g;
}

void validate(const Grid& g) {
  if (g.points.size() == 0 || g.points.size() != g.weights.size())
    throw std::invalid_argument("Grid: empty or mismatched points/weights");
  for (Eigen::Index i = 1; i < g.points.size(); ++i)
    if (!(g.points(i) > g.points(i - 1)))
      throw std::invalid_argument("Grid: points not strictly increasing");
  if (!(g.weights.array() > 0).all())
    throw std::invalid_argument("Grid: weights not all positive");
  double interval = g.b - g.a;
  if (!(interval > 0))
    throw std::invalid_argument("Grid: empty covered interval");
  if (std::abs(g.weights.sum() - interval) > 1e-10 * interval)
    throw std::invalid_argument("Grid: weight sum != covered interval length");
}

}  // namespace pdc
