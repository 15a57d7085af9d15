#include "pdc/schmidt.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace pdc {

namespace {

double kahan_sum(const Eigen::VectorXd& v, int power) {
  double s = 0, comp = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double term = power == 2 ? v(i) * v(i) : v(i) * v(i) * v(i) * v(i);
    double y = term - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

// K on an already-normalized coefficient list, without the normalization
// gate (used internally before/after truncation).
double k_of(const Eigen::VectorXd& lam) {
  double s2 = kahan_sum(lam, 2);
  double s4 = kahan_sum(lam, 4);
  return (s2 * s2) / s4;
}

}  // namespace

double kernel_schmidt_number(const KernelMatrix& kernel) {
  const Eigen::MatrixXcd& V = kernel.values;
  if (!V.allFinite())
    throw std::runtime_error("kernel_schmidt_number: kernel not finite");
  Eigen::VectorXd sw_s = kernel.row_grid.weights.array().sqrt();
  Eigen::VectorXd sw_i = kernel.col_grid.weights.array().sqrt();
  Eigen::MatrixXcd B = sw_s.asDiagonal() * V * sw_i.asDiagonal();
  double s2 = B.squaredNorm();
  if (s2 == 0.0)
    throw std::runtime_error("kernel_schmidt_number: zero-norm kernel");

  // Gram matrix on the smaller side; only the lower triangle is formed.
  const Eigen::Index n = std::min(B.rows(), B.cols());
  Eigen::MatrixXcd G(n, n);
  G.setZero();
  if (B.cols() <= B.rows())
    G.selfadjointView<Eigen::Lower>().rankUpdate(B.adjoint());
  else
    G.selfadjointView<Eigen::Lower>().rankUpdate(B);
  double s4 = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    s4 += std::norm(G(j, j));
    for (Eigen::Index i = j + 1; i < n; ++i) s4 += 2.0 * std::norm(G(i, j));
  }
  return (s2 * s2) / s4;
}

SchmidtDecomposition decompose(const KernelMatrix& kernel,
                               const DecomposeOptions& opts) {
  const Eigen::MatrixXcd& V = kernel.values;
  if (!V.allFinite()) throw std::runtime_error("decompose: kernel not finite");
  const Eigen::Index n_s = V.rows(), n_i = V.cols();

  Eigen::VectorXd sw_s = kernel.row_grid.weights.array().sqrt();
  Eigen::VectorXd sw_i = kernel.col_grid.weights.array().sqrt();
  Eigen::MatrixXcd B = sw_s.asDiagonal() * V * sw_i.asDiagonal();
  double fro = B.norm();
  if (fro == 0.0) throw std::runtime_error("decompose: zero-norm kernel");

  SchmidtDecomposition d;
  d.source_label = kernel.label;
  d.order_m = kernel.order_m;
  d.row_grid = kernel.row_grid;
  d.col_grid = kernel.col_grid;

  Eigen::VectorXd sv;
  Eigen::MatrixXcd U, W;  // W = right singular vectors (columns)
  if (opts.values_only) {
    // Gram route: eigenvalues of the smaller of B^H B and B B^H.
    Eigen::MatrixXcd G = n_i <= n_s ? Eigen::MatrixXcd(B.adjoint() * B)
                                    : Eigen::MatrixXcd(B * B.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        G, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("decompose: eigensolver failed to converge");
    sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(B,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      std::ostringstream os;
      os << "decompose: SVD failed to converge (norm " << fro << ", size "
         << n_s << "x" << n_i << ")";
      throw std::runtime_error(os.str());
    }
    sv = svd.singularValues();
    U = svd.matrixU();
    W = svd.matrixV();
  }

  Eigen::VectorXd lam = sv / std::sqrt(kahan_sum(sv, 2));
  double K_full = k_of(lam);

  Eigen::Index rank = 1;
  for (Eigen::Index q = 0; q < lam.size(); ++q)
    if (lam(q) * lam(q) >= opts.coeff_truncation) rank = q + 1;
  lam.conservativeResize(rank);
  lam /= std::sqrt(kahan_sum(lam, 2));
  double K_cut = k_of(lam);
  if (std::abs(K_cut - K_full) > 1e-9 * K_full)
    throw std::logic_error("decompose: coefficient cut moved K beyond 1e-9");

  d.coefficients = lam;
  d.schmidt_number_K = schmidt_number(lam);

  if (!opts.values_only) {
    // Paper form kernel = sum_q s_q f_s f_i, so the idler factor is the
    // conjugated right singular vector.
    d.signal_modes.resize(n_s, rank);
    d.idler_modes.resize(n_i, rank);
    for (Eigen::Index q = 0; q < rank; ++q) {
      Eigen::VectorXcd fs = U.col(q).array() / sw_s.array();
      Eigen::VectorXcd fi = W.col(q).conjugate().array() / sw_i.array();
      Eigen::Index imax = 0;
      U.col(q).cwiseAbs().maxCoeff(&imax);
      std::complex<double> z = fs(imax);
      std::complex<double> ph = z / std::abs(z);
      d.signal_modes.col(q) = fs / ph;
      d.idler_modes.col(q) = fi * ph;
    }
  }
  return d;
}

double schmidt_number(const Eigen::VectorXd& coefficients) {
  if (coefficients.size() == 0)
    throw std::invalid_argument("schmidt_number: empty coefficient list");
  double s2 = kahan_sum(coefficients, 2);
  if (std::abs(s2 - 1.0) > 1e-8)
    throw std::invalid_argument(
        "schmidt_number: coefficients not normalized (sum lambda^2 != 1)");
  return 1.0 / kahan_sum(coefficients, 4);
}

TransverseModeSummary transverse_summary(const TransverseScan& scan) {
  if (scan.nu.empty())
    throw std::invalid_argument("transverse_summary: empty per-m set");

  TransverseModeSummary s;
  s.nu = scan.nu;
  s.sum_lambda4 = scan.sum_lambda4;
  s.m_stop = scan.m_stop;
  s.truncated_by_m_max = scan.truncated_by_m_max;

  // Joint normalization: sum over the set of (nu_m lambda_ml)^2 with the
  // +-m duplication, each per-m spectrum already summing to 1.
  double S2 = 0, S4 = 0;
  for (size_t m = 0; m < scan.nu.size(); ++m) {
    double cm = m == 0 ? 1.0 : 2.0;
    double nu2 = scan.nu[m] * scan.nu[m];
    S2 += cm * nu2;
    S4 += cm * nu2 * nu2 * scan.sum_lambda4[m];
  }
  s.K_kphi = (S2 * S2) / S4;
  s.K_k = 1.0 / scan.sum_lambda4[0];
  s.K_phi = s.K_kphi / s.K_k;
  return s;
}

}  // namespace pdc
