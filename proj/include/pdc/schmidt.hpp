#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pdc/grid.hpp"
#include "pdc/kernels.hpp"

namespace pdc {

// Weighted Schmidt decomposition of a kernel: values(i,j) ~ sum_q
// coefficients(q) signal_modes(i,q) idler_modes(j,q) after normalization.
// Mode samples approximate the continuous functions (weight factors removed)
// and are orthonormal under the grid quadrature weights.
struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;   // descending, sum of squares = 1
  Eigen::MatrixXcd signal_modes;  // column q on row_grid; empty if values_only
  Eigen::MatrixXcd idler_modes;   // column q on col_grid
  double schmidt_number_K = 1.0;
  KernelLabel source_label = KernelLabel::F_L;
  int order_m = 0;
  Grid row_grid, col_grid;
};

struct DecomposeOptions {
  bool values_only = false;         // eigenvalue-only path, no mode vectors
  double coeff_truncation = 1e-12;  // drop lambda^2 below this, renormalize
};

// Weighted SVD of W_s^{1/2} values W_i^{1/2}. Throws on zero-norm or
// non-finite kernels. Each mode's global phase is fixed by making its
// largest-magnitude signal sample real positive (idler phase compensates).
SchmidtDecomposition decompose(const KernelMatrix& kernel,
                               const DecomposeOptions& opts = {});

// Eq. (17): K = 1 / sum lambda_q^4, Kahan-summed. Requires sum lambda^2 = 1
// within 1e-8 (throws, no silent renormalization).
double schmidt_number(const Eigen::VectorXd& coefficients);

// K of a kernel straight from Gram moments, sum sigma^2 = |B|_F^2 and
// sum sigma^4 = |B^H B|_F^2, with the same weighting as decompose() but no
// eigensolver. Agrees with schmidt_number(decompose(k).coefficients) up to
// the coefficient truncation (relative 1e-9).
double kernel_schmidt_number(const KernelMatrix& kernel);

// Aggregation over azimuthal orders. Per-m spectra enter only through their
// moments (norm and sum lambda^4); mode functions for a specific m come from
// decompose() on demand.
struct TransverseModeSummary {
  std::vector<double> nu;           // relative norms of T_m, m >= 0
  std::vector<double> sum_lambda4;  // normalized per-m sum lambda^4
  double K_kphi = 1.0;  // Eq. (17) on the joint set {nu_m lambda_ml}, +-m
  double K_k = 1.0;     // Eq. (17) on the m = 0 spectrum
  double K_phi = 1.0;   // quotient K_kphi / K_k (approximate factorization)
  int m_stop = 0;
  bool truncated_by_m_max = false;
};

// Joint coefficient set {nu_m lambda_ml} with m > 0 entries duplicated for
// -m; renormalized before Eq. (17). Throws on an empty scan.
TransverseModeSummary transverse_summary(const TransverseScan& scan);

}  // namespace pdc
