// Generalized Bloch (Gell-Mann) basis, density operators, Bloch-coordinate
// conversions, and Hermitian eigenvalue utilities used by every other module.
//
// Conventions fixed here and relied on everywhere else:
//  * The basis sigma_1..sigma_{d^2-1} consists of traceless Hermitian matrices
//    normalized to Tr(sigma_i sigma_j) = 2 delta_ij, ordered as the real
//    off-diagonal (X) block for pairs (j,k), j<k in lexicographic order, then
//    the imaginary (Y) block in the same pair order, then the diagonal block
//    l = 1..d-1. For d = 2 this is exactly (sigma_x, sigma_y, sigma_z).
//  * Bloch coordinates w of a unit-trace Hermitian rho satisfy
//    rho = I/d + sum_i w_i sigma_i with w_i = Tr(rho sigma_i)/2.
//  * A matrix counts as positive semidefinite when
//    mineig >= -1e-10 * (1 + max|eigenvalue|).
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tomoregion/errors.hpp"

namespace tomoregion {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Ordered basis of the traceless Hermitian matrices for one dimension.
struct GellMannBasis {
  int dim = 0;
  std::vector<ComplexMatrix> matrices;  // d^2 - 1 entries

  // Number of X-type generators; the Y block ends at 2*x_block_size().
  int x_block_size() const { return dim * (dim - 1) / 2; }
  int size() const { return dim * dim - 1; }
};

// Hermitian unit-trace matrix. Positivity is never stored; it is derived from
// the eigenvalues on demand.
struct DensityOperator {
  int dim = 0;
  ComplexMatrix matrix;

  DensityOperator() = default;
  // Validates squareness, Hermiticity (1e-12) and unit trace (1e-12).
  explicit DensityOperator(ComplexMatrix m);
};

struct BlochVector {
  int dim = 0;
  RealVector coords;  // length d^2 - 1

  BlochVector() = default;
  BlochVector(int d, RealVector w);
};

enum class NormConvention { kUnit, kSqrtD };

struct PureStateVector {
  int dim = 0;
  ComplexVector amplitudes;
  NormConvention norm_convention = NormConvention::kUnit;

  PureStateVector() = default;
  // Validates ||psi||^2 = 1 or d per the stored convention (tolerance 1e-9).
  PureStateVector(ComplexVector psi, NormConvention convention);
};

// Builds the ordered generalized Bloch basis for dimension d >= 2.
GellMannBasis build_basis(int d);

// w_i = Tr(rho sigma_i) / 2.
BlochVector to_bloch(const DensityOperator& rho, const GellMannBasis& basis);

// rho = I/d + sum_i w_i sigma_i. Hermitian and unit trace; PSD not guaranteed.
DensityOperator from_bloch(const BlochVector& w, const GellMannBasis& basis);

// v_i = <psi| sigma_i |psi> under the stored norm convention (no rescaling).
RealVector pure_bloch_coords(const PureStateVector& psi, const GellMannBasis& basis);

// Smallest eigenvalue of a Hermitian matrix.
double mineig(const DensityOperator& rho);

// max(0, -mineig): a certified lower bound on the Frobenius distance to the
// PSD cone (clipping one eigenvalue to zero already moves at least this far).
double psd_distance_lower_bound(const DensityOperator& rho);

// --- shared low-level helpers -----------------------------------------------

// (smallest, largest) eigenvalue of a Hermitian matrix; uses the direct
// closed-form solver for d <= 3.
std::pair<double, double> min_max_eigenvalues(const ComplexMatrix& hermitian);

// PSD tolerance policy: mineig >= -1e-10 * (1 + max|eig|).
bool passes_psd_policy(double min_eig, double max_abs_eig);
bool is_psd(const DensityOperator& rho);

// Dense reconstruction without constructing a BlochVector, for hot loops:
// rho = I/d + sum_i w_i sigma_i.
ComplexMatrix matrix_from_bloch(const RealVector& w, const GellMannBasis& basis);

}  // namespace tomoregion
