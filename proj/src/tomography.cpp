#include "tomoregion/tomography.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "tomoregion/errors.hpp"
#include "tomoregion/support/rng.hpp"

namespace tomoregion {
namespace {

void require_hermitian_operator(const ComplexMatrix& op, int d) {
  if (op.rows() != d || op.cols() != d) {
    throw DimensionMismatchError("design operator has wrong shape");
  }
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInputError("design operators must be Hermitian");
  }
}

}  // namespace

MeasurementDesign::MeasurementDesign(int d, std::vector<ComplexMatrix> ops)
    : dim(d), operators(std::move(ops)) {
  if (d < 2) {
    throw InvalidDimensionError("design dimension must be at least 2");
  }
  const int n = d * d - 1;
  const int m = static_cast<int>(operators.size());
  if (m < n) {
    throw IncompleteDesignError("design needs at least d^2 - 1 operators");
  }
  const GellMannBasis basis = build_basis(d);
  design_matrix.resize(m, n);
  offsets.resize(m);
  for (int k = 0; k < m; ++k) {
    require_hermitian_operator(operators[k], d);
    for (int i = 0; i < n; ++i) {
      design_matrix(k, i) = (operators[k] * basis.matrices[i]).trace().real();
    }
    offsets(k) = operators[k].trace().real() / d;
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(design_matrix);
  qr.setThreshold(1e-10);
  if (qr.rank() < n) {
    throw IncompleteDesignError("design matrix is rank-deficient (not tomographically complete)");
  }
}

OutcomeEllipsoid::OutcomeEllipsoid(RealVector center_, RealMatrix shape_)
    : center(std::move(center_)), shape(std::move(shape_)) {
  if (shape.rows() != shape.cols() || shape.rows() != center.size()) {
    throw DimensionMismatchError("outcome ellipsoid shape must be m x m matching the center");
  }
  const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidInputError("outcome ellipsoid shape must be symmetric");
  }
}

DensityOperator linear_inversion(const MeasurementDesign& design, const RealVector& y_hat) {
  if (y_hat.size() != design.size()) {
    throw DimensionMismatchError("observation vector length must match the design");
  }
  const RealVector rhs = y_hat - design.offsets;
  const RealVector w = design.design_matrix.colPivHouseholderQr().solve(rhs);
  const GellMannBasis basis = build_basis(design.dim);
  return DensityOperator(matrix_from_bloch(w, basis));
}

StateEllipsoid confidence_ellipsoid(const MeasurementDesign& design, const OutcomeEllipsoid& oe) {
  if (oe.center.size() != design.size()) {
    throw DimensionMismatchError("outcome ellipsoid does not match the design");
  }
  const int n = design.dim * design.dim - 1;
  const RealMatrix symmetric_shape = 0.5 * (oe.shape + oe.shape.transpose());
  const RealMatrix pulled_back =
      design.design_matrix.transpose() * symmetric_shape * design.design_matrix;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(pulled_back);
  const RealVector eigs = es.eigenvalues();
  const double max_eig = eigs.cwiseAbs().maxCoeff();
  RealVector radii(n);
  for (int i = 0; i < n; ++i) {
    if (!(eigs(i) > 1e-12 * std::max(1.0, max_eig))) {
      throw DegenerateEllipsoidError("pulled-back shape matrix is not positive definite");
    }
    radii(i) = 1.0 / std::sqrt(eigs(i));
  }
  return StateEllipsoid(linear_inversion(design, oe.center), std::move(radii),
                        es.eigenvectors());
}

SimulatedOutcome simulate_counts(const MeasurementDesign& design, const DensityOperator& rho0,
                                 long shots_per_setting, std::uint64_t seed) {
  if (shots_per_setting <= 0) {
    throw InvalidParameterError("shots per setting must be positive");
  }
  if (rho0.dim != design.dim) {
    throw DimensionMismatchError("state dimension does not match the design");
  }
  if (!is_psd(rho0)) {
    throw InvalidInputError("simulation state must be positive semidefinite");
  }
  const int m = design.size();
  for (int k = 0; k < m; ++k) {
    const auto [lo, hi] = min_max_eigenvalues(design.operators[k]);
    if (lo < -1e-10 || hi > 1.0 + 1e-10) {
      throw InvalidInputError("effect spectrum must lie within [0, 1]");
    }
  }
  SimulatedOutcome out;
  out.y_hat.resize(m);
  out.gaussian_cov = RealMatrix::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double p = std::clamp((design.operators[k] * rho0.matrix).trace().real(), 0.0, 1.0);
    rng::Stream stream(seed, static_cast<std::uint64_t>(k));
    long hits = 0;
    for (long t = 0; t < shots_per_setting; ++t) {
      if (stream.uniform(static_cast<std::uint64_t>(t)) < p) ++hits;
    }
    const double freq = static_cast<double>(hits) / static_cast<double>(shots_per_setting);
    out.y_hat(k) = freq;
    out.gaussian_cov(k, k) = freq * (1.0 - freq) / static_cast<double>(shots_per_setting);
  }
  return out;
}

}  // namespace tomoregion
