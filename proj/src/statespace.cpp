#include "tomoregion/statespace.hpp"

#include <cmath>
#include <utility>

namespace tomoregion {

namespace {

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidInputError(std::string(what) + " must be a nonempty square matrix");
  }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  const double scale = 1.0 + max_abs_entry(m);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInputError(std::string(what) + " is not Hermitian within 1e-12");
  }
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix m) {
  require_square(m, "density operator");
  require_hermitian(m, "density operator");
  const double scale = 1.0 + max_abs_entry(m);
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > 1e-12 * scale) {
    throw InvalidInputError("density operator trace differs from 1 beyond 1e-12");
  }
  dim = static_cast<int>(m.rows());
  matrix = std::move(m);
}

BlochVector::BlochVector(int d, RealVector w) {
  if (d < 2) throw InvalidDimensionError("Bloch vector needs dimension >= 2");
  if (w.size() != static_cast<Eigen::Index>(d) * d - 1) {
    throw DimensionMismatchError("Bloch vector length must be d^2 - 1");
  }
  dim = d;
  coords = std::move(w);
}

PureStateVector::PureStateVector(ComplexVector psi, NormConvention convention) {
  if (psi.size() < 2) throw InvalidDimensionError("pure state needs dimension >= 2");
  const double norm_sq = psi.squaredNorm();
  const double expected = convention == NormConvention::kUnit
                              ? 1.0
                              : static_cast<double>(psi.size());
  if (std::abs(norm_sq - expected) > 1e-9 * expected) {
    throw InvalidInputError("pure state norm does not match its stored convention");
  }
  dim = static_cast<int>(psi.size());
  amplitudes = std::move(psi);
  norm_convention = convention;
}

GellMannBasis build_basis(int d) {
  if (d < 2) throw InvalidDimensionError("basis requires d >= 2");

  GellMannBasis basis;
  basis.dim = d;
  basis.matrices.reserve(static_cast<std::size_t>(d) * d - 1);

  // X block: |j><k| + |k><j| for j < k, lexicographic in (j, k).
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = Complex(1.0, 0.0);
      m(k, j) = Complex(1.0, 0.0);
      basis.matrices.push_back(std::move(m));
    }
  }
  // Y block: -i(|j><k| - |k><j|), same pair order.
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = Complex(0.0, -1.0);
      m(k, j) = Complex(0.0, 1.0);
      basis.matrices.push_back(std::move(m));
    }
  }
  // Diagonal block: sqrt(2/(l(l+1))) (sum_{j<=l} |j><j| - l |l+1><l+1|).
  for (int l = 1; l <= d - 1; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -norm * static_cast<double>(l);
    basis.matrices.push_back(std::move(m));
  }
  return basis;
}

BlochVector to_bloch(const DensityOperator& rho, const GellMannBasis& basis) {
  if (rho.dim != basis.dim) {
    throw DimensionMismatchError("state and basis dimensions differ");
  }
  RealVector w(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    // Tr(rho sigma_i) is real for Hermitian rho and sigma_i.
    w(i) = 0.5 * (rho.matrix * basis.matrices[static_cast<std::size_t>(i)]).trace().real();
  }
  return BlochVector(basis.dim, std::move(w));
}

ComplexMatrix matrix_from_bloch(const RealVector& w, const GellMannBasis& basis) {
  const int d = basis.dim;
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  for (int i = 0; i < basis.size(); ++i) {
    m.noalias() += w(i) * basis.matrices[static_cast<std::size_t>(i)];
  }
  return m;
}

DensityOperator from_bloch(const BlochVector& w, const GellMannBasis& basis) {
  if (w.dim != basis.dim) {
    throw DimensionMismatchError("Bloch vector and basis dimensions differ");
  }
  if (w.coords.size() != basis.size()) {
    throw DimensionMismatchError("Bloch vector length must be d^2 - 1");
  }
  return DensityOperator(matrix_from_bloch(w.coords, basis));
}

RealVector pure_bloch_coords(const PureStateVector& psi, const GellMannBasis& basis) {
  if (psi.dim != basis.dim) {
    throw DimensionMismatchError("pure state and basis dimensions differ");
  }
  RealVector v(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    v(i) = (psi.amplitudes.adjoint() * basis.matrices[static_cast<std::size_t>(i)] *
            psi.amplitudes)(0, 0)
               .real();
  }
  return v;
}

std::pair<double, double> min_max_eigenvalues(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  if (hermitian.rows() <= 3) {
    solver.computeDirect(hermitian, Eigen::EigenvaluesOnly);
  } else {
    solver.compute(hermitian, Eigen::EigenvaluesOnly);
  }
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double mineig(const DensityOperator& rho) {
  return min_max_eigenvalues(rho.matrix).first;
}

double psd_distance_lower_bound(const DensityOperator& rho) {
  return std::max(0.0, -mineig(rho));
}

bool passes_psd_policy(double min_eig, double max_abs_eig) {
  return min_eig >= -1e-10 * (1.0 + max_abs_eig);
}

bool is_psd(const DensityOperator& rho) {
  const auto [lo, hi] = min_max_eigenvalues(rho.matrix);
  return passes_psd_policy(lo, std::max(std::abs(lo), std::abs(hi)));
}

}  // namespace tomoregion
