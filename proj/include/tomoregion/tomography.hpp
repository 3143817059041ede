// Measurement designs, linear-inversion state estimation, simulated two-outcome
// measurement data, and the pullback of an outcome-space confidence ellipsoid
// to a state-space ellipsoid.
//
// A design is a list of Hermitian operators E_1..E_m with expected outcomes
// y_k = Tr(E_k rho). In Bloch coordinates y = Q w + offsets with
// Q_ki = Tr(E_k sigma_i) and offsets_k = Tr(E_k)/d; tomographic completeness
// means rank(Q) = d^2 - 1.
#pragma once

#include <cstdint>
#include <vector>

#include "tomoregion/ellipsoid.hpp"
#include "tomoregion/statespace.hpp"

namespace tomoregion {

struct MeasurementDesign {
  int dim = 0;
  std::vector<ComplexMatrix> operators;  // m Hermitian d x d matrices
  RealMatrix design_matrix;              // m x (d^2-1), Q_ki = Tr(E_k sigma_i)
  RealVector offsets;                    // Tr(E_k)/d

  MeasurementDesign() = default;
  // Validates Hermiticity, m >= d^2-1, and rank(Q) = d^2-1 (completeness).
  MeasurementDesign(int d, std::vector<ComplexMatrix> ops);

  int size() const { return static_cast<int>(operators.size()); }
};

struct OutcomeEllipsoid {
  RealVector center;  // length m
  RealMatrix shape;   // m x m symmetric PSD matrix B: {y : (y-c)^T B (y-c) <= 1}

  OutcomeEllipsoid() = default;
  OutcomeEllipsoid(RealVector center_, RealMatrix shape_);  // validates symmetry
};

// Least-squares inversion in Bloch coordinates: w = (Q^T Q)^{-1} Q^T (y - offsets).
// The result is Hermitian with unit trace but not necessarily PSD.
DensityOperator linear_inversion(const MeasurementDesign& design, const RealVector& y_hat);

// Pulls the outcome-space ellipsoid back through the least-squares map: with
// B' = Q^T B Q = O D O^T, the state-space region has orientation O and radii
// D_ii^{-1/2} around the linear-inversion center. For m = d^2-1 a state lies in
// the output iff its outcome vector lies in the input ellipsoid.
StateEllipsoid confidence_ellipsoid(const MeasurementDesign& design, const OutcomeEllipsoid& oe);

struct SimulatedOutcome {
  RealVector y_hat;         // empirical frequency per setting
  RealMatrix gaussian_cov;  // diagonal plug-in estimate p(1-p)/shots
};

// Treats each operator as a two-outcome POVM effect (spectrum within [0,1])
// measured shots_per_setting times on rho0; Bernoulli draws come from a
// counter-based stream keyed by (seed, setting index).
SimulatedOutcome simulate_counts(const MeasurementDesign& design, const DensityOperator& rho0,
                                 long shots_per_setting, std::uint64_t seed);

}  // namespace tomoregion
