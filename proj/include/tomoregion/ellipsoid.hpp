// State-space ellipsoids and the decision procedures for PSD-cone containment:
// the exact ball criterion, a positivity functional whose global nonnegativity
// over pure states is equivalent to containment, and a multi-start
// optimization-based checker with certified-margin semantics.
//
// An ellipsoid is the set { center + sum_i R_i u_i sigma_i' : ||u||_2 <= 1 }
// with sigma_i' = sum_j O_ji sigma_j. Containment in the PSD cone holds iff
//   F(psi) = <psi|center|psi> - sqrt(sum_i R_i^2 <psi|sigma_i'|psi>^2) >= 0
// for every unit vector psi; the checker minimizes F over the unit sphere.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "tomoregion/statespace.hpp"

namespace tomoregion {

struct StateEllipsoid {
  DensityOperator center;
  RealVector radii;        // length d^2 - 1, all > 0
  RealMatrix orientation;  // orthogonal; column i holds the Bloch coordinates of axis i

  StateEllipsoid() = default;
  // Validates radii > 0 and O^T O = Id within 1e-10.
  StateEllipsoid(DensityOperator center_, RealVector radii_, RealMatrix orientation_);

  int bloch_dim() const { return static_cast<int>(radii.size()); }
};

enum class ContainmentStatus { kContainedCertified, kViolated, kUndecided };

struct ContainmentWitness {
  PureStateVector psi;     // direction along which positivity fails
  DensityOperator state;   // the ellipsoid member with <psi|state|psi> < 0
  RealVector u;            // its ellipsoid coordinates (||u|| = 1)
  double expectation = 0;  // <psi|state|psi>
  double min_eig = 0;      // independently recomputed smallest eigenvalue
};

struct ContainmentVerdict {
  ContainmentStatus status = ContainmentStatus::kUndecided;
  double margin = 0.0;  // min over probed psi of the positivity functional
  std::optional<ContainmentWitness> witness;
};

struct ContainmentOptions {
  int restarts = 32;         // random starts in addition to the structured ones
  int grid_depth = 24;       // grid fallback resolution for d <= 3
  double certify_margin = 1e-7;
  bool restrict_real = false;
  std::uint64_t seed = 0;    // drives the random starts deterministically
};

// The ellipsoid member at coordinates u (requires ||u||_2 <= 1 + 1e-9).
DensityOperator point_at(const StateEllipsoid& e, const RealVector& u);

// Exact criterion: the Bloch-coordinate ball of radius R around the center is
// inside the PSD cone iff R <= sqrt(d/(2(d-1))) * mineig(center).
bool sphere_contained_in_psd(const DensityOperator& center, double R);

// F(psi) as above; psi is normalized internally (F is reported for the unit
// representative, and is invariant under global phase and psi -> -psi).
double positivity_functional(const StateEllipsoid& e, const PureStateVector& psi);

// Minimizes the positivity functional over unit vectors (complex in general;
// real-restricted on request, which requires a real-symmetric center, identity
// orientation, and radii constant on the X block and on the Y+diagonal block
// with R_X >= R_rest). Multi-start: computational-basis vectors, all +-1 sign
// patterns, a low-dimensional grid for d <= 3, and seeded random starts; each
// start is polished by alternating the closed-form inner minimizer over u with
// the bottom eigenvector of the resulting state (monotone in F).
//
// VIOLATED requires an independently re-verified witness; CONTAINED_CERTIFIED
// means the probed minimum exceeds certify_margin (heuristic certificate);
// UNDECIDED otherwise.
ContainmentVerdict check_containment(const StateEllipsoid& e, const ContainmentOptions& opts);

struct VolumeEstimate {
  double volume_estimate = 0.0;  // Hilbert-Schmidt volume of (ellipsoid ∩ PSD)
  double psd_fraction = 0.0;
  double stderr_fraction = 0.0;  // binomial standard error of psd_fraction
};

// Uniform rejection sampling over the ellipsoid: draws n points u in the unit
// ball, maps them through point_at, and reports the PSD fraction and the
// implied Hilbert-Schmidt volume (Lebesgue volume in the orthonormal
// coordinates sqrt(2)*w, i.e. vol = fraction * V_N * prod_i (sqrt(2) R_i)).
VolumeEstimate truncate_and_sample_volume(const StateEllipsoid& e, long n, std::uint64_t seed);

}  // namespace tomoregion
