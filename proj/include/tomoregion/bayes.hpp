// Gaussian posteriors over state space truncated to the PSD cone: the
// normalization constant C, the PSD-truncated minimum-volume credible radius,
// the equal-radius containment criterion, and the encoding of an ellipsoid as
// the sqrt(2)-Mahalanobis ball of a Gaussian.
//
// All sampling happens in Bloch coordinates, where the flat Hilbert-Schmidt
// reference measure is Lebesgue: draw z ~ N(0, Id), map w = w_theta + L z with
// Sigma = L L^T, and accept when the reconstructed matrix is PSD. The
// Mahalanobis distance of such a sample is exactly ||z||.
#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "tomoregion/ellipsoid.hpp"
#include "tomoregion/statespace.hpp"

namespace tomoregion {

// Gaussian distribution over unit-trace Hermitian matrices: density
// proportional to exp(-||w - w_theta||_Sigma^2 / 2) in Bloch coordinates.
struct GaussianPosterior {
  DensityOperator mean;  // Hermitian, trace one; PSD is not required here
  RealMatrix cov;        // (d^2-1) x (d^2-1) symmetric positive definite

  GaussianPosterior() = default;
  // Validates the covariance shape, symmetry (1e-10 relative), and positive
  // definiteness (mineig > 1e-12 * maxeig).
  GaussianPosterior(DensityOperator mean_, RealMatrix cov_);

  int dim() const { return mean.dim; }
  int bloch_dim() const { return static_cast<int>(cov.rows()); }
};

enum class NormalizationEstimator { kMonteCarlo, kSeries };

// The same Gaussian conditioned on the PSD cone. c estimates the
// normalization constant C = 1 / (PSD mass under the base Gaussian).
struct TruncatedGaussianPosterior {
  GaussianPosterior base;
  double c = 1.0;
  double c_error = 0.0;  // standard error (Monte Carlo) or certified bound (series)
  NormalizationEstimator estimator = NormalizationEstimator::kMonteCarlo;
  std::int64_t samples = 0;  // Monte Carlo draws behind c (0 on the series path)
  std::uint64_t seed = 0;    // seed behind c (Monte Carlo only)
};

enum class CriterionTriState { kEqual, kStrictlyGreater, kUnresolved };

struct CredibleRadiusPair {
  double alpha = 0.0;
  double r_unconstrained = 0.0;  // radius of the alpha/C Gaussian ball
  double r_truncated = 0.0;      // empirical alpha-quantile over PSD samples
  double r_error = 0.0;          // bootstrap error bar on r_truncated
  CriterionTriState criterion_holds = CriterionTriState::kUnresolved;
};

// sqrt((w - w_theta)^T Sigma^{-1} (w - w_theta)) in Bloch coordinates.
double mahalanobis(const GaussianPosterior& post, const DensityOperator& rho);

// Monte Carlo normalization: C = n / #(PSD samples) with the delta-method
// binomial standard error, deterministic in the seed. Requires n >= 1000.
// Zero PSD acceptances throw NormalizationUnresolvableError; the message
// carries the implied one-sided bound on C.
TruncatedGaussianPosterior estimate_normalization(const GaussianPosterior& post,
                                                  std::int64_t n, std::uint64_t seed);

struct SeriesNormalization {
  double c = 1.0;
  double error_bound = 0.0;  // certified |c - C| bound with the oracle error propagated
  double ball_radius = 0.0;  // Mahalanobis radius of the PSD-contained ball used
  double alpha_tilde = 0.0;  // Gaussian mass of that ball
};

// Normalization through the always-contained ball around a strictly PSD mean:
// the Mahalanobis ball of radius r = sqrt(d/(2(d-1))) * mineig(theta) /
// sqrt(maxeig Sigma) lies inside the PSD cone, so its truncated mass is
// C * P(N/2, r^2/2). Querying the truncated-radius oracle at level
// alpha_tilde = P(N/2, r^2/2) and inverting gives
//   c = alpha_tilde / P(N/2, r_oracle^2 / 2),
// with the series accuracy delta and the oracle's radius error bar propagated
// into error_bound. The oracle maps a credibility level to (radius, error).
// Throws LemmaInapplicableError unless the mean is strictly positive definite.
SeriesNormalization series_normalization(
    const GaussianPosterior& post,
    const std::function<std::pair<double, double>(double)>& truncated_radius_oracle,
    double delta);

struct QuantileOptions {
  double radius_delta = 1e-9;      // accuracy of the unconstrained inversion
  int bootstrap_resamples = 200;   // replicates behind r_error
  ContainmentOptions containment;  // drives the geometric certificate
};

// PSD-truncated credible radius at level alpha: the empirical alpha-quantile
// of the Mahalanobis distances among PSD-accepted Gaussian samples, with a
// bootstrap error bar, next to the unconstrained radius r_{alpha/C} from the
// stored normalization. criterion_holds reports whether the two radii agree
// (which happens exactly when the unconstrained credible ellipsoid stays
// inside the PSD cone): a geometric containment certificate on that ellipsoid
// decides it where possible, and the Monte Carlo comparison with 3x error
// bars is the fallback; kUnresolved when neither resolves.
CredibleRadiusPair truncated_mvcr_radius(const TruncatedGaussianPosterior& tpost,
                                         double alpha, std::int64_t n, std::uint64_t seed,
                                         const QuantileOptions& opts = {});

struct EncodedPosterior {
  GaussianPosterior post;
  double alpha_over_c = 0.0;  // P(N/2, 1), the credibility-to-normalization ratio
};

// Represents an ellipsoid as a Mahalanobis ball of a Gaussian: with
// Sigma = O diag(R_i^2 / 2) O^T every boundary point of the ellipsoid sits at
// Mahalanobis distance exactly sqrt(2), making the ellipsoid the credible
// region at level alpha with alpha / C = P(N/2, 1).
EncodedPosterior encode_ellipsoid_as_posterior(const StateEllipsoid& e);

enum class ContainmentDecision { kContained, kViolated, kUnresolved };

struct CriterionBudgets {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  double radius_gap = 0.0;       // minimal truncated-radius excess under violation
  double certify_margin = 1e-7;  // forwarded to the geometric certificate
};

struct CriterionReport {
  double c = 1.0;             // estimated normalization constant
  double c_error = 0.0;       // its standard error
  double alpha = 0.0;         // credibility level of the original ellipsoid, c * P(N/2, 1)
  CredibleRadiusPair radii;   // truncated vs unconstrained radius comparison
  ContainmentDecision decision = ContainmentDecision::kUnresolved;
};

// Decides PSD containment of e through the posterior route: encode e as a
// Gaussian, estimate C, and compare the truncated radius at level
// alpha = C * P(N/2, 1) against the unconstrained radius sqrt(2). Containment
// holds iff the radii agree; a truncated radius exceeding by more than half
// the radius gap proves violation. Unresolved is a result, not an error.
CriterionReport evaluate_containment_criterion(const StateEllipsoid& e,
                                               const CriterionBudgets& budgets);

inline ContainmentDecision criterion_decides_containment(const StateEllipsoid& e,
                                                         const CriterionBudgets& budgets) {
  return evaluate_containment_criterion(e, budgets).decision;
}

}  // namespace tomoregion
