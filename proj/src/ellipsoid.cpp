#include "tomoregion/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "tomoregion/errors.hpp"
#include "tomoregion/support/rng.hpp"

namespace tomoregion {
namespace {

// <psi|sigma_j|psi> for every basis element, from amplitudes alone:
// off-diagonal pairs give 2*Re and 2*Im of conj(psi_j)*psi_k, the diagonal
// family gives sqrt(2/(l(l+1))) * (sum_{j<=l} |psi_j|^2 - l*|psi_{l+1}|^2).
template <typename Vec>
RealVector expectation_coords(const Vec& psi) {
  const int d = static_cast<int>(psi.size());
  const int n = d * d - 1;
  const int xb = d * (d - 1) / 2;
  RealVector v = RealVector::Zero(n);
  constexpr bool complex_amplitudes = std::is_same_v<typename Vec::Scalar, Complex>;
  int idx = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++idx) {
      if constexpr (complex_amplitudes) {
        const Complex z = std::conj(psi(j)) * psi(k);
        v(idx) = 2.0 * z.real();
        v(xb + idx) = 2.0 * z.imag();
      } else {
        v(idx) = 2.0 * psi(j) * psi(k);
      }
    }
  }
  double running = 0.0;  // sum of |psi_j|^2 over the first l entries
  for (int l = 1; l < d; ++l) {
    double prev;
    double cur;
    if constexpr (complex_amplitudes) {
      prev = std::norm(psi(l - 1));
      cur = std::norm(psi(l));
    } else {
      prev = psi(l - 1) * psi(l - 1);
      cur = psi(l) * psi(l);
    }
    running += prev;
    v(2 * xb + (l - 1)) = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1))) *
                          (running - static_cast<double>(l) * cur);
  }
  return v;
}

// Shared geometry for one containment search.
struct SearchContext {
  int d = 0;
  int n = 0;
  RealVector center_w;  // Bloch coordinates of the center
  RealVector radii;
  RealMatrix orientation;
  bool identity_orientation = false;
  const GellMannBasis* basis = nullptr;
};

SearchContext make_context(const StateEllipsoid& e, const GellMannBasis& basis) {
  SearchContext ctx;
  ctx.d = e.center.dim;
  ctx.n = e.bloch_dim();
  ctx.center_w = to_bloch(e.center, basis).coords;
  ctx.radii = e.radii;
  ctx.orientation = e.orientation;
  ctx.identity_orientation =
      (e.orientation - RealMatrix::Identity(ctx.n, ctx.n)).cwiseAbs().maxCoeff() < 1e-14;
  ctx.basis = &basis;
  return ctx;
}

struct EvalResult {
  double value = 0.0;   // the positivity functional at psi
  RealVector u;         // inner minimizer: unit vector with F = <psi|point_at(u)|psi>
};

// F(psi) = <psi|center|psi> - sqrt(sum_i R_i^2 (O^T v)_i^2) with v the
// expectation coordinates; the minimizing ellipsoid coordinate is
// u* = -(R o v') / ||R o v'||.
template <typename Vec>
EvalResult evaluate(const SearchContext& ctx, const Vec& psi) {
  const RealVector v = expectation_coords(psi);
  const RealVector vprime =
      ctx.identity_orientation ? v : RealVector(ctx.orientation.transpose() * v);
  const RealVector c = ctx.radii.cwiseProduct(vprime);
  const double s = c.norm();
  EvalResult r;
  r.value = 1.0 / ctx.d + ctx.center_w.dot(v) - s;
  if (s > 0.0) {
    r.u = -c / s;
  } else {  // unreachable for unit psi and positive radii; keep a valid fallback
    r.u = RealVector::Zero(ctx.n);
    r.u(0) = 1.0;
  }
  return r;
}

RealVector bloch_point(const SearchContext& ctx, const RealVector& u) {
  const RealVector scaled = ctx.radii.cwiseProduct(u);
  return ctx.center_w + (ctx.identity_orientation ? scaled : RealVector(ctx.orientation * scaled));
}

ComplexMatrix complex_state(const SearchContext& ctx, const RealVector& w) {
  return matrix_from_bloch(w, *ctx.basis);
}

// Real-symmetric state for the real-restricted search: the antisymmetric
// (imaginary) block carries zero coordinates there, so only the symmetric
// off-diagonal pairs and the diagonal family contribute.
RealMatrix real_state(const SearchContext& ctx, const RealVector& w) {
  const int d = ctx.d;
  const int xb = d * (d - 1) / 2;
  RealMatrix m = RealMatrix::Identity(d, d) / d;
  int idx = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++idx) {
      m(j, k) += w(idx);
      m(k, j) += w(idx);
    }
  }
  for (int l = 1; l < d; ++l) {
    const double coeff = w(2 * xb + (l - 1)) * std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int j = 0; j < l; ++j) m(j, j) += coeff;
    m(l, l) -= coeff * l;
  }
  return m;
}

template <typename Vec>
struct PolishResult {
  double value = 0.0;
  Vec psi;
  RealVector u;
};

// Alternate the closed-form inner minimizer with the bottom eigenvector of the
// resulting state. Each half-step can only lower the functional, so the
// sequence of values is nonincreasing; stop when progress stalls.
template <typename Vec, typename Mat>
PolishResult<Vec> polish(const SearchContext& ctx, Vec psi, int max_iters) {
  psi.normalize();
  EvalResult cur = evaluate(ctx, psi);
  PolishResult<Vec> best{cur.value, psi, cur.u};
  for (int it = 0; it < max_iters; ++it) {
    const RealVector w = bloch_point(ctx, best.u);
    Mat state;
    if constexpr (std::is_same_v<typename Vec::Scalar, Complex>) {
      state = complex_state(ctx, w);
    } else {
      state = real_state(ctx, w);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(state);
    Vec next = es.eigenvectors().col(0);
    next.normalize();
    const EvalResult r = evaluate(ctx, next);
    if (r.value < best.value) {
      const bool progress = r.value < best.value - 1e-14 * (1.0 + std::abs(best.value));
      best = PolishResult<Vec>{r.value, next, r.u};
      if (!progress) break;
    } else {
      break;
    }
  }
  return best;
}

// +-1 sign patterns over the amplitudes with the first component pinned to +1
// (global sign is irrelevant). Enumerated exhaustively while feasible; sampled
// deterministically beyond that.
template <typename Vec>
std::vector<Vec> sign_pattern_starts(int d, std::uint64_t seed) {
  std::vector<Vec> out;
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  if (d - 1 <= 20) {
    const std::uint64_t count = 1ull << (d - 1);
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      Vec psi(d);
      psi(0) = amp;
      for (int j = 1; j < d; ++j) {
        psi(j) = ((mask >> (j - 1)) & 1ull) ? -amp : amp;
      }
      out.push_back(std::move(psi));
    }
  } else {
    rng::Stream bits(seed, 0x51C4);
    const int count = 4096;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
      Vec psi(d);
      psi(0) = amp;
      const std::uint64_t word = bits.word(static_cast<std::uint64_t>(i));
      for (int j = 1; j < d; ++j) {
        psi(j) = ((word >> ((j - 1) % 64)) & 1ull) ? -amp : amp;
      }
      out.push_back(std::move(psi));
    }
  }
  return out;
}

// Low-dimensional deterministic grids: a half-circle sweep for real d=2, a
// Fibonacci sphere for real d=3 and for the d=2 complex projective space
// (which is exactly a 2-sphere); complex d=3 reuses the real grid as seeds.
template <typename Vec>
std::vector<Vec> grid_starts(int d, int grid_depth) {
  std::vector<Vec> out;
  if (d > 3 || grid_depth <= 0) return out;
  const long points = static_cast<long>(grid_depth) * grid_depth;
  constexpr bool complex_amplitudes = std::is_same_v<typename Vec::Scalar, Complex>;
  if (d == 2 && !complex_amplitudes) {
    out.reserve(points);
    for (long k = 0; k < points; ++k) {
      const double theta = std::numbers::pi * static_cast<double>(k) / points;
      Vec psi(2);
      psi(0) = std::cos(theta);
      psi(1) = std::sin(theta);
      out.push_back(std::move(psi));
    }
    return out;
  }
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  out.reserve(points);
  for (long k = 0; k < points; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / points;
    const double phi = golden_angle * k;
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec psi(d);
    if constexpr (complex_amplitudes) {
      if (d == 2) {
        // complex qubit: Bloch angles (theta, phi)
        const double half = 0.5 * std::acos(std::clamp(z, -1.0, 1.0));
        psi(0) = std::cos(half);
        psi(1) = std::polar(std::sin(half), phi);
        out.push_back(std::move(psi));
        continue;
      }
    }
    psi(0) = sin_theta * std::cos(phi);
    psi(1) = sin_theta * std::sin(phi);
    psi(2) = z;
    out.push_back(std::move(psi));
  }
  return out;
}

template <typename Vec>
std::vector<Vec> random_starts(int d, int restarts, std::uint64_t seed) {
  std::vector<Vec> out;
  if (restarts <= 0) return out;
  constexpr bool complex_amplitudes = std::is_same_v<typename Vec::Scalar, Complex>;
  rng::Stream gauss(seed, 0xE11);
  const int per = complex_amplitudes ? 2 * d : d;
  out.reserve(restarts);
  for (int r = 0; r < restarts; ++r) {
    Vec psi(d);
    for (int j = 0; j < d; ++j) {
      const std::uint64_t base = static_cast<std::uint64_t>(r) * per;
      if constexpr (complex_amplitudes) {
        psi(j) = Complex(gauss.normal(base + 2 * j), gauss.normal(base + 2 * j + 1));
      } else {
        psi(j) = gauss.normal(base + j);
      }
    }
    if (psi.norm() < 1e-12) psi(0) = 1.0;
    out.push_back(std::move(psi));
  }
  return out;
}

template <typename Vec, typename Mat>
PolishResult<Vec> minimize(const SearchContext& ctx, const ContainmentOptions& opts) {
  constexpr int kMaxIters = 200;
  std::vector<Vec> starts;
  for (int j = 0; j < ctx.d; ++j) {
    Vec e = Vec::Zero(ctx.d);
    e(j) = 1.0;
    starts.push_back(std::move(e));
  }
  for (auto& g : grid_starts<Vec>(ctx.d, opts.grid_depth)) starts.push_back(std::move(g));
  for (auto& r : random_starts<Vec>(ctx.d, opts.restarts, opts.seed)) starts.push_back(std::move(r));

  bool have_best = false;
  PolishResult<Vec> best;
  auto consider = [&](const PolishResult<Vec>& cand) {
    if (!have_best || cand.value < best.value) {
      best = cand;
      have_best = true;
    }
  };
  for (const Vec& s : starts) {
    consider(polish<Vec, Mat>(ctx, s, kMaxIters));
  }

  // Sign patterns: always evaluated in full (they carry the combinatorial
  // structure that certifies detection), polished selectively when numerous.
  std::vector<Vec> patterns = sign_pattern_starts<Vec>(ctx.d, opts.seed);
  if (patterns.size() <= 512) {
    for (const Vec& p : patterns) consider(polish<Vec, Mat>(ctx, p, kMaxIters));
  } else {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      Vec psi = patterns[i];
      psi.normalize();
      const EvalResult r = evaluate(ctx, psi);
      scored.emplace_back(r.value, i);
      PolishResult<Vec> raw{r.value, psi, r.u};
      consider(raw);
    }
    std::sort(scored.begin(), scored.end());
    const std::size_t polish_count = std::min<std::size_t>(scored.size(), 64);
    for (std::size_t i = 0; i < polish_count; ++i) {
      consider(polish<Vec, Mat>(ctx, patterns[scored[i].second], kMaxIters));
    }
  }
  return best;
}

void require_real_restriction_applicable(const StateEllipsoid& e) {
  const int d = e.center.dim;
  const int n = e.bloch_dim();
  const int xb = d * (d - 1) / 2;
  if (e.center.matrix.imag().cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidOptionError(
        "real-restricted search requires a real-symmetric center");
  }
  if ((e.orientation - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidOptionError("real-restricted search requires identity orientation");
  }
  const double r_sym = e.radii(0);
  const double r_rest = e.radii(xb);
  for (int i = 0; i < n; ++i) {
    const double expected = (i < xb) ? r_sym : r_rest;
    if (std::abs(e.radii(i) - expected) > 1e-12 * std::max(1.0, expected)) {
      throw InvalidOptionError(
          "real-restricted search requires one radius on the symmetric block and "
          "one on the remaining axes");
    }
  }
  if (r_sym < r_rest * (1.0 - 1e-12)) {
    throw InvalidOptionError(
        "real-restricted search requires the symmetric-block radius to dominate");
  }
}

}  // namespace

StateEllipsoid::StateEllipsoid(DensityOperator center_, RealVector radii_, RealMatrix orientation_)
    : center(std::move(center_)), radii(std::move(radii_)), orientation(std::move(orientation_)) {
  const int n = center.dim * center.dim - 1;
  if (radii.size() != n) {
    throw DimensionMismatchError("radii length must be d^2 - 1");
  }
  if (orientation.rows() != n || orientation.cols() != n) {
    throw DimensionMismatchError("orientation must be (d^2-1) x (d^2-1)");
  }
  for (int i = 0; i < n; ++i) {
    if (!(radii(i) > 0.0) || !std::isfinite(radii(i))) {
      throw InvalidRadiusError("ellipsoid radii must be positive and finite");
    }
  }
  const double defect =
      (orientation.transpose() * orientation - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw InvalidInputError("orientation must be orthogonal (O^T O = Id within 1e-10)");
  }
}

DensityOperator point_at(const StateEllipsoid& e, const RealVector& u) {
  if (u.size() != e.bloch_dim()) {
    throw DimensionMismatchError("ellipsoid coordinate has wrong length");
  }
  const double norm = u.norm();
  if (norm > 1.0 + 1e-9) {
    throw OutOfEllipsoidError("coordinate lies outside the unit ball");
  }
  const GellMannBasis basis = build_basis(e.center.dim);
  const RealVector w =
      to_bloch(e.center, basis).coords + e.orientation * e.radii.cwiseProduct(u).eval();
  return DensityOperator(matrix_from_bloch(w, basis));
}

bool sphere_contained_in_psd(const DensityOperator& center, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw InvalidRadiusError("sphere radius must be positive and finite");
  }
  const int d = center.dim;
  const double threshold =
      std::sqrt(static_cast<double>(d) / (2.0 * (d - 1))) * mineig(center);
  return R <= threshold;
}

double positivity_functional(const StateEllipsoid& e, const PureStateVector& psi) {
  if (psi.dim != e.center.dim) {
    throw DimensionMismatchError("state dimension does not match the ellipsoid");
  }
  const GellMannBasis basis = build_basis(e.center.dim);
  const SearchContext ctx = make_context(e, basis);
  ComplexVector unit = psi.amplitudes;
  unit.normalize();
  return evaluate(ctx, unit).value;
}

ContainmentVerdict check_containment(const StateEllipsoid& e, const ContainmentOptions& opts) {
  if (opts.restarts < 0 || opts.grid_depth < 0) {
    throw InvalidOptionError("restarts and grid_depth must be nonnegative");
  }
  if (!(opts.certify_margin >= 0.0) || !std::isfinite(opts.certify_margin)) {
    throw InvalidOptionError("certify_margin must be nonnegative and finite");
  }
  const GellMannBasis basis = build_basis(e.center.dim);
  const SearchContext ctx = make_context(e, basis);

  double value = 0.0;
  ComplexVector best_psi;
  RealVector best_u;
  if (opts.restrict_real) {
    require_real_restriction_applicable(e);
    const PolishResult<RealVector> r = minimize<RealVector, RealMatrix>(ctx, opts);
    value = r.value;
    best_psi = r.psi.cast<Complex>();
    best_u = r.u;
  } else {
    const PolishResult<ComplexVector> r = minimize<ComplexVector, ComplexMatrix>(ctx, opts);
    value = r.value;
    best_psi = r.psi;
    best_u = r.u;
  }

  ContainmentVerdict verdict;
  verdict.margin = value;
  if (value < 0.0) {
    // Re-verify through the public constructors before reporting a violation.
    DensityOperator member = point_at(e, best_u);
    const double expectation =
        (best_psi.adjoint() * member.matrix * best_psi).value().real();
    const double lowest = mineig(member);
    if (expectation < 0.0 && lowest < 0.0) {
      verdict.status = ContainmentStatus::kViolated;
      ContainmentWitness w{PureStateVector(best_psi, NormConvention::kUnit),
                           std::move(member), best_u, expectation, lowest};
      verdict.witness = std::move(w);
      return verdict;
    }
    verdict.status = ContainmentStatus::kUndecided;
    return verdict;
  }
  verdict.status = value > opts.certify_margin ? ContainmentStatus::kContainedCertified
                                               : ContainmentStatus::kUndecided;
  return verdict;
}

VolumeEstimate truncate_and_sample_volume(const StateEllipsoid& e, long n, std::uint64_t seed) {
  if (n < 1) {
    throw InvalidParameterError("sample count must be at least 1");
  }
  const int d = e.center.dim;
  const int nn = e.bloch_dim();
  const GellMannBasis basis = build_basis(d);
  const SearchContext ctx = make_context(e, basis);

  rng::Stream gauss(seed, 1);
  rng::Stream radial(seed, 2);
  long inside = 0;
  RealVector z(nn);
  for (long i = 0; i < n; ++i) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * nn;
    for (int k = 0; k < nn; ++k) z(k) = gauss.normal(base + k);
    const double norm = z.norm();
    if (norm == 0.0) continue;  // measure-zero; counts as outside
    const double scale =
        std::pow(radial.uniform_open(static_cast<std::uint64_t>(i)), 1.0 / nn) / norm;
    const RealVector w = bloch_point(ctx, RealVector(z * scale));
    const ComplexMatrix m = complex_state(ctx, w);
    const auto [lo, hi] = min_max_eigenvalues(m);
    if (passes_psd_policy(lo, std::max(std::abs(lo), std::abs(hi)))) ++inside;
  }
  const double fraction = static_cast<double>(inside) / static_cast<double>(n);
  const double log_ellipsoid_volume = 0.5 * nn * std::log(2.0 * std::numbers::pi) -
                                      std::lgamma(0.5 * nn + 1.0) +
                                      e.radii.array().log().sum();
  VolumeEstimate out;
  out.psd_fraction = fraction;
  out.volume_estimate = fraction * std::exp(log_ellipsoid_volume);
  out.stderr_fraction = std::sqrt(std::max(0.0, fraction * (1.0 - fraction)) / n);
  return out;
}

}  // namespace tomoregion
