// Tests for balanced-sum instances, their ellipsoid encodings, the sphere
// objective, violation witnesses, and the geometric decision procedure.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "test_helpers.hpp"
#include "tomoregion/errors.hpp"
#include "tomoregion/hardness.hpp"
#include "tomoregion/statespace.hpp"

using namespace tomoregion;

namespace {

// Independent existence check by exhaustive enumeration over sign vectors
// with the first sign fixed to +1.
bool brute_force_solvable(const std::vector<long long>& a) {
  const int d = static_cast<int>(a.size());
  for (std::uint64_t mask = 0; mask < (1ull << (d - 1)); ++mask) {
    long long total = a[0];
    for (int k = 1; k < d; ++k) total += (mask >> (k - 1)) & 1 ? -a[k] : a[k];
    if (total == 0) return true;
  }
  return false;
}

long long dot_signs(const std::vector<long long>& a, const std::vector<int>& psi) {
  long long total = 0;
  for (std::size_t k = 0; k < a.size(); ++k) total += a[k] * psi[k];
  return total;
}

RealVector sign_vector_as_real(const std::vector<int>& psi) {
  RealVector v(static_cast<int>(psi.size()));
  for (std::size_t k = 0; k < psi.size(); ++k) v(static_cast<int>(k)) = psi[k];
  return v;
}

}  // namespace

TEST_SUITE("hardness") {

TEST_CASE("solver finds balancing sign vectors with the first sign fixed") {
  const auto two_ones = solve_balanced_sum(BalancedSumInstance({1, 1}));
  REQUIRE(two_ones.has_value());
  CHECK(*two_ones == std::vector<int>{1, -1});

  const auto three = solve_balanced_sum(BalancedSumInstance({3, 5, 8}));
  REQUIRE(three.has_value());
  CHECK(*three == std::vector<int>{1, 1, -1});

  CHECK_FALSE(solve_balanced_sum(BalancedSumInstance({1, 2})).has_value());

  // Any returned vector balances the instance, has +-1 entries, and leads
  // with +1.
  const std::vector<long long> entries = {4, 9, 14, 5, 12, 6};
  const auto psi = solve_balanced_sum(BalancedSumInstance(entries));
  REQUIRE(psi.has_value());
  CHECK((*psi)[0] == 1);
  for (int s : *psi) CHECK((s == 1 || s == -1));
  CHECK(dot_signs(entries, *psi) == 0);
}

TEST_CASE("instance validation and size budget") {
  CHECK_THROWS_AS(BalancedSumInstance({5}), InvalidInputError);
  CHECK_THROWS_AS(BalancedSumInstance({1, 0}), InvalidInputError);
  CHECK_THROWS_AS(BalancedSumInstance({1, -4}), InvalidInputError);
  CHECK_THROWS_AS(BalancedSumInstance({1, 2'000'000'000'000'000LL}), InvalidInputError);

  std::vector<long long> huge(31, 1);
  CHECK_THROWS_AS(solve_balanced_sum(BalancedSumInstance(huge)), InstanceTooLargeError);
}

TEST_CASE("meet-in-the-middle regime agrees with independent enumeration") {
  // d = 25 exercises the split-search path; enumeration is still feasible.
  std::vector<long long> solvable(25);
  for (int k = 0; k < 25; ++k) solvable[k] = (k % 7) + 1 + (k % 3);
  const auto psi = solve_balanced_sum(BalancedSumInstance(solvable));
  CHECK(brute_force_solvable(solvable));
  REQUIRE(psi.has_value());
  CHECK((*psi)[0] == 1);
  CHECK(dot_signs(solvable, *psi) == 0);

  // Odd total sum cannot balance; both searches must agree on nullopt.
  std::vector<long long> odd(25, 2);
  odd[0] = 3;
  CHECK_FALSE(brute_force_solvable(odd));
  CHECK_FALSE(solve_balanced_sum(BalancedSumInstance(odd)).has_value());
}

TEST_CASE("encoding constants for the two-ones instance") {
  const BalancedSumEncoding enc = encode(BalancedSumInstance({1, 1}));

  CHECK(enc.b1 == doctest::Approx(0.0078125).epsilon(1e-12));
  CHECK(enc.b2 == doctest::Approx(1.3333333333333333).epsilon(1e-12));
  CHECK(enc.q == doctest::Approx(0.691751956652619).epsilon(1e-12));
  CHECK(enc.r1 == doctest::Approx(0.3463272191944193).epsilon(1e-12));
  CHECK(enc.r2 == doctest::Approx(0.1999521132295925).epsilon(1e-12));
  CHECK(enc.c1 == doctest::Approx(5.9921875).epsilon(1e-12));
  CHECK(enc.c2 == doctest::Approx(0.14853495793443566).epsilon(1e-12));
  CHECK(enc.eps_sq == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(enc.gap == 2.0 * enc.b1);
  CHECK(enc.violation_bound == doctest::Approx(0.00022576760987357006).epsilon(1e-9));
  CHECK(enc.certify_margin == doctest::Approx(7.808759293941362e-05).epsilon(1e-9));

  // Center (q/d) I + ((1-q)/|a|^2) |a><a| for a = (1, 1).
  const ComplexMatrix& c = enc.ellipsoid.center.matrix;
  CHECK(std::abs(c(0, 0).real() - 0.5) <= 1e-12);
  CHECK(std::abs(c(1, 1).real() - 0.5) <= 1e-12);
  CHECK(std::abs(c(0, 1).real() - 0.1541240216736905) <= 1e-12);
  CHECK(std::abs(c(0, 1).imag()) <= 1e-15);

  // Radii: r1 on the symmetric off-diagonal coordinate, r2 on the rest;
  // orientation is the identity.
  REQUIRE(enc.ellipsoid.radii.size() == 3);
  CHECK(enc.ellipsoid.radii(0) == enc.r1);
  CHECK(enc.ellipsoid.radii(1) == enc.r2);
  CHECK(enc.ellipsoid.radii(2) == enc.r2);
  CHECK((enc.ellipsoid.orientation - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("encoding constants for the one-two instance") {
  const BalancedSumEncoding enc = encode(BalancedSumInstance({1, 2}));
  CHECK(enc.certify_margin == doctest::Approx(1.0763398465451942e-05).epsilon(1e-9));
  CHECK(enc.violation_bound == doctest::Approx(3.349111369116726e-05).epsilon(1e-9));
  CHECK(enc.gap == doctest::Approx(0.0025).epsilon(1e-12));
}

TEST_CASE("encoding consistency identity holds across instances") {
  const std::vector<std::vector<long long>> cases = {
      {1, 1}, {1, 2}, {3, 5, 8}, {2, 3, 4, 5}, {1, 1, 1, 1, 1}, {7, 11, 13}};
  for (const auto& entries : cases) {
    const BalancedSumEncoding enc = encode(BalancedSumInstance(entries));
    const double d = static_cast<double>(entries.size());
    const double lhs = std::sqrt(2.0) *
                       std::sqrt((d * d - d - enc.b1) * (1.0 - enc.eps_sq) +
                                 d * (d - 1.0) * enc.eps_sq) *
                       enc.r1;
    CHECK(lhs == doctest::Approx(enc.q).epsilon(1e-10));
    CHECK(enc.q > 0.0);
    CHECK(enc.q < 1.0);
    CHECK(enc.r2 == doctest::Approx(std::sqrt(enc.eps_sq) * enc.r1).epsilon(1e-12));
  }
}

TEST_CASE("encoding centers have the two-level spectrum and are states") {
  const std::vector<std::vector<long long>> cases = {{1, 1}, {1, 2}, {3, 5, 8}, {2, 3, 4, 5}};
  for (const auto& entries : cases) {
    const BalancedSumEncoding enc = encode(BalancedSumInstance(entries));
    const int d = static_cast<int>(entries.size());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(enc.ellipsoid.center.matrix);
    const RealVector eigs = es.eigenvalues();
    for (int i = 0; i < d - 1; ++i) {
      CHECK(eigs(i) == doctest::Approx(enc.q / d).epsilon(1e-10));
    }
    CHECK(eigs(d - 1) == doctest::Approx(enc.q / d + (1.0 - enc.q)).epsilon(1e-10));
    CHECK(eigs(0) >= 0.0);
    CHECK(std::abs(enc.ellipsoid.center.matrix.trace().real() - 1.0) <= 1e-12);
  }
}

TEST_CASE("objective scores balancing sign vectors exactly and others below the gap") {
  const BalancedSumInstance ones({1, 1});
  const BalancedSumEncoding enc = encode(ones);

  RealVector balanced(2);
  balanced << 1.0, -1.0;
  const double top = objective(ones, balanced);
  CHECK(top == doctest::Approx(6.0).epsilon(1e-12));  // 2d^2 - d for d = 2
  CHECK(top - enc.c1 == doctest::Approx(enc.b1).epsilon(1e-9));

  RealVector unbalanced(2);
  unbalanced << 1.0, 1.0;
  CHECK(objective(ones, unbalanced) <= 6.0 - enc.gap + 1e-12);

  RealVector wrong_norm(2);
  wrong_norm << 1.0, 0.0;
  CHECK_THROWS_AS(objective(ones, wrong_norm), InvalidInputError);
  RealVector wrong_len = RealVector::Ones(3);
  CHECK_THROWS_AS(objective(ones, wrong_len), DimensionMismatchError);
}

TEST_CASE("objective stays below the solvable ceiling for an unsolvable instance") {
  const BalancedSumInstance inst({1, 2});
  const BalancedSumEncoding enc = encode(inst);
  const double ceiling = 6.0 - enc.gap;  // 2d^2 - d - gap for d = 2

  // All four sign vectors.
  for (int s0 : {-1, 1}) {
    for (int s1 : {-1, 1}) {
      RealVector psi(2);
      psi << s0, s1;
      CHECK(objective(inst, psi) <= ceiling + 1e-12);
    }
  }

  // Random points on the sphere |psi|^2 = d.
  for (int rep = 0; rep < 10000; ++rep) {
    RealVector psi = testutil::random_normal_vector(2, 4200 + rep, 0);
    psi *= std::sqrt(2.0) / psi.norm();
    CHECK(objective(inst, psi) <= ceiling + 1e-9);
  }
}

TEST_CASE("objective of non-balancing sign vectors for a solvable instance") {
  const BalancedSumInstance inst({3, 5, 8});
  const BalancedSumEncoding enc = encode(inst);
  const double d = 3.0;
  const double peak = 2.0 * d * d - d;
  for (int s0 : {-1, 1}) {
    for (int s1 : {-1, 1}) {
      for (int s2 : {-1, 1}) {
        RealVector psi(3);
        psi << s0, s1, s2;
        const long long balance = 3 * s0 + 5 * s1 + 8 * s2;
        const double g = objective(inst, psi);
        if (balance == 0) {
          CHECK(g == doctest::Approx(peak).epsilon(1e-12));
        } else {
          CHECK(g <= peak - enc.gap + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("violation witness is a boundary member with certified negative eigenvalue") {
  const std::vector<std::vector<long long>> cases = {{1, 1}, {3, 5, 8}, {2, 3, 5, 4}};
  for (const auto& entries : cases) {
    const BalancedSumEncoding enc = encode(BalancedSumInstance(entries));
    const auto psi = solve_balanced_sum(enc.instance);
    REQUIRE(psi.has_value());
    const DensityOperator witness = violation_witness(enc, *psi);

    CHECK(mineig(witness) <= -enc.violation_bound);

    // Reconstruct the ellipsoid coordinate of the witness and confirm it lies
    // on the boundary.
    const int d = static_cast<int>(entries.size());
    const GellMannBasis basis = build_basis(d);
    const RealVector w = to_bloch(witness, basis).coords;
    const RealVector wc = to_bloch(enc.ellipsoid.center, basis).coords;
    const RealVector local = enc.ellipsoid.orientation.transpose() * (w - wc);
    double norm_sq = 0.0;
    for (int i = 0; i < local.size(); ++i) {
      const double ui = local(i) / enc.ellipsoid.radii(i);
      norm_sq += ui * ui;
    }
    CHECK(std::sqrt(norm_sq) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("violation witness rejects non-balancing input") {
  const BalancedSumEncoding enc = encode(BalancedSumInstance({1, 1}));
  CHECK_THROWS_AS(violation_witness(enc, {1, 1}), InvalidWitnessInputError);
  CHECK_THROWS_AS(violation_witness(enc, {1}), InvalidWitnessInputError);
  CHECK_THROWS_AS(violation_witness(enc, {1, 2}), InvalidWitnessInputError);
}

TEST_CASE("geometric decision matches solvability on small instances") {
  CHECK(decide_via_geometry(encode(BalancedSumInstance({1, 1}))));
  CHECK_FALSE(decide_via_geometry(encode(BalancedSumInstance({1, 2}))));
  CHECK(decide_via_geometry(encode(BalancedSumInstance({1, 1, 2}))));

  std::vector<long long> big(25, 1);
  CHECK_THROWS_AS(decide_via_geometry(encode(BalancedSumInstance(big))), InstanceTooLargeError);
}

TEST_CASE("geometric decision equals brute-force solvability over a small family") {
  // All instances with entries in {1, 2, 3} at d in {2, 3}, and entries in
  // {1, 2} at d = 4.
  for (long long x = 1; x <= 3; ++x) {
    for (long long y = 1; y <= 3; ++y) {
      const std::vector<long long> e2 = {x, y};
      CHECK(decide_via_geometry(encode(BalancedSumInstance(e2))) == brute_force_solvable(e2));
      for (long long z = 1; z <= 3; ++z) {
        const std::vector<long long> e3 = {x, y, z};
        CHECK(decide_via_geometry(encode(BalancedSumInstance(e3))) == brute_force_solvable(e3));
      }
    }
  }
  for (long long x = 1; x <= 2; ++x) {
    for (long long y = 1; y <= 2; ++y) {
      for (long long z = 1; z <= 2; ++z) {
        for (long long w = 1; w <= 2; ++w) {
          const std::vector<long long> e4 = {x, y, z, w};
          CHECK(decide_via_geometry(encode(BalancedSumInstance(e4))) == brute_force_solvable(e4));
        }
      }
    }
  }
}

TEST_CASE("criterion radius gap is strictly positive and matches pinned values") {
  const BalancedSumEncoding ones = encode(BalancedSumInstance({1, 1}));
  const double gap_ones = criterion_radius_gap(ones);
  CHECK(gap_ones > 0.0);
  CHECK(gap_ones <= std::sqrt(2.0));
  CHECK(gap_ones == doctest::Approx(1.41510113949444e-13).epsilon(1e-9));

  const BalancedSumEncoding onetwo = encode(BalancedSumInstance({1, 2}));
  const double gap_onetwo = criterion_radius_gap(onetwo);
  CHECK(gap_onetwo > 0.0);
  CHECK(gap_onetwo == doctest::Approx(5.777237793650908e-16).epsilon(1e-9));
}

}  // TEST_SUITE
