#include "tomoregion/support/json_io.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "tomoregion/errors.hpp"

namespace tomoregion::io {
namespace {

[[noreturn]] void fail(const std::string& what) { throw InvalidInputError(what); }

double number_at(const Json& j) {
  if (!j.is_number()) fail("expected a number, found " + std::string(j.type_name()));
  return j.get<double>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object with field '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

Complex parse_complex_entry(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail("complex entries must be [re, im] pairs");
  return {number_at(j[0]), number_at(j[1])};
}

}  // namespace

Json to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(Json::array({v(i).real(), v(i).imag()}));
  }
  return out;
}

Json to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const DensityOperator& rho) {
  return Json{{"dim", rho.dim}, {"matrix", to_json(rho.matrix)}};
}

Json to_json(const GellMannBasis& basis) {
  Json mats = Json::array();
  for (const ComplexMatrix& m : basis.matrices) mats.push_back(to_json(m));
  return Json{{"dim", basis.dim}, {"matrices", std::move(mats)}};
}

Json to_json(const StateEllipsoid& e) {
  const int nn = e.bloch_dim();
  const bool identity = (e.orientation - RealMatrix::Identity(nn, nn)).cwiseAbs().maxCoeff() == 0.0;
  return Json{{"center", to_json(e.center)},
              {"radii", to_json(e.radii)},
              {"orientation", identity ? Json("identity") : to_json(e.orientation)}};
}

Json to_json(const ContainmentVerdict& verdict) {
  Json out{{"status", to_string(verdict.status)}, {"margin", verdict.margin}};
  if (verdict.witness.has_value()) {
    const ContainmentWitness& w = *verdict.witness;
    out["witness"] = Json{{"psi", to_json(w.psi.amplitudes)},
                          {"state", to_json(w.state)},
                          {"u", to_json(w.u)},
                          {"expectation", w.expectation},
                          {"min_eig", w.min_eig}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json to_json(const MeasurementDesign& design) {
  Json ops = Json::array();
  for (const ComplexMatrix& m : design.operators) ops.push_back(to_json(m));
  return Json{{"dim", design.dim}, {"operators", std::move(ops)}};
}

Json to_json(const OutcomeEllipsoid& outcome) {
  return Json{{"center", to_json(outcome.center)}, {"shape", to_json(outcome.shape)}};
}

Json to_json(const SimulatedOutcome& outcome) {
  return Json{{"y_hat", to_json(outcome.y_hat)}, {"gaussian_cov", to_json(outcome.gaussian_cov)}};
}

Json to_json(const GaussianPosterior& post) {
  return Json{{"dim", post.dim()}, {"mean", to_json(post.mean)}, {"cov", to_json(post.cov)}};
}

Json to_json(const CredibleRadiusPair& pair) {
  return Json{{"alpha", pair.alpha},
              {"r_unconstrained", pair.r_unconstrained},
              {"r_truncated", pair.r_truncated},
              {"r_error", pair.r_error},
              {"criterion_holds", to_string(pair.criterion_holds)}};
}

Json to_json(const BalancedSumEncoding& enc) {
  Json a = Json::array();
  for (const long long v : enc.instance.a) a.push_back(v);
  return Json{{"a", std::move(a)},
              {"eps_sq", enc.eps_sq},
              {"r1", enc.r1},
              {"r2", enc.r2},
              {"q", enc.q},
              {"b1", enc.b1},
              {"b2", enc.b2},
              {"c1", enc.c1},
              {"c2", enc.c2},
              {"gap", enc.gap},
              {"violation_bound", enc.violation_bound},
              {"certify_margin", enc.certify_margin},
              {"radius_gap", criterion_radius_gap(enc)},
              {"ellipsoid", to_json(enc.ellipsoid)}};
}

RealVector parse_real_vector(const Json& j) {
  if (!j.is_array()) fail("expected an array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_at(j[i]);
  return v;
}

RealMatrix parse_real_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) fail("expected a non-empty row-major matrix");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_at(j[r][c]);
    }
  }
  return m;
}

ComplexMatrix parse_complex_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) fail("expected a non-empty row-major complex matrix");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_complex_entry(j[r][c]);
    }
  }
  return m;
}

DensityOperator parse_density_operator(const Json& j) {
  const Json& dim = field(j, "dim");
  if (!dim.is_number_integer()) fail("'dim' must be an integer");
  ComplexMatrix m = parse_complex_matrix(field(j, "matrix"));
  if (m.rows() != dim.get<int>() || m.cols() != dim.get<int>()) {
    fail("'matrix' shape must match 'dim'");
  }
  return DensityOperator(std::move(m));
}

StateEllipsoid parse_state_ellipsoid(const Json& j) {
  DensityOperator center = parse_density_operator(field(j, "center"));
  RealVector radii = parse_real_vector(field(j, "radii"));
  const Json& orient = field(j, "orientation");
  RealMatrix orientation;
  if (orient.is_string() && orient.get<std::string>() == "identity") {
    orientation = RealMatrix::Identity(radii.size(), radii.size());
  } else {
    orientation = parse_real_matrix(orient);
  }
  return StateEllipsoid(std::move(center), std::move(radii), std::move(orientation));
}

MeasurementDesign parse_measurement_design(const Json& j) {
  const Json& dim = field(j, "dim");
  if (!dim.is_number_integer()) fail("'dim' must be an integer");
  const Json& ops = field(j, "operators");
  if (!ops.is_array() || ops.empty()) fail("'operators' must be a non-empty array");
  std::vector<ComplexMatrix> parsed;
  parsed.reserve(ops.size());
  for (const Json& op : ops) parsed.push_back(parse_complex_matrix(op));
  return MeasurementDesign(dim.get<int>(), std::move(parsed));
}

OutcomeEllipsoid parse_outcome_ellipsoid(const Json& j) {
  return OutcomeEllipsoid(parse_real_vector(field(j, "center")),
                          parse_real_matrix(field(j, "shape")));
}

GaussianPosterior parse_gaussian_posterior(const Json& j) {
  const Json& dim = field(j, "dim");
  if (!dim.is_number_integer()) fail("'dim' must be an integer");
  DensityOperator mean = parse_density_operator(field(j, "mean"));
  if (mean.dim != dim.get<int>()) fail("'mean' dimension must match 'dim'");
  return GaussianPosterior(std::move(mean), parse_real_matrix(field(j, "cov")));
}

BalancedSumInstance parse_balanced_sum_instance(const Json& j) {
  const Json& a = field(j, "a");
  if (!a.is_array()) fail("'a' must be an array of integers");
  std::vector<long long> entries;
  entries.reserve(a.size());
  for (const Json& v : a) {
    if (!v.is_number_integer()) fail("'a' entries must be integers");
    entries.push_back(v.get<long long>());
  }
  return BalancedSumInstance(std::move(entries));
}

const char* to_string(ContainmentStatus status) {
  switch (status) {
    case ContainmentStatus::kContainedCertified:
      return "contained-certified";
    case ContainmentStatus::kViolated:
      return "violated";
    case ContainmentStatus::kUndecided:
    default:
      return "undecided";
  }
}

const char* to_string(CriterionTriState tri) {
  switch (tri) {
    case CriterionTriState::kEqual:
      return "equal";
    case CriterionTriState::kStrictlyGreater:
      return "strictly-greater";
    case CriterionTriState::kUnresolved:
    default:
      return "unresolved";
  }
}

const char* to_string(ContainmentDecision decision) {
  switch (decision) {
    case ContainmentDecision::kContained:
      return "contained";
    case ContainmentDecision::kViolated:
      return "violated";
    case ContainmentDecision::kUnresolved:
    default:
      return "unresolved";
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open input file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    fail("malformed JSON in " + path + ": " + ex.what());
  }
}

}  // namespace tomoregion::io
