// JSON serialization for every externally visible domain type.
//
// Conventions: complex entries as [re, im]; matrices as row-major nested
// arrays; a DensityOperator is {"dim": d, "matrix": [[[re,im],...],...]};
// an ellipsoid orientation may be the string "identity". Every parse failure
// (malformed JSON, missing field, wrong shape) throws InvalidInputError so
// the CLI can map it to the input-error exit code.
#pragma once

#include <string>

#include <json.hpp>

#include "tomoregion/bayes.hpp"
#include "tomoregion/ellipsoid.hpp"
#include "tomoregion/hardness.hpp"
#include "tomoregion/statespace.hpp"
#include "tomoregion/tomography.hpp"

namespace tomoregion::io {

using Json = nlohmann::json;

Json to_json(const RealVector& v);
Json to_json(const RealMatrix& m);
Json to_json(const ComplexVector& v);
Json to_json(const ComplexMatrix& m);
Json to_json(const DensityOperator& rho);
Json to_json(const GellMannBasis& basis);
Json to_json(const StateEllipsoid& e);
Json to_json(const ContainmentVerdict& verdict);
Json to_json(const MeasurementDesign& design);
Json to_json(const OutcomeEllipsoid& outcome);
Json to_json(const SimulatedOutcome& outcome);
Json to_json(const GaussianPosterior& post);
Json to_json(const CredibleRadiusPair& pair);
// Embeds the instance, every named constant, the certified radius gap, and
// the full ellipsoid for audit.
Json to_json(const BalancedSumEncoding& enc);

RealVector parse_real_vector(const Json& j);
RealMatrix parse_real_matrix(const Json& j);
ComplexMatrix parse_complex_matrix(const Json& j);
DensityOperator parse_density_operator(const Json& j);
StateEllipsoid parse_state_ellipsoid(const Json& j);
MeasurementDesign parse_measurement_design(const Json& j);
OutcomeEllipsoid parse_outcome_ellipsoid(const Json& j);
GaussianPosterior parse_gaussian_posterior(const Json& j);
BalancedSumInstance parse_balanced_sum_instance(const Json& j);

const char* to_string(ContainmentStatus status);
const char* to_string(CriterionTriState tri);
const char* to_string(ContainmentDecision decision);

// Reads and parses a JSON document; wraps I/O and syntax failures in
// InvalidInputError.
Json load_json_file(const std::string& path);

}  // namespace tomoregion::io
