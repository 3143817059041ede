// End-to-end tests for the tomoregion command-line tool.  Each test spawns the
// installed binary, parses the JSON envelope it prints, and validates both the
// envelope and the command-specific result against the schemas shipped in the
// repository's schemas/ directory.
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tomoregion/bayes.hpp"
#include "tomoregion/ellipsoid.hpp"
#include "tomoregion/statespace.hpp"
#include "tomoregion/support/json_io.hpp"
#include "tomoregion/tomography.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tomoregion;

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("tomoregion_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path write_input(const std::string& name, const json& doc) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << doc.dump(2) << "\n";
  return p;
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args) {
  const fs::path err_path = work_dir() / "stderr.txt";
  const std::string cmd =
      std::string(TOMOREGION_CLI_PATH) + " " + args + " 2>" + err_path.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  CliRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.out = std::move(out);
  run.err = read_file(err_path);
  return run;
}

// ---------------------------------------------------------------------------
// Minimal JSON Schema checker covering the keyword subset used by the shipped
// schemas: type, enum, required, properties, items, minItems, maxItems,
// minimum, anyOf, and local $ref into #/definitions.
// ---------------------------------------------------------------------------

bool matches_type(const std::string& t, const json& v) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

void validate_node(const json& schema, const json& value, const json& root,
                   const std::string& path, std::vector<std::string>& errors) {
  if (schema.contains("$ref")) {
    const std::string ref = schema.at("$ref").get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0 || !root.contains("definitions") ||
        !root.at("definitions").contains(ref.substr(prefix.size()))) {
      errors.push_back(path + ": unresolvable $ref " + ref);
      return;
    }
    validate_node(root.at("definitions").at(ref.substr(prefix.size())), value, root, path,
                  errors);
    return;
  }
  if (schema.contains("anyOf")) {
    bool any_ok = false;
    for (const auto& option : schema.at("anyOf")) {
      std::vector<std::string> scratch;
      validate_node(option, value, root, path, scratch);
      if (scratch.empty()) {
        any_ok = true;
        break;
      }
    }
    if (!any_ok) errors.push_back(path + ": no anyOf branch matched");
    return;
  }
  if (schema.contains("type") && !matches_type(schema.at("type").get<std::string>(), value)) {
    errors.push_back(path + ": expected type " + schema.at("type").get<std::string>() +
                     ", got " + std::string(value.type_name()));
    return;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& candidate : schema.at("enum")) {
      if (candidate == value) {
        hit = true;
        break;
      }
    }
    if (!hit) errors.push_back(path + ": value not in enum: " + value.dump());
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema.at("minimum").get<double>()) {
    errors.push_back(path + ": below minimum");
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!value.contains(key.get<std::string>())) {
          errors.push_back(path + ": missing required key " + key.get<std::string>());
        }
      }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, subschema] : schema.at("properties").items()) {
        if (value.contains(key)) {
          validate_node(subschema, value.at(key), root, path + "." + key, errors);
        }
      }
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>()) {
      errors.push_back(path + ": fewer than minItems elements");
    }
    if (schema.contains("maxItems") && value.size() > schema.at("maxItems").get<std::size_t>()) {
      errors.push_back(path + ": more than maxItems elements");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_node(schema.at("items"), value[i], root, path + "[" + std::to_string(i) + "]",
                      errors);
      }
    }
  }
}

void expect_valid(const std::string& schema_name, const json& value) {
  const fs::path schema_path =
      fs::path(TOMOREGION_SCHEMA_DIR) / (schema_name + ".schema.json");
  std::ifstream in(schema_path);
  REQUIRE_MESSAGE(in.good(), "missing schema file: ", schema_path.string());
  json schema;
  in >> schema;
  std::vector<std::string> errors;
  validate_node(schema, value, schema, "$", errors);
  for (const auto& e : errors) MESSAGE(schema_name, " ", e);
  CHECK(errors.empty());
}

std::string result_schema_for(const std::string& command) {
  std::string name = command;
  for (auto& c : name) {
    if (c == '-') c = '_';
  }
  return name + "_result";
}

// Parses stdout as the envelope, checks the envelope schema and the shared
// metadata fields, and schema-checks the result payload when one is present.
json parse_envelope(const CliRun& run, const std::string& command) {
  REQUIRE_MESSAGE(!run.out.empty(), "no stdout from command ", command);
  const json env = json::parse(run.out);
  expect_valid("envelope", env);
  CHECK(env.at("command").get<std::string>() == command);
  CHECK(env.at("version").get<std::string>() == "1.0.0");
  if (!env.at("result").is_null()) {
    expect_valid(result_schema_for(command), env.at("result"));
  }
  return env;
}

DensityOperator qubit_state(double wx, double wy, double wz) {
  RealVector w(3);
  w << wx, wy, wz;
  return from_bloch(BlochVector(2, w), build_basis(2));
}

MeasurementDesign pauli_design() {
  const auto b = build_basis(2);
  return MeasurementDesign(2, {b.matrices[0], b.matrices[1], b.matrices[2]});
}

// Binary-effect design (I + sigma_k)/2: valid for sampling because every
// operator's spectrum lies in [0, 1].
MeasurementDesign effect_design() {
  const auto b = build_basis(2);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return MeasurementDesign(2, {0.5 * (id + b.matrices[0]), 0.5 * (id + b.matrices[1]),
                               0.5 * (id + b.matrices[2])});
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("basis command lists the orthogonal hermitian generators") {
  const CliRun run = run_cli("basis --dim 3");
  CHECK(run.exit_code == 0);
  const json env = parse_envelope(run, "basis");
  CHECK(env.at("seed").is_null());
  const json& result = env.at("result");
  CHECK(result.at("dim").get<int>() == 3);
  REQUIRE(result.at("matrices").size() == 8);
  for (const auto& m : result.at("matrices")) {
    REQUIRE(m.size() == 3);
    for (const auto& row : m) REQUIRE(row.size() == 3);
  }
}

TEST_CASE("mvcr radius solves the chi-square quantile to tolerance") {
  const CliRun run = run_cli("mvcr-radius --dim 2 --alpha 0.632120558829 --delta 1e-9");
  CHECK(run.exit_code == 0);
  const json env = parse_envelope(run, "mvcr-radius");
  CHECK(env.at("seed").is_null());
  const json& result = env.at("result");
  CHECK(result.at("radius").get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(result.at("error_bound").get<double>() < 1e-6);
  CHECK(result.at("evaluations").get<int>() >= 1);
  CHECK(env.at("diagnostics").contains("credibility_error"));
}

TEST_CASE("solve-balanced-sum returns a leading-positive partition or null") {
  const CliRun solvable = run_cli("solve-balanced-sum --a 3,5,8");
  CHECK(solvable.exit_code == 0);
  const json env = parse_envelope(solvable, "solve-balanced-sum");
  CHECK(env.at("seed").is_null());
  CHECK(env.at("result").at("partition") == json::array({1, 1, -1}));

  const CliRun unsolvable = run_cli("solve-balanced-sum --a 1,2");
  CHECK(unsolvable.exit_code == 0);
  const json env2 = parse_envelope(unsolvable, "solve-balanced-sum");
  CHECK(env2.at("result").at("partition").is_null());
}

TEST_CASE("encode-instance reports the documented constants for a=(1,1)") {
  const CliRun run = run_cli("encode-instance --a 1,1");
  CHECK(run.exit_code == 0);
  const json env = parse_envelope(run, "encode-instance");
  CHECK(env.at("seed").is_null());
  const json& r = env.at("result");
  CHECK(r.at("a") == json::array({1, 1}));
  CHECK(r.at("b1").get<double>() == doctest::Approx(0.0078125).epsilon(1e-12));
  CHECK(r.at("b2").get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(r.at("q").get<double>() == doctest::Approx(0.691751956652619).epsilon(1e-12));
  CHECK(r.at("r1").get<double>() == doctest::Approx(0.3463272191944193).epsilon(1e-12));
  CHECK(r.at("r2").get<double>() == doctest::Approx(0.1999521132295925).epsilon(1e-12));
  CHECK(r.at("c1").get<double>() == doctest::Approx(5.9921875).epsilon(1e-12));
  CHECK(r.at("c2").get<double>() == doctest::Approx(0.14853495793443566).epsilon(1e-12));
  CHECK(r.at("gap").get<double>() == doctest::Approx(0.015625).epsilon(1e-12));
  CHECK(r.at("eps_sq").get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.at("violation_bound").get<double>() ==
        doctest::Approx(0.00022576760987357006).epsilon(1e-9));
  CHECK(r.at("certify_margin").get<double>() ==
        doctest::Approx(7.808759293941362e-05).epsilon(1e-9));
  CHECK(std::abs(r.at("radius_gap").get<double>()) < 1e-9);
  const json& ellipsoid = r.at("ellipsoid");
  CHECK(ellipsoid.at("center").at("dim").get<int>() == 2);
  CHECK(ellipsoid.at("center").at("matrix")[0][0][0].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ellipsoid.at("center").at("matrix")[0][1][0].get<double>() ==
        doctest::Approx(0.1541240216736905).epsilon(1e-9));
}

TEST_CASE("verify-criterion resolves both reference instances") {
  const CliRun equal_run = run_cli("verify-criterion --a 1,2 --seed 7 --samples 1000000");
  CHECK(equal_run.exit_code == 0);
  const json env = parse_envelope(equal_run, "verify-criterion");
  CHECK(env.at("seed").get<long long>() == 7);
  const json& r = env.at("result");
  CHECK(r.at("criterion").get<std::string>() == "equal");
  CHECK(r.at("decision").get<std::string>() == "contained");
  CHECK(r.at("alpha").get<double>() > 0.0);
  CHECK(r.at("alpha").get<double>() < 1.0);
  CHECK(r.at("c").get<double>() >= 1.0);
  CHECK(env.at("diagnostics").at("violation_bound").get<double>() > 0.0);
  CHECK(env.at("diagnostics").at("certify_margin").get<double>() > 0.0);

  const CliRun greater_run = run_cli("verify-criterion --a 1,1 --seed 7 --samples 300000");
  CHECK(greater_run.exit_code == 0);
  const json env2 = parse_envelope(greater_run, "verify-criterion");
  const json& r2 = env2.at("result");
  CHECK(r2.at("criterion").get<std::string>() == "strictly-greater");
  CHECK(r2.at("decision").get<std::string>() == "violated");
  CHECK(r2.at("r_truncated").get<double>() > r2.at("r_unconstrained").get<double>());
}

TEST_CASE("identical seeded invocations are byte-identical") {
  const auto design_path = write_input("design.json", io::to_json(effect_design()));
  const auto state_path = write_input("state.json", io::to_json(qubit_state(0.1, -0.2, 0.25)));
  const std::string sim_args = "simulate --design " + design_path.string() + " --state " +
                               state_path.string() + " --shots 50000 --seed 31";
  const CliRun first = run_cli(sim_args);
  const CliRun second = run_cli(sim_args);
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  CHECK(first.out == second.out);

  const auto post_path =
      write_input("posterior.json",
                  io::to_json(GaussianPosterior(qubit_state(0.0, 0.0, 0.2),
                                                0.02 * 0.02 * RealMatrix::Identity(3, 3))));
  const std::string tm_args = "truncated-mvcr --posterior " + post_path.string() +
                              " --alpha 0.9 --seed 11 --samples 20000";
  const CliRun tm1 = run_cli(tm_args);
  const CliRun tm2 = run_cli(tm_args);
  CHECK(tm1.exit_code == 0);
  CHECK(tm1.out == tm2.out);
}

TEST_CASE("--out mirrors stdout byte for byte") {
  const fs::path mirror = work_dir() / "basis_out.json";
  const CliRun run = run_cli("basis --dim 2 --out " + mirror.string());
  CHECK(run.exit_code == 0);
  CHECK(read_file(mirror) == run.out);
  parse_envelope(run, "basis");
}

TEST_CASE("simulate output feeds linear inversion directly") {
  const json design_doc = io::to_json(effect_design());
  expect_valid("measurement_design", design_doc);
  const json state_doc = io::to_json(qubit_state(0.1, -0.2, 0.25));
  expect_valid("density_operator", state_doc);
  const auto design_path = write_input("design.json", design_doc);
  const auto state_path = write_input("state.json", state_doc);
  const fs::path sim_path = work_dir() / "sim_out.json";

  const CliRun sim = run_cli("simulate --design " + design_path.string() + " --state " +
                             state_path.string() + " --shots 400000 --seed 99 --out " +
                             sim_path.string());
  CHECK(sim.exit_code == 0);
  const json env = parse_envelope(sim, "simulate");
  CHECK(env.at("seed").get<long long>() == 99);
  const json& y_hat = env.at("result").at("y_hat");
  REQUIRE(y_hat.size() == 3);
  // Each effect (I + sigma_k)/2 has expectation w_k + 1/2 on the state.
  const std::vector<double> expected = {0.6, 0.3, 0.75};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(y_hat[k].get<double>() - expected[k]) < 0.01);
  }

  const CliRun inv = run_cli("linear-inversion --design " + design_path.string() +
                             " --frequencies " + sim_path.string());
  CHECK(inv.exit_code == 0);
  const json env2 = parse_envelope(inv, "linear-inversion");
  CHECK(env2.at("seed").is_null());
  const json& m = env2.at("result").at("matrix");
  CHECK(std::abs(m[0][0][0].get<double>() - 0.75) < 0.01);
  CHECK(std::abs(m[0][1][0].get<double>() - 0.1) < 0.01);
  CHECK(std::abs(m[0][1][1].get<double>() - 0.2) < 0.01);
}

TEST_CASE("confidence-ellipsoid pulls an outcome ball back to state space") {
  const auto design_path = write_input("design.json", io::to_json(pauli_design()));
  const json outcome_doc =
      io::to_json(OutcomeEllipsoid(RealVector::Zero(3), 4.0 * RealMatrix::Identity(3, 3)));
  expect_valid("outcome_ellipsoid", outcome_doc);
  const auto outcome_path = write_input("outcome.json", outcome_doc);

  const CliRun run = run_cli("confidence-ellipsoid --design " + design_path.string() +
                             " --outcome " + outcome_path.string());
  CHECK(run.exit_code == 0);
  const json env = parse_envelope(run, "confidence-ellipsoid");
  CHECK(env.at("seed").is_null());
  const json& r = env.at("result");
  // Outcome shape 4I with outcome map 2I pulls back to B' = 16I, so every
  // state-space radius is 1/4 and the center is the maximally mixed state.
  for (const auto& radius : r.at("radii")) {
    CHECK(radius.get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  }
  CHECK(r.at("center").at("matrix")[0][0][0].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.at("center").at("matrix")[0][1][0].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("check-containment certifies and refutes spheres around the mixed state") {
  const DensityOperator mixed = qubit_state(0.0, 0.0, 0.0);
  const json inside_doc = io::to_json(
      StateEllipsoid(mixed, RealVector::Constant(3, 0.25), RealMatrix::Identity(3, 3)));
  expect_valid("state_ellipsoid", inside_doc);
  const auto inside_path = write_input("inside.json", inside_doc);
  const CliRun inside = run_cli("check-containment --ellipsoid " + inside_path.string() +
                                " --seed 5");
  CHECK(inside.exit_code == 0);
  const json env = parse_envelope(inside, "check-containment");
  CHECK(env.at("seed").get<long long>() == 5);
  CHECK(env.at("result").at("status").get<std::string>() == "contained-certified");
  CHECK(env.at("result").at("witness").is_null());

  const auto outside_path = write_input(
      "outside.json", io::to_json(StateEllipsoid(mixed, RealVector::Constant(3, 0.75),
                                                 RealMatrix::Identity(3, 3))));
  const CliRun outside = run_cli("check-containment --ellipsoid " + outside_path.string() +
                                 " --seed 5");
  CHECK(outside.exit_code == 0);
  const json env2 = parse_envelope(outside, "check-containment");
  const json& verdict = env2.at("result");
  CHECK(verdict.at("status").get<std::string>() == "violated");
  REQUIRE(!verdict.at("witness").is_null());
  CHECK(verdict.at("witness").at("min_eig").get<double>() < 0.0);
  const json& u = verdict.at("witness").at("u");
  double norm_sq = 0.0;
  for (const auto& entry : u) norm_sq += entry.get<double>() * entry.get<double>();
  CHECK(std::sqrt(norm_sq) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("decide-geometry resolves instances from raw and enveloped inputs") {
  const json solvable_doc = json{{"a", {1, 1}}};
  expect_valid("balanced_sum_instance", solvable_doc);
  const auto solvable_path = write_input("inst_11.json", solvable_doc);
  const CliRun solvable = run_cli("decide-geometry " + solvable_path.string());
  CHECK(solvable.exit_code == 0);
  const json env = parse_envelope(solvable, "decide-geometry");
  CHECK(env.at("seed").get<long long>() == 0);
  CHECK(env.at("result").at("solvable").get<bool>() == true);
  CHECK(env.at("result").at("containment").get<std::string>() == "violated");

  const auto unsolvable_path = write_input("inst_12.json", json{{"a", {1, 2}}});
  const CliRun unsolvable = run_cli("decide-geometry " + unsolvable_path.string() + " --seed 4");
  CHECK(unsolvable.exit_code == 0);
  const json env2 = parse_envelope(unsolvable, "decide-geometry");
  CHECK(env2.at("seed").get<long long>() == 4);
  CHECK(env2.at("result").at("solvable").get<bool>() == false);
  CHECK(env2.at("result").at("containment").get<std::string>() == "contained");

  // encode-instance output mirrored with --out is accepted directly because
  // enveloped documents are unwrapped to their result payload.
  const fs::path enc_path = work_dir() / "encoded_11.json";
  const CliRun enc = run_cli("encode-instance --a 1,1 --out " + enc_path.string());
  CHECK(enc.exit_code == 0);
  const CliRun from_envelope = run_cli("decide-geometry " + enc_path.string());
  CHECK(from_envelope.exit_code == 0);
  const json env3 = parse_envelope(from_envelope, "decide-geometry");
  CHECK(env3.at("result").at("solvable").get<bool>() == true);
}

TEST_CASE("truncated-mvcr reports the normalization it used") {
  const json post_doc = io::to_json(GaussianPosterior(
      qubit_state(0.0, 0.0, 0.2), 0.02 * 0.02 * RealMatrix::Identity(3, 3)));
  expect_valid("gaussian_posterior", post_doc);
  const auto post_path = write_input("posterior.json", post_doc);
  const CliRun run = run_cli("truncated-mvcr --posterior " + post_path.string() +
                             " --alpha 0.9 --seed 11 --samples 50000");
  CHECK(run.exit_code == 0);
  const json env = parse_envelope(run, "truncated-mvcr");
  CHECK(env.at("seed").get<long long>() == 11);
  const json& r = env.at("result");
  CHECK(r.at("alpha").get<double>() == doctest::Approx(0.9));
  CHECK(r.at("criterion_holds").get<std::string>() == "equal");
  CHECK(r.at("c").get<double>() >= 1.0 - 3.0 * r.at("c_error").get<double>());
  CHECK(r.at("r_unconstrained").get<double>() > 0.0);
  CHECK(run.err.find("normalization: C = ") != std::string::npos);
}

TEST_CASE("input failures exit with code 2 and a structured error") {
  const CliRun missing_file = run_cli("linear-inversion --design " +
                                      (work_dir() / "nope.json").string() + " --frequencies " +
                                      (work_dir() / "nope.json").string());
  CHECK(missing_file.exit_code == 2);
  const json env = parse_envelope(missing_file, "linear-inversion");
  CHECK(env.at("result").is_null());
  CHECK(env.at("error").at("kind").get<std::string>() == "input");
  CHECK(!env.at("error").at("code").get<std::string>().empty());

  const fs::path garbage = work_dir() / "garbage.json";
  std::ofstream(garbage) << "this is not json {{{";
  const CliRun malformed = run_cli("linear-inversion --design " + garbage.string() +
                                   " --frequencies " + garbage.string());
  CHECK(malformed.exit_code == 2);
  const json env2 = parse_envelope(malformed, "linear-inversion");
  CHECK(env2.at("error").at("kind").get<std::string>() == "input");

  const CliRun bad_alpha = run_cli("mvcr-radius --dim 2 --alpha 1.5");
  CHECK(bad_alpha.exit_code == 2);
  const json env3 = parse_envelope(bad_alpha, "mvcr-radius");
  CHECK(env3.at("error").at("code").get<std::string>() == "invalid-parameter");
  CHECK(env3.at("error").at("kind").get<std::string>() == "input");

  // Option-level failures are caught by the argument parser before any
  // envelope is produced: missing required --seed and unknown subcommands.
  const auto inside_path = write_input(
      "inside2.json", io::to_json(StateEllipsoid(qubit_state(0.0, 0.0, 0.0),
                                                 RealVector::Constant(3, 0.25),
                                                 RealMatrix::Identity(3, 3))));
  const CliRun no_seed = run_cli("check-containment --ellipsoid " + inside_path.string());
  CHECK(no_seed.exit_code == 2);
  const CliRun unknown = run_cli("frobnicate --dim 2");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("an unresolvable normalization exits with code 3 as a numeric error") {
  // A posterior whose mean lies far outside the PSD cone with a tiny
  // covariance never produces an accepted sample, so the normalization
  // constant cannot be estimated.
  const auto far_path = write_input(
      "far_posterior.json",
      io::to_json(GaussianPosterior(qubit_state(0.0, 0.0, 5.0),
                                    1e-8 * RealMatrix::Identity(3, 3))));
  const CliRun run = run_cli("truncated-mvcr --posterior " + far_path.string() +
                             " --alpha 0.5 --seed 3 --samples 2000");
  CHECK(run.exit_code == 3);
  const json env = parse_envelope(run, "truncated-mvcr");
  CHECK(env.at("result").is_null());
  CHECK(env.at("error").at("kind").get<std::string>() == "numeric");
  CHECK(env.at("error").at("code").get<std::string>() == "normalization-unresolvable");
  CHECK(env.at("error").at("message").get<std::string>().find("one-sided 95% bound") !=
        std::string::npos);
}

}  // TEST_SUITE("cli")
