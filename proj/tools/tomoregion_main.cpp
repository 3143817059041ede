// Command-line front end: every subcommand reads JSON inputs, runs one library
// operation, and prints a JSON envelope {"command", "version", "seed",
// "result", "diagnostics"} on stdout. Logs go to stderr. Exit codes: 0 for any
// computed result (including unresolved verdicts), 2 for input errors, 3 for
// internal numeric failures. Stochastic subcommands require an explicit
// --seed so every run is reproducible; identical configurations produce
// byte-identical stdout.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tomoregion/bayes.hpp"
#include "tomoregion/ellipsoid.hpp"
#include "tomoregion/errors.hpp"
#include "tomoregion/hardness.hpp"
#include "tomoregion/specialfn.hpp"
#include "tomoregion/statespace.hpp"
#include "tomoregion/support/json_io.hpp"
#include "tomoregion/tomography.hpp"

namespace {

using tomoregion::io::Json;

constexpr const char* kVersion = "1.0.0";

struct Invocation {
  std::string command;
  std::optional<std::uint64_t> seed;
  Json result;
  Json diagnostics = Json::object();
};

// Accepts a previous run's --out file wherever a bare document is expected:
// a JSON object carrying both "command" and "result" is unwrapped to "result".
Json load_input(const std::string& path) {
  Json j = tomoregion::io::load_json_file(path);
  if (j.is_object() && j.contains("command") && j.contains("result")) {
    return j["result"];
  }
  return j;
}

// Frequencies may arrive as a bare array, wrapped as {"values": [...]}, or
// inside a simulate result as {"y_hat": [...]}.
tomoregion::RealVector parse_frequencies(const Json& j) {
  if (j.is_object()) {
    if (j.contains("values")) return tomoregion::io::parse_real_vector(j["values"]);
    if (j.contains("y_hat")) return tomoregion::io::parse_real_vector(j["y_hat"]);
  }
  return tomoregion::io::parse_real_vector(j);
}

void emit(const Json& envelope, const std::string& out_path) {
  const std::string payload = envelope.dump(2) + "\n";
  std::fwrite(payload.data(), 1, payload.size(), stdout);
  std::fflush(stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw tomoregion::InvalidInputError("cannot open output file: " + out_path);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error regions for quantum state tomography under positivity constraints"};
  app.require_subcommand(1);
  std::string out_path;
  Invocation inv;

  // --- basis ---------------------------------------------------------------
  int basis_dim = 2;
  auto* basis_cmd = app.add_subcommand("basis", "Print the generalized Bloch basis");
  basis_cmd->add_option("--dim", basis_dim, "Hilbert space dimension")->required();
  basis_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  basis_cmd->callback([&] {
    inv.command = "basis";
    inv.result = tomoregion::io::to_json(tomoregion::build_basis(basis_dim));
  });

  // --- linear-inversion ------------------------------------------------------
  std::string design_path;
  std::string frequencies_path;
  auto* li_cmd = app.add_subcommand("linear-inversion",
                                    "Least-squares state estimate from frequencies");
  li_cmd->add_option("--design", design_path, "Measurement design JSON")->required();
  li_cmd->add_option("--frequencies", frequencies_path, "Frequency vector JSON")->required();
  li_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  li_cmd->callback([&] {
    inv.command = "linear-inversion";
    const auto design =
        tomoregion::io::parse_measurement_design(load_input(design_path));
    const auto y = parse_frequencies(load_input(frequencies_path));
    inv.result = tomoregion::io::to_json(tomoregion::linear_inversion(design, y));
  });

  // --- confidence-ellipsoid ---------------------------------------------------
  std::string outcome_path;
  auto* ce_cmd = app.add_subcommand(
      "confidence-ellipsoid", "Map an outcome-space ellipsoid to a state-space ellipsoid");
  ce_cmd->add_option("--design", design_path, "Measurement design JSON")->required();
  ce_cmd->add_option("--outcome", outcome_path, "Outcome ellipsoid JSON")->required();
  ce_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  ce_cmd->callback([&] {
    inv.command = "confidence-ellipsoid";
    const auto design =
        tomoregion::io::parse_measurement_design(load_input(design_path));
    const auto outcome =
        tomoregion::io::parse_outcome_ellipsoid(load_input(outcome_path));
    inv.result = tomoregion::io::to_json(tomoregion::confidence_ellipsoid(design, outcome));
  });

  // --- check-containment ------------------------------------------------------
  std::string ellipsoid_path;
  std::uint64_t seed = 0;
  tomoregion::ContainmentOptions copts;
  auto* cc_cmd =
      app.add_subcommand("check-containment", "Decide whether an ellipsoid stays PSD");
  cc_cmd->add_option("--ellipsoid", ellipsoid_path, "State ellipsoid JSON")->required();
  cc_cmd->add_option("--seed", seed, "Seed for the random restarts")->required();
  cc_cmd->add_option("--restarts", copts.restarts, "Random restarts");
  cc_cmd->add_option("--grid-depth", copts.grid_depth, "Grid resolution for d <= 3");
  cc_cmd->add_option("--certify-margin", copts.certify_margin,
                     "Probed minimum required to certify containment");
  cc_cmd->add_flag("--restrict-real", copts.restrict_real,
                   "Search real state vectors only (symmetric centers)");
  cc_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  cc_cmd->callback([&] {
    inv.command = "check-containment";
    inv.seed = seed;
    copts.seed = seed;
    const auto e =
        tomoregion::io::parse_state_ellipsoid(load_input(ellipsoid_path));
    inv.result = tomoregion::io::to_json(tomoregion::check_containment(e, copts));
  });

  // --- encode-instance ---------------------------------------------------------
  std::vector<long long> a_entries;
  auto* enc_cmd =
      app.add_subcommand("encode-instance", "Encode a balanced-sum instance as an ellipsoid");
  enc_cmd->add_option("--a", a_entries, "Comma-separated positive integers")
      ->required()
      ->delimiter(',');
  enc_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  enc_cmd->callback([&] {
    inv.command = "encode-instance";
    inv.result = tomoregion::io::to_json(
        tomoregion::encode(tomoregion::BalancedSumInstance(a_entries)));
  });

  // --- solve-balanced-sum --------------------------------------------------------
  auto* solve_cmd =
      app.add_subcommand("solve-balanced-sum", "Search for a balancing sign assignment");
  solve_cmd->add_option("--a", a_entries, "Comma-separated positive integers")
      ->required()
      ->delimiter(',');
  solve_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  solve_cmd->callback([&] {
    inv.command = "solve-balanced-sum";
    const auto signs =
        tomoregion::solve_balanced_sum(tomoregion::BalancedSumInstance(a_entries));
    inv.result = Json{{"partition", signs.has_value() ? Json(*signs) : Json(nullptr)}};
  });

  // --- decide-geometry -------------------------------------------------------------
  std::string encoding_path;
  auto* dg_cmd = app.add_subcommand(
      "decide-geometry", "Decide solvability through the encoded ellipsoid's geometry");
  dg_cmd->add_option("encoding", encoding_path, "Encoding JSON (from encode-instance)")
      ->required();
  dg_cmd->add_option("--seed", seed, "Seed for the random restarts (default 0)");
  dg_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  dg_cmd->callback([&] {
    inv.command = "decide-geometry";
    inv.seed = seed;
    const auto instance = tomoregion::io::parse_balanced_sum_instance(
        load_input(encoding_path));
    const auto enc = tomoregion::encode(instance);
    const bool solvable = tomoregion::decide_via_geometry(enc, seed);
    inv.result = Json{{"solvable", solvable},
                      {"containment", solvable ? "violated" : "contained"}};
    inv.diagnostics["certify_margin"] = enc.certify_margin;
    inv.diagnostics["violation_bound"] = enc.violation_bound;
  });

  // --- mvcr-radius ---------------------------------------------------------------
  int gauss_dim = 0;
  double alpha = 0.0;
  double delta = 1e-9;
  auto* mvcr_cmd = app.add_subcommand(
      "mvcr-radius", "Radius of the alpha-mass ball of a standard Gaussian");
  mvcr_cmd->add_option("--dim", gauss_dim, "Gaussian dimension N")->required();
  mvcr_cmd->add_option("--alpha", alpha, "Credibility level in (0, 1)")->required();
  mvcr_cmd->add_option("--delta", delta, "Credibility accuracy (1/delta integer)");
  mvcr_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  mvcr_cmd->callback([&] {
    inv.command = "mvcr-radius";
    const auto sol = tomoregion::mvcr_radius(gauss_dim, alpha, delta);
    inv.result = Json{
        {"radius", sol.radius},
        {"evaluations", sol.evaluations},
        {"error_bound", std::max(sol.radius_hi - sol.radius, sol.radius - sol.radius_lo)}};
    inv.diagnostics["credibility_error"] = sol.credibility_error;
  });

  // --- truncated-mvcr -----------------------------------------------------------
  std::string posterior_path;
  std::int64_t samples = 1'000'000;
  auto* tm_cmd = app.add_subcommand(
      "truncated-mvcr", "PSD-truncated credible radius of a Gaussian posterior");
  tm_cmd->add_option("--posterior", posterior_path, "Gaussian posterior JSON")->required();
  tm_cmd->add_option("--alpha", alpha, "Credibility level in (0, 1)")->required();
  tm_cmd->add_option("--samples", samples, "Monte Carlo sample count");
  tm_cmd->add_option("--seed", seed, "Sampling seed")->required();
  tm_cmd->add_option("--delta", delta, "Accuracy of the unconstrained inversion");
  tm_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  tm_cmd->callback([&] {
    inv.command = "truncated-mvcr";
    inv.seed = seed;
    const auto post = tomoregion::io::parse_gaussian_posterior(
        load_input(posterior_path));
    const auto tpost = tomoregion::estimate_normalization(post, samples, seed);
    std::clog << "normalization: C = " << tpost.c << " +/- " << tpost.c_error << "\n";
    tomoregion::QuantileOptions qopts;
    qopts.radius_delta = delta;
    qopts.containment.seed = seed;
    const auto pair = tomoregion::truncated_mvcr_radius(tpost, alpha, samples, seed, qopts);
    inv.result = tomoregion::io::to_json(pair);
    inv.result["c"] = tpost.c;
    inv.result["c_error"] = tpost.c_error;
  });

  // --- verify-criterion -----------------------------------------------------------
  auto* vc_cmd = app.add_subcommand(
      "verify-criterion",
      "Compare truncated and unconstrained credible radii for an encoded instance");
  vc_cmd->add_option("--a", a_entries, "Comma-separated positive integers")
      ->required()
      ->delimiter(',');
  vc_cmd->add_option("--seed", seed, "Sampling seed")->required();
  vc_cmd->add_option("--samples", samples, "Monte Carlo sample count");
  vc_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  vc_cmd->callback([&] {
    inv.command = "verify-criterion";
    inv.seed = seed;
    const auto enc = tomoregion::encode(tomoregion::BalancedSumInstance(a_entries));
    tomoregion::CriterionBudgets budgets;
    budgets.samples = samples;
    budgets.seed = seed;
    budgets.radius_gap = tomoregion::criterion_radius_gap(enc);
    budgets.certify_margin = enc.certify_margin;
    const auto report = tomoregion::evaluate_containment_criterion(enc.ellipsoid, budgets);
    inv.result = Json{{"criterion", tomoregion::io::to_string(report.radii.criterion_holds)},
                      {"decision", tomoregion::io::to_string(report.decision)},
                      {"alpha", report.alpha},
                      {"c", report.c},
                      {"c_error", report.c_error},
                      {"r_unconstrained", report.radii.r_unconstrained},
                      {"r_truncated", report.radii.r_truncated},
                      {"r_error", report.radii.r_error},
                      {"radius_gap", budgets.radius_gap}};
    inv.diagnostics["violation_bound"] = enc.violation_bound;
    inv.diagnostics["certify_margin"] = enc.certify_margin;
  });

  // --- simulate -------------------------------------------------------------------
  std::string state_path;
  std::int64_t shots = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Sample measurement frequencies");
  sim_cmd->add_option("--design", design_path, "Measurement design JSON")->required();
  sim_cmd->add_option("--state", state_path, "True state JSON")->required();
  sim_cmd->add_option("--shots", shots, "Shots per setting")->required();
  sim_cmd->add_option("--seed", seed, "Sampling seed")->required();
  sim_cmd->add_option("--out", out_path, "Mirror stdout into this file");
  sim_cmd->callback([&] {
    inv.command = "simulate";
    inv.seed = seed;
    const auto design =
        tomoregion::io::parse_measurement_design(load_input(design_path));
    const auto rho0 =
        tomoregion::io::parse_density_operator(load_input(state_path));
    inv.result =
        tomoregion::io::to_json(tomoregion::simulate_counts(design, rho0, shots, seed));
  });

  auto envelope = [&](const Json& result, const Json& diagnostics) {
    return Json{{"command", inv.command},
                {"version", kVersion},
                {"seed", inv.seed.has_value() ? Json(*inv.seed) : Json(nullptr)},
                {"result", result},
                {"diagnostics", diagnostics}};
  };
  auto emit_error = [&](const tomoregion::Error& err) {
    Json env = envelope(nullptr, Json::object());
    env["error"] = Json{
        {"code", err.code()},
        {"kind", err.kind() == tomoregion::ErrorKind::kInput ? "input" : "numeric"},
        {"message", err.what()}};
    emit(env, out_path);
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const tomoregion::Error& e) {
    emit_error(e);
    return e.kind() == tomoregion::ErrorKind::kInput ? 2 : 3;
  } catch (const std::exception& e) {
    Json env = envelope(nullptr, Json::object());
    env["error"] = Json{{"code", "internal"}, {"kind", "numeric"}, {"message", e.what()}};
    emit(env, out_path);
    return 3;
  }

  try {
    emit(envelope(inv.result, inv.diagnostics), out_path);
  } catch (const tomoregion::Error& e) {
    std::clog << e.what() << "\n";
    return e.kind() == tomoregion::ErrorKind::kInput ? 2 : 3;
  }
  return 0;
}
