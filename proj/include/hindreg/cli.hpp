#pragma once

// In-process command runner behind tools/hindreg_cli.cpp. Every command
// returns an exit code and a trace:
//
//   {"command": [...], "exit_code": e, "inputs_digest": "fnv1a64:...",
//    "outcome": {...}, "wall_clock_ms": t}
//
// wall_clock_ms (here and inside reports) is dropped under --no-timing, which
// makes traces byte-identical across runs.

#include <algorithm>
#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hindreg/colorings.hpp"
#include "hindreg/config.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/principles.hpp"
#include "hindreg/reductions.hpp"
#include "hindreg/serialize.hpp"
#include "hindreg/solvers.hpp"

namespace hindreg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitContradiction = 3;

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json trace;
  std::string text() const { return canonical_dump(trace); }
};

namespace detail {

struct CliState {
  bool no_timing = false;
  std::string trace_path;
  std::optional<unsigned> bound_log;
  std::uint64_t node_limit = kDefaultNodeLimit;

  std::string reduction, instance_path, coloring_path, solution_path, out_path, set_text, tuple_text;
  std::optional<std::size_t> size;
  std::optional<Natural> point;
  std::size_t cap = 3;
  std::optional<unsigned> min_lambda, last_mu;
  bool support_shape = false;

  nlohmann::json inputs = nlohmann::json::object();
};

inline std::vector<Natural> parse_list(const std::string& s, const std::string& flag) {
  std::vector<Natural> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError(flag + ": '" + s + "' is not a comma-separated list of naturals");
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw ValidationError(flag + " is empty");
  return out;
}

inline nlohmann::json load(CliState& st, const std::string& role, const std::string& path) {
  auto j = parse_json(read_text(path), role);
  st.inputs[role] = j;
  return j;
}

inline Natural element_bound(const CliState& st) {
  return pow2(st.bound_log ? checked_bound_log(*st.bound_log) : default_bound_log());
}

inline SearchBudget budget_of(const CliState& st) {
  SearchBudget b;
  b.element_bound = element_bound(st);
  b.node_limit = st.node_limit;
  if (st.size) b.set_size = *st.size;
  return b;
}

inline void maybe_write(const CliState& st, const nlohmann::json& j) {
  if (!st.out_path.empty()) write_text(st.out_path, canonical_dump(j));
}

inline nlohmann::json check_to_json(const Check& c) {
  nlohmann::json j{{"ok", c.ok}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline int cmd_construct(CliState& st, nlohmann::json& outcome) {
  const auto& spec = find_reduction(st.reduction);
  const auto x = read_instance_file(load(st, "instance", st.instance_path));
  if (x.principle != spec.source)
    throw ValidationError("reduction '" + spec.name + "' expects a " + spec.source + " instance");
  const auto t = spec.phi(x, element_bound(st));
  const auto valid = validate_instance(t);
  outcome = {{"reduction", spec.name}, {"target", instance_to_json(t)}, {"target_instance_valid", check_to_json(valid)}};
  maybe_write(st, instance_file(t));
  return valid ? kExitOk : kExitValidation;
}

inline int cmd_solve(CliState& st, nlohmann::json& outcome) {
  const auto x = read_instance_file(load(st, "instance", st.instance_path));
  if (!st.size) throw ValidationError("--size is required");
  const std::size_t size = *st.size;
  const SearchBudget bud = budget_of(st);
  SolverOutcome out;
  const std::string& p = x.principle;
  if (p == "rt1") {
    out = solve_rt1(x.unary(), x.param("k"), FiniteNatSet::range(0, x.unary().domain_bound()), size);
  } else if (p == "rt") {
    const auto& f = x.tuple();
    auto k = x.optional_param("k");
    if (!k) k = f.range_bound();
    if (!k) throw ValidationError("rt instance needs k or a coloring with a range bound");
    out = solve_rt(f, *k, FiniteNatSet::range(0, f.domain_bound()), size, bud.node_limit);
  } else if (p == "reg") {
    const auto& f = x.tuple();
    out = solve_reg(f, x.ground().value_or(FiniteNatSet::range(0, f.domain_bound())), size, bud.node_limit);
  } else if (p == "ht") {
    out = solve_ht(x.unary(), x.mode(), size, bud, x.apart());
  } else if (p == "lreght") {
    HtConstraints cons;
    if (st.min_lambda) cons.min_lambda_h0 = *st.min_lambda;
    cons.last_mu_at_least = st.last_mu;
    cons.support_shape = st.support_shape;
    out = solve_lambda_reg_ht(x.unary(), x.mode(), size, bud, cons, x.apart());
  } else {
    throw ValidationError("no direct solver for principle '" + p + "'");
  }
  outcome = to_json(out);
  outcome["principle"] = p;
  outcome["size"] = size;
  if (out.found()) {
    outcome["solution_valid"] = check_to_json(validate_solution(x, *out.solution));
    maybe_write(st, solution_file(*out.solution));
  }
  return out.status == SolverStatus::BudgetExceeded ? kExitBudget : kExitOk;
}

inline int cmd_classify(CliState& st, nlohmann::json& outcome) {
  const auto c = read_coloring_file(load(st, "coloring", st.coloring_path));
  const FiniteNatSet h = FiniteNatSet::from_unsorted(parse_list(st.set_text, "--set"));
  st.inputs["set"] = h.elements();
  CanonicalCaseSet cases;
  if (const auto* u = std::get_if<UnaryColoring>(&c)) {
    st.inputs["cap"] = st.cap;
    cases = classify_canonical_fs(*u, h, st.cap);
    outcome["family"] = "fs";
    outcome["cap"] = st.cap;
  } else {
    cases = classify_canonical_tuples(std::get<TupleColoring>(c), h);
    outcome["family"] = "tuples";
  }
  outcome["cases"] = cases.cases();
  outcome["text"] = to_string(cases);
  return kExitOk;
}

inline int cmd_reduce(CliState& st, nlohmann::json& outcome) {
  const auto& spec = find_reduction(st.reduction);
  const auto x = read_instance_file(load(st, "instance", st.instance_path));
  if (x.principle != spec.source)
    throw ValidationError("reduction '" + spec.name + "' expects a " + spec.source + " instance");
  const auto t = spec.phi(x, element_bound(st));
  if (auto v = validate_instance(t); !v) throw ValidationError("phi output invalid: " + v.detail);
  const auto y = read_solution_file(load(st, "solution", st.solution_path));
  const auto* h = std::get_if<FiniteNatSet>(&y);
  if (!h) throw ValidationError("target solution must be a finite set");
  outcome["reduction"] = spec.name;
  outcome["target_solution"] = h->elements();
  const auto tv = validate_solution(t, *h);
  outcome["target_solution_valid"] = check_to_json(tv);
  if (!tv) return kExitValidation;
  PrincipleSolution z;
  try {
    z = spec.psi(&x, t, *h);
  } catch (const InsufficientData& e) {
    outcome["preconditions"] = check_to_json(fail(e.what()));
    return kExitValidation;
  }
  outcome["preconditions"] = check_to_json({});
  outcome["psi_output"] = solution_to_json(z);
  const auto sv = validate_solution(x, z);
  outcome["solution_valid"] = check_to_json(sv);
  maybe_write(st, solution_file(z));
  return sv ? kExitOk : kExitValidation;
}

inline int cmd_verify(CliState& st, nlohmann::json& outcome) {
  const auto x = read_instance_file(load(st, "instance", st.instance_path), false);
  VerifyOptions opts;
  opts.size = st.size;
  opts.min_lambda_h0 = st.min_lambda;
  const auto r = verify_reduction(st.reduction, x, budget_of(st), opts);
  outcome = to_json(r, !st.no_timing);
  if (r.solver && r.solver->status == SolverStatus::BudgetExceeded) return kExitBudget;
  return r.all_verdicts_true() ? kExitOk : kExitValidation;
}

inline int cmd_eval(CliState& st, nlohmann::json& outcome) {
  const auto c = read_coloring_file(load(st, "coloring", st.coloring_path));
  if (const auto* u = std::get_if<UnaryColoring>(&c)) {
    if (!st.point) throw ValidationError("--point is required for a unary coloring");
    st.inputs["point"] = *st.point;
    outcome = {{"point", *st.point}, {"value", (*u)(*st.point)}};
  } else {
    if (st.tuple_text.empty()) throw ValidationError("--tuple is required for a tuple coloring");
    const auto t = parse_list(st.tuple_text, "--tuple");
    st.inputs["tuple"] = t;
    outcome = {{"tuple", t}, {"value", std::get<TupleColoring>(c)(t)}};
  }
  return kExitOk;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline CommandResult run_command(const std::vector<std::string>& args) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::CliState st;
  CLI::App app{"hindreg: regressive Hindman and Ramsey principles at desk scale"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&st](CLI::App* sub) {
    sub->add_flag("--no-timing", st.no_timing, "Omit wall-clock fields from the trace");
    sub->add_option("--trace", st.trace_path, "Also write the trace to this file");
    sub->add_option("--bound", st.bound_log, "Element bound exponent L (bound 2^L)");
    sub->add_option("--node-limit", st.node_limit, "Search node budget");
  };

  auto* construct = app.add_subcommand("construct", "Build the target instance of a reduction");
  construct->add_option("--reduction", st.reduction)->required();
  construct->add_option("--instance", st.instance_path)->required();
  construct->add_option("--out", st.out_path);
  common(construct);

  auto* solve = app.add_subcommand("solve", "Search for a finite solution of an instance");
  solve->add_option("--instance", st.instance_path)->required();
  solve->add_option("--size", st.size)->required();
  solve->add_option("--min-lambda", st.min_lambda);
  solve->add_option("--last-mu", st.last_mu);
  solve->add_flag("--support-shape", st.support_shape);
  solve->add_option("--out", st.out_path);
  common(solve);

  auto* classify = app.add_subcommand("classify", "Canonical case classification on a finite set");
  classify->add_option("--coloring", st.coloring_path)->required();
  classify->add_option("--set", st.set_text)->required();
  classify->add_option("--cap", st.cap, "Largest number of summands (unary colorings)");
  common(classify);

  auto* reduce = app.add_subcommand("reduce", "Phi, then psi on a supplied target solution");
  reduce->add_option("--reduction", st.reduction)->required();
  reduce->add_option("--instance", st.instance_path)->required();
  reduce->add_option("--solution", st.solution_path)->required();
  reduce->add_option("--out", st.out_path);
  common(reduce);

  auto* verify = app.add_subcommand("verify", "Full round trip through a registered reduction");
  verify->add_option("--reduction", st.reduction)->required();
  verify->add_option("--instance", st.instance_path)->required();
  verify->add_option("--size", st.size);
  verify->add_option("--min-lambda", st.min_lambda);
  common(verify);

  auto* eval = app.add_subcommand("eval", "Evaluate a coloring at a point or tuple");
  eval->add_option("--coloring", st.coloring_path)->required();
  eval->add_option("--point", st.point);
  eval->add_option("--tuple", st.tuple_text);
  common(eval);

  CommandResult res;
  nlohmann::json outcome = nlohmann::json::object();
  std::string command_name;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    command_name = app.get_subcommands().front()->get_name();
    if (command_name == "construct") res.exit_code = detail::cmd_construct(st, outcome);
    else if (command_name == "solve") res.exit_code = detail::cmd_solve(st, outcome);
    else if (command_name == "classify") res.exit_code = detail::cmd_classify(st, outcome);
    else if (command_name == "reduce") res.exit_code = detail::cmd_reduce(st, outcome);
    else if (command_name == "verify") res.exit_code = detail::cmd_verify(st, outcome);
    else res.exit_code = detail::cmd_eval(st, outcome);
  } catch (const CLI::CallForHelp&) {
    outcome = {{"help", app.help()}};
    res.exit_code = kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    outcome = {{"help", app.help("", CLI::AppFormatMode::All)}};
    res.exit_code = kExitOk;
  } catch (const CLI::ParseError& e) {
    outcome = {{"error", std::string("usage: ") + e.what()}};
    res.exit_code = kExitValidation;
  } catch (const InternalContradiction& e) {
    outcome = {{"error", std::string("internal contradiction: ") + e.what()}};
    res.exit_code = kExitContradiction;
  } catch (const Error& e) {
    outcome = {{"error", e.what()}};
    res.exit_code = kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    outcome = {{"error", std::string("schema error: ") + e.what()}};
    res.exit_code = kExitValidation;
  }

  res.trace["command"] = args;
  res.trace["exit_code"] = res.exit_code;
  res.trace["inputs_digest"] = digest_hex(canonical_dump(st.inputs));
  res.trace["outcome"] = outcome;
  if (!st.no_timing)
    res.trace["wall_clock_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!st.trace_path.empty()) {
    try {
      write_text(st.trace_path, res.text());
    } catch (const Error& e) {
      res.trace["trace_write_error"] = e.what();
      if (res.exit_code == kExitOk) res.exit_code = kExitValidation;
    }
  }
  return res;
}

}  // namespace hindreg
