// ews: command-line front end for witness construction, spectral reports,
// product-vector optimization, NPT detection and the verification suites.
//
// Exit codes: 0 success, 1 a check or computation failed, 2 usage or input
// error. Randomness comes only from --seed (default 42).

#include "ews/blockpos.hpp"
#include "ews/error.hpp"
#include "ews/matrix_io.hpp"
#include "ews/states.hpp"
#include "ews/verify.hpp"
#include "ews/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <map>

namespace {

using namespace ews;
using ojson = nlohmann::ordered_json;

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

int exit_code_for(ErrorCode c) {
  switch (c) {
  case ErrorCode::NoConvergence:
  case ErrorCode::OptFailed:
  case ErrorCode::NoConvergedRestart:
  case ErrorCode::EpsilonVanishes:
  case ErrorCode::OrthogonalityFail:
  case ErrorCode::BoostDenominatorZero:
    return kCheckFailed;
  default:
    return kUsage;
  }
}

void emit(const std::string &out, const std::string &text) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

ojson complex_array(std::span<const cplx> v) {
  auto a = ojson::array();
  for (const auto &x : v) a.push_back({x.real(), x.imag()});
  return a;
}

ojson opt_json(const OptResult &r) {
  return {{"value", r.value},
          {"vec_a", complex_array(r.vec_a)},
          {"vec_b", complex_array(r.vec_b)},
          {"best_restart", r.best_restart},
          {"restarts_tried", r.restarts_tried},
          {"restarts_converged", r.restarts_converged},
          {"spread", r.spread}};
}

std::string csv_row(const std::string &q, double v, const std::string &passed = "",
                    const std::string &attained = "", const std::string &bound = "") {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return q + ',' + buf + ',' + passed + ',' + attained + ',' + bound + '\n';
}

std::string report_text(const SpectrumReport &r, ReportFormat f) {
  if (f == ReportFormat::csv) {
    std::string s = "quantity,value,passed,attained,bound\n";
    s += csv_row("lambda1", r.lambda1);
    s += csv_row("lambda_min", r.lambda_min);
    s += csv_row("negativity", r.negativity);
    s += csv_row("fro_sq", r.fro_sq);
    s += csv_row("neg_count", static_cast<double>(r.neg_count));
    s += csv_row("is_ew", r.is_ew_candidate ? 1.0 : 0.0);
    for (const auto &b : r.bounds) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", b.bound);
      s += csv_row(b.name, b.measured, b.passed ? "true" : "false",
                   b.attained ? "true" : "false", buf);
    }
    return s;
  }
  ojson doc;
  doc["m"] = r.m;
  doc["n"] = r.n;
  doc["lambdas"] = r.lambdas;
  doc["lambda1"] = r.lambda1;
  doc["lambda_min"] = r.lambda_min;
  doc["negativity"] = r.negativity;
  doc["fro_sq"] = r.fro_sq;
  doc["neg_count"] = r.neg_count;
  doc["is_ew"] = r.is_ew_candidate;
  if (!r.is_ew_candidate) doc["note"] = "not an EW: no negative eigenvalue";
  auto bounds = ojson::array();
  for (const auto &b : r.bounds)
    bounds.push_back({{"name", b.name},
                      {"passed", b.passed},
                      {"attained", b.attained},
                      {"measured", b.measured},
                      {"bound", b.bound}});
  doc["bounds"] = std::move(bounds);
  return doc.dump(2) + "\n";
}

ReportFormat parse_format(const std::string &s) {
  return s == "csv" ? ReportFormat::csv : ReportFormat::json;
}

OptOptions opt_options(std::size_t restarts, std::uint64_t seed) {
  OptOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Entanglement witness construction and verification"};
  app.require_subcommand(1);

  std::string input, out, format = "json", mode = "verdict", name, suite;
  std::vector<std::string> params;
  double a = 0, b = 0, c = 0, d = 0, z = 1.0, delta = 1.0;
  std::size_t m = 3, n = 3, restarts = 64, samples = 0;
  std::uint64_t seed = 42;
  bool list = false;

  auto add_out = [&](CLI::App *s) { s->add_option("--out", out, "Output path (default stdout)"); };
  auto add_input = [&](CLI::App *s) {
    s->add_option("--input", input, "Operator JSON file")->required()->check(CLI::ExistingFile);
  };
  auto add_opt = [&](CLI::App *s) {
    s->add_option("--restarts", restarts, "See-saw restarts")->check(CLI::PositiveNumber);
    s->add_option("--seed", seed, "Random seed");
  };

  auto *state = app.add_subcommand("state", "Write a canonical state as operator JSON");
  state->add_option("--name", name, "State name")->required();
  state->add_option("--param", params, "key=value parameter (repeatable)");
  add_out(state);

  auto *family = app.add_subcommand("family", "Write the parametric witness W_{a,b,c,d}");
  family->add_option("--a", a);
  family->add_option("--b", b);
  family->add_option("--c", c);
  family->add_option("--d", d);
  family->add_option("--m", m);
  family->add_option("--n", n);
  add_out(family);

  auto *report = app.add_subcommand("report", "Spectral report with bound verdicts");
  add_input(report);
  report->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  add_out(report);

  auto *mir = app.add_subcommand("mirror", "Mirrored witness mu I - W");
  add_input(mir);
  add_opt(mir);
  add_out(mir);

  auto *bp = app.add_subcommand("blockpos", "Product-vector optimization and block positivity");
  add_input(bp);
  bp->add_option("--mode", mode)->check(CLI::IsMember({"min", "max", "verdict"}));
  add_opt(bp);

  auto *ndew = app.add_subcommand("ndew", "Kernel-projector NDEW for a PPT edge state");
  add_input(ndew);
  ndew->add_option("--z", z);
  ndew->add_option("--delta", delta);
  add_opt(ndew);
  add_out(ndew);

  auto *detect = app.add_subcommand("detect", "NDEW detecting an NPT state");
  add_input(detect);
  add_opt(detect);
  add_out(detect);

  auto *verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "Suite name");
  verify->add_flag("--list", list, "List suite names");
  verify->add_option("--m", m);
  verify->add_option("--n", n);
  verify->add_option("--samples", samples, "Sample budget (0 = suite default)");
  verify->add_option("--seed", seed);
  verify->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (state->parsed()) {
      CanonicalStateId id{parse_canonical_state(name), {}};
      for (const auto &kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw Error(ErrorCode::BadParam, "parameter '" + kv + "' is not key=value");
        try {
          id.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception &) {
          throw Error(ErrorCode::BadParam, "parameter '" + kv + "' is not numeric");
        }
      }
      emit(out, operator_to_json(canonical_state(id)));
      return kOk;
    }
    if (family->parsed()) {
      emit(out, operator_to_json(w_family({a, b, c, d, m, n}).op));
      return kOk;
    }
    if (report->parsed()) {
      const SpectrumReport r = spectral_report(read_operator_file(input));
      emit(out, report_text(r, parse_format(format)));
      return r.all_passed() ? kOk : kCheckFailed;
    }
    if (mir->parsed()) {
      const MirrorResult r = mirror(read_operator_file(input), opt_options(restarts, seed));
      ojson doc{{"mu", r.mu},
                {"verdict", to_string(r.verdict)},
                {"optimizer", opt_json(r.opt)}};
      std::cout << doc.dump(2) << "\n";
      if (!out.empty()) write_text_file(out, operator_to_json(r.w_m));
      return kOk;
    }
    if (bp->parsed()) {
      const BipartiteOperator w = read_operator_file(input);
      const OptOptions o = opt_options(restarts, seed);
      ojson doc;
      if (mode == "verdict") {
        const auto v = is_block_positive(w, o);
        doc["status"] = to_string(v.status);
        doc["note"] = v.note;
        doc["min_value"] = v.min_value;
        doc["spread"] = v.spread;
        doc["restarts_tried"] = v.restarts_tried;
        doc["restarts_converged"] = v.restarts_converged;
        if (v.counterexample)
          doc["counterexample"] = {{"vec_a", complex_array(v.counterexample->vec_a)},
                                   {"vec_b", complex_array(v.counterexample->vec_b)},
                                   {"value", v.counterexample->value}};
      } else {
        doc = opt_json(mode == "min" ? product_expectation_min(w, o)
                                     : product_expectation_max(w, o));
      }
      std::cout << doc.dump(2) << "\n";
      return kOk;
    }
    if (ndew->parsed()) {
      const BipartiteOperator sigma = read_operator_file(input);
      NdewParams p;
      p.z = z;
      p.delta = delta;
      const Witness w = ndew_from_edge(sigma, p, opt_options(restarts, seed));
      ojson doc{{"class", to_string(w.kind)},
                {"epsilon_estimate", w.ndew->epsilon_estimate},
                {"delta", w.ndew->delta},
                {"expectation", trace_product(w.op.matrix(), sigma.matrix())},
                {"provenance", w.provenance}};
      std::cout << doc.dump(2) << "\n";
      if (!out.empty()) write_text_file(out, operator_to_json(w.op));
      return w.kind == WitnessClass::ndew_certified ? kOk : kCheckFailed;
    }
    if (detect->parsed()) {
      const DetectionCertificate cert =
          detect_npt(read_operator_file(input), opt_options(restarts, seed));
      ojson doc{{"class", to_string(cert.witness.kind)},
                {"expectation", cert.expectation},
                {"schmidt_rank", cert.schmidt_rank},
                {"base_state", cert.base_state},
                {"base_expectation", cert.base_expectation},
                {"t", cert.boost_t},
                {"cond_a", cert.filter.cond_a},
                {"cond_b", cert.filter.cond_b},
                {"steps", cert.steps}};
      std::cout << doc.dump(2) << "\n";
      if (!out.empty()) write_text_file(out, operator_to_json(cert.witness.op));
      return kOk;
    }
    if (verify->parsed()) {
      if (list) {
        for (const auto &s : suite_names()) std::cout << s << "\n";
        return kOk;
      }
      if (suite.empty()) throw Error(ErrorCode::BadParam, "--suite is required");
      SuiteParams p;
      p.m = m;
      p.n = n;
      p.samples = samples;
      p.seed = seed;
      const SuiteReport r = run_suite(suite, p);
      emit(out, emit_report(r, parse_format(format)));
      std::cerr << r.suite << ": " << (r.all_passed() ? "pass" : "FAIL") << " ("
                << r.checks.size() << " checks, " << r.wall_time << " s)\n";
      return r.all_passed() ? kOk : kCheckFailed;
    }
  } catch (const Error &e) {
    std::cerr << "ews: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "ews: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
