#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "jetham/output.hpp"
#include "jetham/verify.hpp"

namespace {

using namespace jetham;

int run_compute(const std::string& scenario_path, const std::string& what,
                const std::string& out_path) {
  Scenario s = load_scenario(scenario_path);
  CompiledScenario cs = compile_scenario(s);
  nlohmann::json doc = compute_document(s, cs, what, ExecMode::Parallel);
  std::string text = render_document(doc);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write output file: " + out_path);
    out << text;
  }
  return 0;
}

void print_lines(const std::vector<CheckLine>& lines, bool& all_pass) {
  for (const CheckLine& ln : lines) {
    std::printf("[%s] %-58s max_residual=%.3e", ln.pass ? "PASS" : "FAIL", ln.id.c_str(),
                ln.residual);
    if (ln.tolerance > 0) std::printf(" (tol %.0e)", ln.tolerance);
    if (!ln.note.empty()) std::printf("  %s", ln.note.c_str());
    std::printf("\n");
    all_pass = all_pass && ln.pass;
  }
}

int run_verify(const std::string& scenario_path, const std::string& suite) {
  Scenario s = load_scenario(scenario_path);
  CompiledScenario cs = compile_scenario(s);
  bool all_pass = true;
  if (suite == "covariance" || suite == "all") {
    SuiteOptions opt;
    opt.points_per_change = 3;
    print_lines(covariance_suite(cs, opt), all_pass);
  }
  if (suite == "oracle" || suite == "all") {
    print_lines(oracle_suite(cs), all_pass);
  }
  if (suite == "integrability" || suite == "all") {
    CheckLine ln = integrability_suite(cs);
    std::printf("[%s] %-58s max_residual=%.3e  %s\n", ln.pass ? "PASS" : "FAIL", ln.id.c_str(),
                ln.residual, ln.note.c_str());
  }
  if (suite != "covariance" && suite != "oracle" && suite != "integrability" && suite != "all")
    throw ScenarioError("unknown suite '" + suite +
                        "' (expected covariance, oracle, integrability or all)");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jetham: torsion, curvature and deflection tables on the dual 1-jet bundle"};
  app.require_subcommand(1);

  std::string scenario_path, what, out_path, suite = "all";

  CLI::App* compute = app.add_subcommand("compute", "evaluate a tensor table at the eval points");
  compute->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  compute
      ->add_option("--what", what,
                   "frames | brackets | torsion | curvature | deflection | fundamental-metric | "
                   "almost-product")
      ->required();
  compute->add_option("--out", out_path, "output path ('-' for stdout)");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  verify->add_option("--suite", suite, "covariance | oracle | integrability | all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) return run_compute(scenario_path, what, out_path);
    return run_verify(scenario_path, suite);
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SingularMetricError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
