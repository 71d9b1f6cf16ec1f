// Command-line front end: simulate, validate, specfun-table, maxslope-demo.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "criteria.hpp"
#include "json.hpp"
#include "nematic/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;

nematic::ExperimentConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw nematic::ConfigError({"--config: file '" + path + "' does not exist"});
  return nematic::resolve_config(nematic::Config::load(path));
}

int report_config_error(const nematic::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
  return kExitConfig;
}

int simulate(const std::string& path, bool strict_halt) {
  nematic::ExperimentConfig e;
  try {
    e = load_config(path);
    if (e.tier == "validate") throw nematic::ConfigError({"tier: use the validate subcommand for tier = validate"});
  } catch (const nematic::ConfigError& err) {
    return report_config_error(err);
  }
  try {
    const auto res = nematic::run_experiment(e, nematic::output_root());
    std::printf("%s: status %s, %zu artifacts in %s\n", e.tier.c_str(), res.status.c_str(), res.artifacts.size(),
                res.directory.string().c_str());
    if (!res.message.empty()) std::fprintf(stderr, "%s\n", res.message.c_str());
    if (res.exit_code == 0 && strict_halt && res.status == nematic::kStatusCloseApproach) return 4;
    return res.exit_code;
  } catch (const nematic::ConfigError& err) {
    return report_config_error(err);
  }
}

int validate(const std::string& path) {
  nematic::ExperimentConfig e;
  try {
    e = load_config(path);
  } catch (const nematic::ConfigError& err) {
    return report_config_error(err);
  }
  namespace fs = std::filesystem;
  const fs::path dir = nematic::output_root() / e.output_dir;
  fs::create_directories(dir);
  const auto results = nematic::validation::run_all(e.criteria, [](const nematic::validation::CriterionResult& r) {
    std::printf("%s\n", nematic::validation::result_line(r).c_str());
    std::fflush(stdout);
  });
  int failed = 0;
  {
    std::FILE* fp = std::fopen((dir / "validate.csv").string().c_str(), "w");
    if (!fp) {
      std::fprintf(stderr, "cannot write %s\n", (dir / "validate.csv").string().c_str());
      return 1;
    }
    std::fputs("id,name,passed,seconds,detail\n", fp);
    for (const auto& r : results) {
      std::string detail = r.detail;
      for (auto& ch : detail)
        if (ch == '"') ch = '\'';
      std::fprintf(fp, "%d,%s,%d,%.12e,\"%s\"\n", r.id, r.name.c_str(), r.passed ? 1 : 0, r.seconds, detail.c_str());
      if (!r.passed) ++failed;
    }
    std::fclose(fp);
  }
  nlohmann::ordered_json meta;
  meta["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : e.source.entries()) meta["config"][k] = v;
  meta["status"] = failed == 0 ? "ok" : "failed";
  meta["passed"] = static_cast<int>(results.size()) - failed;
  meta["total"] = results.size();
  meta["artifacts"] = {"validate.csv"};
  std::ofstream(dir / "run.json") << meta.dump(2) << "\n";
  std::printf("%zu of %zu criteria passed\n", results.size() - static_cast<std::size_t>(failed), results.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nematic orientation dynamics: kinetic, closure and vortex solvers"};
  app.require_subcommand(1);

  std::string config_path;
  bool strict_halt = false;
  auto* sim = app.add_subcommand("simulate", "Run the experiment described by a config file");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_flag("--strict-halt", strict_halt, "Exit with status 4 when vortex dynamics halts at close approach");

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Run the acceptance checks and print a pass/fail table");
  val->add_option("--config", validate_path, "Config file")->required();

  double gamma = 6.0;
  std::string table_out;
  std::size_t samples = 1000;
  auto* table = app.add_subcommand("specfun-table", "Write r,lambda,w_gamma,w_gamma_prime as CSV");
  table->add_option("--gamma", gamma, "Concentration gamma")->required();
  table->add_option("--out", table_out, "Output CSV")->required();
  table->add_option("--samples", samples, "Number of r samples on [0, 0.999]");

  std::string demo_out;
  auto* demo = app.add_subcommand("maxslope-demo", "Write the penalised-flow reduction report as CSV");
  demo->add_option("--out", demo_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) return simulate(config_path, strict_halt);
    if (*val) return validate(validate_path);
    if (*table) {
      if (!(gamma > 0.0)) return report_config_error(nematic::ConfigError({"--gamma: must be positive"}));
      if (samples < 2) return report_config_error(nematic::ConfigError({"--samples: need at least 2"}));
      nematic::write_specfun_table(table_out, nematic::make_params(gamma, 0.05), samples);
      return 0;
    }
    if (*demo) {
      const auto rep = nematic::write_maxslope_demo(demo_out);
      for (std::size_t i = 0; i < rep.eps.size(); ++i) std::printf("%.12e,%.12e\n", rep.eps[i], rep.distance[i]);
      return 0;
    }
  } catch (const nematic::InstabilityError& e) {
    std::fprintf(stderr, "instability: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
