#pragma once

// Experiment configuration, orchestration and on-disk artifacts.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nematic/closure.hpp"
#include "nematic/config.hpp"
#include "nematic/kinetic.hpp"
#include "nematic/maxslope.hpp"
#include "nematic/phase.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/vortex.hpp"
#include "nematic/vortex_field.hpp"

namespace nematic {

struct VortexSpec {
  Complex position;
  int degree = 1;
};

/// Parses "x,y,d; x,y,d; ...".
inline std::vector<VortexSpec> parse_vortex_list(const std::string& text, std::vector<std::string>& problems,
                                                 const std::string& key) {
  std::vector<VortexSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    std::stringstream is(item);
    std::string a, b, c;
    if (!std::getline(is, a, ',') || !std::getline(is, b, ',') || !std::getline(is, c)) {
      problems.push_back(key + ": entry '" + item + "' is not x,y,d");
      continue;
    }
    try {
      const int d = std::stoi(trim(c));
      if (d != 1 && d != -1) throw std::invalid_argument("degree");
      out.push_back({Complex(std::stod(trim(a)), std::stod(trim(b))), d});
    } catch (const std::exception&) {
      problems.push_back(key + ": entry '" + item + "' is not x,y,d with d = +-1");
    }
  }
  return out;
}

struct ExperimentConfig {
  std::string tier;
  double gamma = 6.0;
  double epsilon = 0.05;
  std::size_t nx = 33, ny = 33;
  double lx = 1.0, ly = 1.0;
  bool centered = true;

  std::string boundary_type = "uniform";
  double boundary_angle = 0.0;
  int boundary_winding = 1;
  std::vector<VortexSpec> boundary_anchors;
  std::string boundary_file;

  std::string initial_type = "equilibrium";
  double initial_angle = 0.0;
  std::vector<VortexSpec> vortices;
  std::string initial_file;
  double core_radius = 0.0;  // 0 means eps
  double noise = 1e-3;

  double dt = 1e-4;
  double t_end = 0.01;
  double output_every = 0.0;
  bool rescaled_time = true;

  int k_max = 8;
  std::string truncation = "equilibrium";
  std::string scheme = "maxent";
  std::string stepping = "euler";

  bool free_space = false;
  std::size_t m_b = 2048;
  double boundary_margin = -1.0;  // < 0 means 3h

  std::uint64_t seed = 0;
  std::string output_dir;

  std::size_t specfun_samples = 1000;
  double specfun_r_max = 0.999;

  /// Acceptance checks run by the validate tier; empty means all.
  std::vector<int> criteria;

  Config source;
};

inline const std::vector<std::string>& known_tiers() {
  static const std::vector<std::string> t{"kinetic", "closure", "vortex", "validate", "specfun-table", "maxslope-demo"};
  return t;
}

/// Validates every key and lists all problems at once.
inline ExperimentConfig resolve_config(const Config& c) {
  ConfigReader rd(c);
  ExperimentConfig e;
  e.source = c;
  e.tier = rd.choice("tier", known_tiers(), std::nullopt);
  e.gamma = rd.real("params.gamma", 6.0);
  e.epsilon = rd.real("params.epsilon", 0.05);
  rd.require(e.gamma > 0.0, "params.gamma: must be positive");
  rd.require(e.epsilon > 0.0, "params.epsilon: must be positive");

  e.nx = static_cast<std::size_t>(rd.integer("grid.nx", 33));
  e.ny = static_cast<std::size_t>(rd.integer("grid.ny", static_cast<long long>(e.nx)));
  e.lx = rd.real("grid.lx", 1.0);
  e.ly = rd.real("grid.ly", e.lx * static_cast<double>(e.ny - 1) / static_cast<double>(std::max<std::size_t>(e.nx - 1, 1)));
  e.centered = rd.boolean("grid.centered", true);
  rd.require(e.nx >= 3 && e.ny >= 3, "grid.nx/grid.ny: need at least 3 nodes per direction");
  rd.require(e.lx > 0.0 && e.ly > 0.0, "grid.lx/grid.ly: must be positive");
  if (e.nx >= 3 && e.ny >= 3 && e.lx > 0.0 && e.ly > 0.0) {
    const double hx = e.lx / static_cast<double>(e.nx - 1);
    const double hy = e.ly / static_cast<double>(e.ny - 1);
    rd.require(std::abs(hx - hy) <= 1e-12 * hx, "grid.ly: cells must be square (lx/(nx-1) == ly/(ny-1))");
  }

  std::vector<std::string> extra;
  e.boundary_type = rd.choice("boundary.type", {"uniform", "winding", "file"}, std::string("uniform"));
  e.boundary_angle = rd.real("boundary.angle", 0.0);
  e.boundary_winding = static_cast<int>(rd.integer("boundary.winding", 1));
  e.boundary_anchors = parse_vortex_list(rd.text("boundary.anchors", ""), extra, "boundary.anchors");
  e.boundary_file = rd.text("boundary.file", "");
  if (e.boundary_type == "file") {
    rd.require(!e.boundary_file.empty(), "boundary.file: required when boundary.type = file");
    rd.require(e.boundary_file.empty() || std::filesystem::exists(e.boundary_file),
               "boundary.file: file '" + e.boundary_file + "' does not exist");
  }

  e.initial_type = rd.choice("initial.type", {"equilibrium", "isotropic", "multivortex", "snapshot"}, std::string("equilibrium"));
  e.initial_angle = rd.real("initial.angle", e.boundary_angle);
  e.vortices = parse_vortex_list(rd.text("initial.vortices", ""), extra, "initial.vortices");
  e.initial_file = rd.text("initial.file", "");
  e.core_radius = rd.real("initial.core", 0.0);
  e.noise = rd.real("initial.noise", 1e-3);
  if (e.initial_type == "multivortex" || e.tier == "vortex")
    rd.require(!e.vortices.empty(), "initial.vortices: required for multivortex initial data and the vortex tier");
  if (e.initial_type == "snapshot") {
    rd.require(!e.initial_file.empty(), "initial.file: required when initial.type = snapshot");
    rd.require(e.initial_file.empty() || std::filesystem::exists(e.initial_file),
               "initial.file: file '" + e.initial_file + "' does not exist");
  }

  const bool dynamic = e.tier == "kinetic" || e.tier == "closure" || e.tier == "vortex";
  e.dt = rd.real("time.dt", dynamic ? std::nullopt : std::optional<double>(1e-4));
  e.t_end = rd.real("time.t_end", dynamic ? std::nullopt : std::optional<double>(0.01));
  e.output_every = rd.real("time.output_every", 0.0);
  e.rescaled_time = rd.boolean("time.rescaled", true);
  if (dynamic) {
    rd.require(e.dt > 0.0, "time.dt: must be positive");
    rd.require(e.t_end > 0.0, "time.t_end: must be positive");
  }

  e.k_max = static_cast<int>(rd.integer("kinetic.k_max", 8));
  e.truncation = rd.choice("kinetic.truncation", {"equilibrium", "zero"}, std::string("equilibrium"));
  rd.require(e.k_max >= 2 && e.k_max < kMaxBesselOrder, "kinetic.k_max: must lie in [2, 63]");
  e.scheme = rd.choice("tier2.scheme", {"maxent", "ldg"}, std::string("maxent"));
  e.stepping = rd.choice("tier2.stepping", {"euler", "integrating_factor"}, std::string("euler"));

  e.free_space = rd.boolean("vortex.free_space", false);
  e.m_b = static_cast<std::size_t>(rd.integer("vortex.m_b", 2048));
  e.boundary_margin = rd.real("vortex.boundary_margin", -1.0);
  rd.require(e.m_b >= 16, "vortex.m_b: need at least 16 boundary points");

  e.seed = static_cast<std::uint64_t>(rd.integer("seed", 0));
  e.output_dir = rd.text("output.dir", e.tier.empty() ? std::string("run") : e.tier);
  e.specfun_samples = static_cast<std::size_t>(rd.integer("specfun.samples", 1000));
  e.specfun_r_max = rd.real("specfun.r_max", 0.999);
  rd.require(e.specfun_r_max > 0.0 && e.specfun_r_max < 1.0, "specfun.r_max: must lie in (0, 1)");
  {
    std::stringstream ss(rd.text("validate.criteria", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      int id = 0;
      const auto r = std::from_chars(item.data(), item.data() + item.size(), id);
      if (r.ec != std::errc() || r.ptr != item.data() + item.size() || id < 1 || id > 12)
        extra.push_back("validate.criteria: '" + item + "' is not an id in 1..12");
      else
        e.criteria.push_back(id);
    }
  }

  std::vector<std::string> problems = rd.problems();
  problems.insert(problems.end(), extra.begin(), extra.end());
  static const std::vector<std::string> known_keys{
      "tier", "params.gamma", "params.epsilon", "grid.nx", "grid.ny", "grid.lx", "grid.ly", "grid.centered",
      "boundary.type", "boundary.angle", "boundary.winding", "boundary.anchors", "boundary.file", "initial.type",
      "initial.angle", "initial.vortices", "initial.file", "initial.core", "initial.noise", "time.dt", "time.t_end",
      "time.output_every", "time.rescaled", "kinetic.k_max", "kinetic.truncation", "tier2.scheme", "tier2.stepping",
      "vortex.free_space", "vortex.m_b", "vortex.boundary_margin", "seed", "output.dir", "specfun.samples",
      "specfun.r_max", "validate.criteria"};
  for (const auto& [k, v] : c.entries())
    if (std::find(known_keys.begin(), known_keys.end(), k) == known_keys.end()) problems.push_back(k + ": unknown key");
  if (!problems.empty()) throw ConfigError(problems);
  return e;
}

/// Boundary phase psi(z) from the boundary settings.
inline PhaseFunction boundary_phase(const ExperimentConfig& e) {
  if (e.boundary_type == "uniform") {
    const double a = e.boundary_angle;
    return [a](Complex) { return a; };
  }
  if (e.boundary_type == "winding") {
    std::vector<Complex> pos;
    std::vector<int> deg;
    const auto& anchors = !e.boundary_anchors.empty() ? e.boundary_anchors : e.vortices;
    if (!anchors.empty()) {
      for (const auto& a : anchors) pos.push_back(a.position), deg.push_back(a.degree);
    } else {
      const Complex c = e.centered ? Complex(0.0, 0.0) : Complex(0.5 * e.lx, 0.5 * e.ly);
      pos.push_back(c);
      deg.push_back(e.boundary_winding);
    }
    auto psi = VortexConfiguration::matching_phase(pos, deg);
    const double a = e.boundary_angle;
    return [psi, a](Complex z) { return a + psi(z); };
  }
  // file: rows x,y,psi; nearest sample wins.
  std::ifstream in(e.boundary_file);
  std::vector<std::pair<Complex, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    double x, y, p;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &p) == 3) samples.push_back({Complex(x, y), p});
  }
  if (samples.empty()) throw ConfigError({"boundary.file: no x,y,psi rows found"});
  return [samples](Complex z) {
    double best = INFINITY, psi = 0.0;
    for (const auto& [w, p] : samples) {
      const double d = std::norm(z - w);
      if (d < best) best = d, psi = p;
    }
    return psi;
  };
}

inline Grid2D make_grid(const ExperimentConfig& e) {
  if (e.centered) return Grid2D::centered(e.nx, e.ny, e.lx, e.ly, boundary_phase(e));
  return Grid2D(e.nx, e.ny, e.lx, e.ly, Complex(0.0, 0.0), boundary_phase(e));
}

inline VortexConfiguration vortex_configuration(const ExperimentConfig& e, const Grid2D& grid) {
  VortexConfiguration cfg;
  for (const auto& v : e.vortices) cfg.positions.push_back(v.position), cfg.degrees.push_back(v.degree);
  cfg.psi = grid.boundary_phase();
  cfg.free_space = e.free_space;
  if (!e.free_space) cfg.boundary = rectangle_contour(grid, e.m_b, cfg.psi);
  return cfg;
}

/// Initial order parameter with Dirichlet data imposed.
inline ComplexField initial_order_parameter(const ExperimentConfig& e, const Grid2D& grid, const NematicParams& params) {
  ComplexField n(grid);
  if (e.initial_type == "equilibrium") {
    n = ComplexField(grid, std::polar(params.r_eq(), e.initial_angle));
  } else if (e.initial_type == "isotropic") {
    std::mt19937_64 rng(e.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : n.values()) v = e.noise * Complex(u(rng), u(rng));
  } else if (e.initial_type == "multivortex") {
    VortexConfiguration cfg = vortex_configuration(e, grid);
    const PhaseField phi = solve_harmonic_phase(cfg, grid);
    n = tempered_vortex_field(grid, cfg, &phi, params, e.core_radius > 0.0 ? e.core_radius : params.epsilon());
  } else {
    // A single component is n itself; a moment stack stores n at index 1.
    auto comps = read_snapshot(e.initial_file, grid);
    n = comps.size() > 1 ? comps[1] : comps.at(0);
  }
  impose_boundary(n, params.r_eq());
  return n;
}

inline MomentState initial_moments(const ExperimentConfig& e, const Grid2D& grid, const NematicParams& params) {
  if (e.initial_type == "snapshot") {
    auto comps = read_snapshot(e.initial_file, grid);
    if (comps.size() == static_cast<std::size_t>(e.k_max) + 1) {
      MomentState s(grid, e.k_max);
      s.moments = std::move(comps);
      return s;
    }
  }
  const ComplexField n = initial_order_parameter(e, grid, params);
  if (e.initial_type == "isotropic") {
    MomentState s(grid, e.k_max);
    s.moments[1] = n;
    return s;
  }
  return equilibrium_state(n, e.k_max);
}

struct RunResult {
  int exit_code = 0;
  std::string status = "ok";
  std::string message;
  std::vector<std::string> artifacts;
  std::filesystem::path directory;
};

inline std::filesystem::path output_root(const std::string& fallback = ".") {
  if (const char* env = std::getenv("NEMATIC_OUT_DIR"); env && *env) return env;
  return fallback;
}

namespace detail {

inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline void write_diagnostics_header(std::FILE* fp) { std::fputs("t,E_total,E_reduced,S_rel,n_vortices\n", fp); }

inline void write_diagnostics_row(std::FILE* fp, double t, double e_total, double e_reduced, double s_rel, std::size_t nv) {
  std::fprintf(fp, "%s,%s,%s,%s,%zu\n", fmt12(t).c_str(), fmt12(e_total).c_str(), fmt12(e_reduced).c_str(),
               fmt12(s_rel).c_str(), nv);
}

inline std::FILE* open_or_throw(const std::filesystem::path& p) {
  std::FILE* fp = std::fopen(p.string().c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + p.string());
  return fp;
}

}  // namespace detail

/// CSV r,lambda,w_gamma,w_gamma_prime on [0, r_max] plus a row at r_eq.
inline void write_specfun_table(const std::string& path, const NematicParams& params, std::size_t samples = 1000,
                                double r_max = 0.999) {
  std::vector<double> rs;
  for (std::size_t i = 0; i < samples; ++i) rs.push_back(r_max * static_cast<double>(i) / static_cast<double>(samples - 1));
  rs.push_back(params.r_eq());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  std::FILE* fp = detail::open_or_throw(path);
  std::fputs("r,lambda,w_gamma,w_gamma_prime\n", fp);
  for (double r : rs)
    std::fprintf(fp, "%.12e,%.12e,%.12e,%.12e\n", r, lambda_of(r), w_gamma(r, params), w_gamma_prime(r, params));
  std::fclose(fp);
}

/// CSV epsilon,sup_distance for the circle reduction example.
inline maxslope::ReductionReport write_maxslope_demo(const std::string& path) {
  maxslope::Vector x0(2);
  x0 << std::cos(1.0), std::sin(1.0);
  const auto rep = maxslope::reduction_demo(maxslope::circle_problem(), {1e-1, 1e-2, 1e-3}, x0, 3.0);
  std::FILE* fp = detail::open_or_throw(path);
  std::fputs("epsilon,sup_distance\n", fp);
  for (std::size_t i = 0; i < rep.eps.size(); ++i) std::fprintf(fp, "%.12e,%.12e\n", rep.eps[i], rep.distance[i]);
  std::fclose(fp);
  return rep;
}

/// Runs a kinetic, closure, vortex, specfun-table or maxslope-demo
/// experiment into root/output.dir. The validate tier is handled by the
/// caller. Deterministic for a fixed config.
inline RunResult run_experiment(const ExperimentConfig& e, const std::filesystem::path& root, bool strict_halt = false) {
  namespace fs = std::filesystem;
  RunResult res;
  res.directory = root / e.output_dir;
  fs::create_directories(res.directory);
  auto artifact = [&](const std::string& name) {
    res.artifacts.push_back(name);
    return res.directory / name;
  };
  const NematicParams params = make_params(e.gamma, e.epsilon);
  nlohmann::ordered_json meta;
  meta["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : e.source.entries()) meta["config"][k] = v;
  meta["derived"] = {{"r_eq", params.r_eq()}, {"tau_gamma", params.tau_gamma()}, {"c_gamma", params.c_gamma()}};

  try {
    if (e.tier == "specfun-table") {
      write_specfun_table(artifact("specfun.csv").string(), params, e.specfun_samples, e.specfun_r_max);
    } else if (e.tier == "maxslope-demo") {
      write_maxslope_demo(artifact("maxslope.csv").string());
    } else if (e.tier == "kinetic" || e.tier == "closure") {
      const Grid2D grid = make_grid(e);
      if (params.tau_gamma() > 0.0 && params.epsilon() < 1.0 && e.rescaled_time)
        meta["derived"]["t_prime_per_t"] = to_vortex_clock(1.0, params);
      std::FILE* fp = detail::open_or_throw(artifact("diagnostics.csv"));
      detail::write_diagnostics_header(fp);
      std::vector<std::pair<double, std::vector<ComplexField>>> snaps;
      try {
        if (e.tier == "kinetic") {
          KineticConfig kc{params, grid, e.k_max, e.dt, e.t_end, e.rescaled_time,
                           e.truncation == "zero" ? Truncation::zero : Truncation::equilibrium, e.output_every};
          const auto traj = run_kinetic(initial_moments(e, grid, params), kc);
          for (std::size_t r = 0; r < traj.size(); ++r) {
            const auto& d = traj.diagnostics[r];
            detail::write_diagnostics_row(fp, traj.times[r], d.e_total, d.e_reduced, d.s_rel, d.vortices.size());
            snaps.push_back({traj.times[r], traj.states[r].moments});
          }
        } else {
          ClosureConfig cc{params, grid, e.scheme == "ldg" ? ClosureScheme::ldg : ClosureScheme::maxent,
                           e.stepping == "euler" ? ClosureStepping::euler : ClosureStepping::integrating_factor,
                           e.dt, e.t_end, e.rescaled_time, e.output_every};
          const auto traj = run_closure(initial_order_parameter(e, grid, params), cc);
          for (std::size_t r = 0; r < traj.size(); ++r) {
            const auto& d = traj.diagnostics[r];
            detail::write_diagnostics_row(fp, traj.times[r], d.e_reduced, d.e_reduced, 0.0, d.vortices.size());
            snaps.push_back({traj.times[r], {traj.states[r]}});
          }
        }
      } catch (...) {
        std::fclose(fp);
        throw;
      }
      std::fclose(fp);
      nlohmann::ordered_json times = nlohmann::ordered_json::array();
      for (std::size_t r = 0; r < snaps.size(); ++r) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06zu.nemf", r);
        write_snapshot(artifact(name).string(), snaps[r].second);
        times.push_back(snaps[r].first);
      }
      write_field_csv(artifact("final_n.csv").string(), snaps.back().second.at(e.tier == "kinetic" ? 1 : 0));
      meta["snapshot_times"] = times;
    } else if (e.tier == "vortex") {
      const Grid2D grid = make_grid(e);
      VortexConfiguration cfg = vortex_configuration(e, grid);
      VortexDynamicsOptions opt{e.t_end, e.dt, e.boundary_margin >= 0.0 ? e.boundary_margin : 3.0 * grid.h(), e.output_every};
      const auto traj = run_vortex_dynamics(cfg, opt);
      write_vortex_trajectory_csv(artifact("vortex-trajectory.csv").string(), traj, cfg.degrees);
      cfg.positions = traj.back();
      write_field_csv(artifact("final_n.csv").string(),
                      multi_vortex_field(cfg, solve_harmonic_phase(cfg, grid), params));
      if (params.tau_gamma() > 0.0 && params.epsilon() < 1.0)
        meta["derived"]["t_per_t_prime"] = from_vortex_clock(1.0, params);
      res.status = traj.status;
      if (traj.status == kStatusCloseApproach && strict_halt) {
        res.exit_code = 4;
        res.message = "vortex dynamics halted at close approach (t' = " + detail::fmt12(traj.times.back()) + ")";
      }
    } else {
      throw ConfigError({"tier: '" + e.tier + "' cannot be run by run_experiment"});
    }
  } catch (const InstabilityError& err) {
    res.exit_code = 3;
    res.status = "instability";
    res.message = err.what();
  }
  meta["status"] = res.status;
  meta["artifacts"] = res.artifacts;
  {
    std::ofstream os(res.directory / "run.json");
    os << meta.dump(2) << "\n";
  }
  res.artifacts.push_back("run.json");
  return res;
}

}  // namespace nematic
