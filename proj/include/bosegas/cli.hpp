#pragma once

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/fock.hpp"
#include "bosegas/gp.hpp"
#include "bosegas/ideal_gas.hpp"
#include "bosegas/io.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"
#include "bosegas/tdgp.hpp"

// Command orchestration: a declarative parameter schema per command drives
// both the config-file validation and the command-line flags, every run
// lands in an output directory with a manifest (canonical config, FNV-1a
// hash of it, file list, and the numeric tolerances in force), and all
// emission goes through io.hpp so identical inputs give identical bytes.
namespace bosegas::cli {

// --- parameter schemas ------------------------------------------------------

enum class ParamKind { real, integer, text, path, list };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::real;
  std::string help;
  std::string default_value;  // empty + !required means "optional, absent"
  bool required = false;
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool exclusive_min = false;
  std::vector<std::string> choices;  // text params only

  static ParamSpec real(std::string n, std::string def, std::string h) {
    return {std::move(n), ParamKind::real, std::move(h), std::move(def)};
  }
  static ParamSpec integer(std::string n, std::string def, std::string h) {
    return {std::move(n), ParamKind::integer, std::move(h), std::move(def)};
  }
  static ParamSpec text(std::string n, std::string def, std::string h) {
    return {std::move(n), ParamKind::text, std::move(h), std::move(def)};
  }
  static ParamSpec path(std::string n, std::string def, std::string h) {
    return {std::move(n), ParamKind::path, std::move(h), std::move(def)};
  }
  static ParamSpec list(std::string n, std::string def, std::string h) {
    return {std::move(n), ParamKind::list, std::move(h), std::move(def)};
  }

  ParamSpec& require() {
    required = true;
    return *this;
  }
  ParamSpec& positive() {
    min = 0.0;
    exclusive_min = true;
    return *this;
  }
  ParamSpec& non_negative() {
    min = 0.0;
    return *this;
  }
  ParamSpec& at_least(double v) {
    min = v;
    return *this;
  }
  ParamSpec& between(double lo, double hi) {
    min = lo;
    max = hi;
    return *this;
  }
  ParamSpec& one_of(std::vector<std::string> c) {
    choices = std::move(c);
    return *this;
  }
};

// Typed view of a validated parameter set plus the canonical string form
// that goes into manifests and the config hash.
struct ParamBag {
  std::map<std::string, double> reals;
  std::map<std::string, long long> integers;
  std::map<std::string, std::string> texts;
  std::map<std::string, std::vector<double>> lists;
  std::map<std::string, std::string> canonical;

  bool has(const std::string& name) const {
    return reals.count(name) || integers.count(name) || texts.count(name) ||
           lists.count(name);
  }
  double number(const std::string& name) const {
    const auto it = reals.find(name);
    if (it == reals.end()) throw DomainError("missing numeric parameter " + name);
    return it->second;
  }
  long long integer(const std::string& name) const {
    const auto it = integers.find(name);
    if (it == integers.end()) throw DomainError("missing integer parameter " + name);
    return it->second;
  }
  const std::string& text(const std::string& name) const {
    const auto it = texts.find(name);
    if (it == texts.end()) throw DomainError("missing text parameter " + name);
    return it->second;
  }
  const std::vector<double>& list(const std::string& name) const {
    const auto it = lists.find(name);
    if (it == lists.end()) throw DomainError("missing list parameter " + name);
    return it->second;
  }
};

struct CommandSchema {
  std::string command;
  std::string action;  // empty for single-level commands
  std::string help;
  std::vector<ParamSpec> params;
  // Runs the command, appends produced file names, returns the tolerances
  // block recorded in the manifest.
  io::JsonNode (*runner)(const ParamBag&, const std::filesystem::path&,
                         std::vector<std::string>&) = nullptr;

  bool knows(const std::string& key) const {
    for (const auto& p : params)
      if (p.name == key) return true;
    return false;
  }
};

// --- strict scalar parsing --------------------------------------------------

namespace detail {

inline std::optional<double> parse_real(const std::string& s) {
  double value = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline std::optional<long long> parse_integer(const std::string& s) {
  long long value = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = s.find(sep, begin);
    out.push_back(s.substr(begin, pos - begin));
    if (pos == std::string::npos) break;
    begin = pos + 1;
  }
  return out;
}

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

inline std::string bound_text(const ParamSpec& spec) {
  std::string out;
  if (spec.exclusive_min)
    out = "> " + io::format_double(spec.min);
  else if (spec.min != -std::numeric_limits<double>::infinity())
    out = ">= " + io::format_double(spec.min);
  if (spec.max != std::numeric_limits<double>::infinity())
    out += (out.empty() ? "" : " and ") + std::string("<= ") +
           io::format_double(spec.max);
  return out;
}

inline bool in_bounds(const ParamSpec& spec, double v) {
  if (spec.exclusive_min ? !(v > spec.min) : !(v >= spec.min)) return false;
  return v <= spec.max;
}

}  // namespace detail

// Checks every provided key against the schema, parses and bound-checks all
// values, and reports the full list of violations in one exception.
inline ParamBag validate(const CommandSchema& schema,
                         const std::map<std::string, std::string>& values) {
  std::vector<std::string> problems;
  for (const auto& [key, value] : values)
    if (!schema.knows(key)) problems.push_back(key + ": unknown key");

  ParamBag bag;
  for (const ParamSpec& spec : schema.params) {
    const auto it = values.find(spec.name);
    const std::string raw = it != values.end() ? it->second : spec.default_value;
    if (raw.empty()) {
      if (spec.required) problems.push_back(spec.name + ": required but missing");
      continue;
    }
    switch (spec.kind) {
      case ParamKind::real: {
        const auto v = detail::parse_real(raw);
        if (!v) {
          problems.push_back(spec.name + ": not a finite number (got '" + raw + "')");
          break;
        }
        if (!detail::in_bounds(spec, *v)) {
          problems.push_back(spec.name + ": must be " + detail::bound_text(spec) +
                             " (got " + io::format_double(*v) + ")");
          break;
        }
        bag.reals[spec.name] = *v;
        bag.canonical[spec.name] = io::format_double(*v);
        break;
      }
      case ParamKind::integer: {
        const auto v = detail::parse_integer(raw);
        if (!v) {
          problems.push_back(spec.name + ": not an integer (got '" + raw + "')");
          break;
        }
        if (!detail::in_bounds(spec, static_cast<double>(*v))) {
          problems.push_back(spec.name + ": must be " + detail::bound_text(spec) +
                             " (got " + std::to_string(*v) + ")");
          break;
        }
        bag.integers[spec.name] = *v;
        bag.canonical[spec.name] = std::to_string(*v);
        break;
      }
      case ParamKind::text: {
        if (!spec.choices.empty()) {
          bool known = false;
          for (const auto& c : spec.choices) known = known || c == raw;
          if (!known) {
            std::string allowed;
            for (const auto& c : spec.choices)
              allowed += (allowed.empty() ? "" : "|") + c;
            problems.push_back(spec.name + ": must be one of " + allowed +
                               " (got '" + raw + "')");
            break;
          }
        }
        bag.texts[spec.name] = raw;
        bag.canonical[spec.name] = raw;
        break;
      }
      case ParamKind::path: {
        bag.texts[spec.name] = raw;
        bag.canonical[spec.name] = raw;
        break;
      }
      case ParamKind::list: {
        std::vector<double> parsed;
        bool ok = true;
        for (const std::string& cell : detail::split(raw, ',')) {
          const auto v = detail::parse_real(detail::trim(cell));
          if (!v || !detail::in_bounds(spec, *v)) {
            ok = false;
            break;
          }
          parsed.push_back(*v);
        }
        if (!ok || parsed.empty()) {
          problems.push_back(spec.name + ": expected comma-separated numbers " +
                             detail::bound_text(spec) + " (got '" + raw + "')");
          break;
        }
        std::string canon;
        for (double v : parsed)
          canon += (canon.empty() ? "" : ",") + io::format_double(v);
        bag.lists[spec.name] = std::move(parsed);
        bag.canonical[spec.name] = std::move(canon);
        break;
      }
    }
  }
  if (!problems.empty()) {
    std::string message = "invalid configuration:";
    for (const auto& p : problems) message += "\n  - " + p;
    throw ValidationError(message);
  }
  return bag;
}

// --- config files -----------------------------------------------------------

struct RunConfig {
  std::string command;
  std::string action;
  std::map<std::string, std::string> values;
};

namespace detail {

inline std::string canonical_json_scalar(const nlohmann::json& v,
                                         const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return io::format_double(v.get<double>());
  throw ParseError(key + ": unsupported value type (expected scalar)");
}

}  // namespace detail

// Reads a config file: a JSON object, or line-oriented key=value with '#'
// comments. Values are canonicalized to strings; `command` and `action` keys
// are lifted out of the parameter map.
inline RunConfig parse_config(const std::filesystem::path& path) {
  const std::string text = io::read_text(path);
  RunConfig config;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
    if (!parsed.is_object())
      throw ParseError(path.string() + ": top level must be a JSON object");
    for (const auto& [key, value] : parsed.items()) {
      if (value.is_array()) {
        std::string joined;
        for (const auto& item : value)
          joined += (joined.empty() ? "" : ",") +
                    detail::canonical_json_scalar(item, key);
        config.values[key] = joined;
      } else {
        config.values[key] = detail::canonical_json_scalar(value, key);
      }
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string stripped = detail::trim(line);
      if (stripped.empty() || stripped[0] == '#') continue;
      const std::size_t eq = stripped.find('=');
      if (eq == std::string::npos)
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": expected key=value");
      const std::string key = detail::trim(stripped.substr(0, eq));
      const std::string value = detail::trim(stripped.substr(eq + 1));
      if (key.empty())
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": empty key");
      if (config.values.count(key))
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": duplicate key '" + key + "'");
      config.values[key] = value;
    }
  }

  if (const auto it = config.values.find("command"); it != config.values.end()) {
    config.command = it->second;
    config.values.erase(it);
  }
  if (const auto it = config.values.find("action"); it != config.values.end()) {
    config.action = it->second;
    config.values.erase(it);
  }
  return config;
}

// --- runners ----------------------------------------------------------------

namespace detail {

inline io::JsonNode energy_node(const gp::EnergyBreakdown& e) {
  io::JsonNode node = io::JsonNode::object();
  node["kinetic"] = e.kinetic;
  node["external"] = e.external;
  node["interaction"] = e.interaction;
  node["rotation"] = e.rotation;
  node["total"] = e.total;
  return node;
}

inline RadialPotential build_potential(const ParamBag& bag) {
  const std::string& kind = bag.text("potential");
  if (kind == "hard-core") return RadialPotential::hard_core(bag.number("R"));
  if (kind == "square-well")
    return RadialPotential::square_well(bag.number("V0"), bag.number("R"));
  if (kind == "gaussian")
    return RadialPotential::gaussian(bag.number("amplitude"), bag.number("width"));
  // tabulated: two-column CSV (r, v)
  if (!bag.has("table"))
    throw ValidationError("table: required when potential=table");
  const io::CsvTable csv = io::read_csv(bag.text("table"));
  std::vector<double> r, v;
  for (const auto& row : csv.rows) {
    if (row.size() != 2)
      throw ValidationError("table: expected exactly two columns (r, v)");
    r.push_back(row[0]);
    v.push_back(row[1]);
  }
  return RadialPotential::tabulated(std::move(r), std::move(v));
}

inline io::JsonNode run_scatter(const ParamBag& bag,
                                const std::filesystem::path& dir,
                                std::vector<std::string>& files) {
  const RadialPotential v = build_potential(bag);
  double r_max = bag.number("r_max");
  if (r_max == 0.0) r_max = std::max(2.5 * v.range(), 2.5);
  scattering::SolveOptions opts;
  opts.grid_points = static_cast<std::size_t>(bag.integer("grid_points"));
  const auto sol = scattering::solve_zero_energy(v, r_max, opts);

  std::vector<std::vector<double>> rows;
  rows.reserve(sol.r.size());
  for (std::size_t i = 0; i < sol.r.size(); ++i)
    rows.push_back({sol.r[i], sol.u[i], sol.f[i]});
  io::write_csv(dir / "solution.csv", {"r", "u", "f"}, rows);
  files.push_back("solution.csv");

  io::JsonNode result = io::JsonNode::object();
  result["a"] = sol.a;
  result["fit_residual"] = sol.fit_residual;
  result["window_consistency"] = sol.window_consistency;
  result["r_max"] = sol.r_max;
  result["potential_range"] = v.range();
  if (v.evaluable()) {
    result["a_integral_identity"] = scattering::scattering_length_integral(v, sol);
    result["a_born"] = v.born_scattering_length();
  }
  const double n_scale = bag.number("n_scale");
  if (n_scale != 1.0) {
    const double an = scattering::scaled_scattering_length(v, n_scale, r_max, opts);
    result["a_scaled"] = an;
    result["a_scaled_times_n"] = an * n_scale;
  }
  io::write_text(dir / "result.json", result.dump());
  files.push_back("result.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["grid_points"] = static_cast<long long>(opts.grid_points);
  tol["fit_window"] = opts.fit_window;
  return tol;
}

inline io::JsonNode run_ideal(const ParamBag& bag,
                              const std::filesystem::path& dir,
                              std::vector<std::string>& files) {
  const double rho = bag.number("rho");
  const double beta_min = bag.number("beta_min");
  const double beta_max = bag.number("beta_max");
  const long long steps = bag.integer("beta_steps");
  if (beta_max < beta_min)
    throw ValidationError("beta_max: must be >= beta_min");

  std::vector<std::vector<double>> rows;
  for (long long i = 0; i < steps; ++i) {
    const double beta =
        steps == 1 ? beta_min
                   : beta_min + (beta_max - beta_min) *
                                    (static_cast<double>(i) /
                                     static_cast<double>(steps - 1));
    const auto ts = ideal_gas::TorusSpec::make(1.0, beta);
    const auto mu = ideal_gas::solve_mu(ts, rho);
    rows.push_back({beta, mu.mu, mu.rho0 / rho,
                    ideal_gas::free_energy_ideal(beta, rho)});
  }
  io::write_csv(dir / "sweep.csv",
                {"beta", "mu", "condensate_fraction", "free_energy"}, rows);
  files.push_back("sweep.csv");

  io::JsonNode result = io::JsonNode::object();
  result["rho"] = rho;
  result["critical_beta"] = ideal_gas::critical_beta(rho);
  result["zeta_three_halves"] = ideal_gas::zeta_three_halves();
  io::write_text(dir / "result.json", result.dump());
  files.push_back("result.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["mu_density_residual"] = 1e-10;
  return tol;
}

inline GridSpec build_grid(const ParamBag& bag) {
  const int dim = static_cast<int>(bag.integer("dim"));
  const int n = static_cast<int>(bag.integer("n"));
  const double length = bag.number("length");
  if (bag.text("box") == "torus") return GridSpec::torus(dim, n, length);
  return GridSpec::box(dim, n, 0.5 * length);
}

inline gp::Field build_initial(const ParamBag& bag, const GridSpec& grid) {
  const std::string& init = bag.text("init");
  if (init == "constant") return gp::constant_state(grid);
  if (init == "gaussian") return gp::gaussian_state(grid, bag.number("init_width"));
  if (init == "random")
    return gp::random_state(grid,
                            static_cast<std::uint64_t>(bag.integer("seed")));
  // file: binary field + sidecar written by an earlier run
  if (!bag.has("init_field"))
    throw ValidationError("init_field: required when init=file");
  return io::read_field(bag.text("init_field"), grid);
}

inline gp::GpProblem build_problem(const ParamBag& bag, const GridSpec& grid,
                                   double omega) {
  gp::GpProblem p;
  p.grid = grid;
  p.omega = omega;
  const double a = bag.number("a");
  p.coupling = grid.dim == 3 ? gp::coupling_3d(a)
                             : gp::coupling_2d(bag.number("n_particles"), a);
  if (bag.text("trap") == "harmonic")
    p.v_ext = gp::harmonic_potential(grid, bag.number("trap_strength"));
  return p;
}

inline io::JsonNode run_gp(const ParamBag& bag, const std::filesystem::path& dir,
                           std::vector<std::string>& files, bool rotating) {
  const GridSpec grid = build_grid(bag);
  const double omega = rotating ? bag.number("omega") : 0.0;
  const gp::GpProblem problem = build_problem(bag, grid, omega);
  const SpectralWorkspace ws(grid);
  const gp::Field initial = build_initial(bag, grid);

  gp::MinimizeOptions opts;
  opts.tolerance = bag.number("tolerance");
  opts.max_iterations = static_cast<int>(bag.integer("max_iterations"));
  const auto res = rotating
                       ? gp::minimize_gp_rotating(problem, ws, initial, opts)
                       : gp::minimize_gp(problem, ws, initial, opts);

  io::write_field(dir / "field", grid, res.phi);
  files.push_back("field.f64");
  files.push_back("field.json");
  io::write_field_csv(dir / "field.csv", grid, res.phi);
  files.push_back("field.csv");

  io::JsonNode result = io::JsonNode::object();
  result["energy"] = energy_node(res.energy);
  result["mu"] = res.mu;
  result["residual"] = res.residual;
  result["iterations"] = res.iterations;
  result["dt_final"] = res.dt_final;
  result["coupling"] = problem.coupling;
  io::write_text(dir / "result.json", result.dump());
  files.push_back("result.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["tolerance"] = opts.tolerance;
  tol["max_iterations"] = opts.max_iterations;
  return tol;
}

inline io::JsonNode run_gp_min(const ParamBag& bag,
                               const std::filesystem::path& dir,
                               std::vector<std::string>& files) {
  return run_gp(bag, dir, files, false);
}

inline io::JsonNode run_gp_rotate(const ParamBag& bag,
                                  const std::filesystem::path& dir,
                                  std::vector<std::string>& files) {
  return run_gp(bag, dir, files, true);
}

inline io::JsonNode run_tdgp(const ParamBag& bag,
                             const std::filesystem::path& dir,
                             std::vector<std::string>& files) {
  const GridSpec grid = build_grid(bag);
  const gp::GpProblem problem = build_problem(bag, grid, 0.0);
  const SpectralWorkspace ws(grid);
  gp::Field initial = build_initial(bag, grid);

  const double dt = bag.number("dt");
  const int steps = static_cast<int>(bag.integer("steps"));
  const int snapshot_every = static_cast<int>(bag.integer("snapshot_every"));

  io::JsonNode snapshots = io::JsonNode::array();
  const auto snapshot = [&](int step, double time, const gp::Field& phi) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06d", step);
    io::write_field(dir / name, grid, phi);
    files.push_back(std::string(name) + ".f64");
    files.push_back(std::string(name) + ".json");
    io::JsonNode entry = io::JsonNode::object();
    entry["step"] = step;
    entry["time"] = time;
    entry["norm"] = gp::field_norm(grid, phi);
    entry["energy"] = gp::evaluate(problem, ws, phi).energy.total;
    entry["file"] = std::string(name) + ".f64";
    snapshots.push_back(std::move(entry));
  };
  const auto res = tdgp::evolve(problem, ws, std::move(initial), dt, steps,
                                snapshot, snapshot_every);

  io::write_field(dir / "final", grid, res.phi);
  files.push_back("final.f64");
  files.push_back("final.json");

  io::JsonNode traj = io::JsonNode::object();
  traj["dt"] = dt;
  traj["steps"] = res.steps;
  traj["time"] = res.time;
  traj["norm_initial"] = res.norm_initial;
  traj["norm_final"] = res.norm_final;
  traj["energy_initial"] = energy_node(res.energy_initial);
  traj["energy_final"] = energy_node(res.energy_final);
  traj["snapshots"] = std::move(snapshots);
  io::write_text(dir / "trajectory.json", traj.dump());
  files.push_back("trajectory.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["dt"] = dt;
  return tol;
}

inline io::JsonNode run_bogo_dispersion(const ParamBag& bag,
                                        const std::filesystem::path& dir,
                                        std::vector<std::string>& files) {
  const double a = bag.number("a");
  const int shells = static_cast<int>(bag.integer("shells"));
  const auto counts = lattice::shell_counts(shells);
  std::vector<std::vector<double>> rows;
  for (int s = 1; s <= shells; ++s) {
    if (counts[static_cast<std::size_t>(s)] == 0) continue;
    const double p2 = bogoliubov::kTwoPi * bogoliubov::kTwoPi * s;
    rows.push_back({std::sqrt(p2), bogoliubov::detail::dispersion_from_p2(p2, a)});
  }
  io::write_csv(dir / "dispersion.csv", {"p", "energy"}, rows);
  files.push_back("dispersion.csv");
  return io::JsonNode::object();
}

inline io::JsonNode run_bogo_energy(const ParamBag& bag,
                                    const std::filesystem::path& dir,
                                    std::vector<std::string>& files) {
  double e_lambda_value;
  if (bag.has("e_lambda")) {
    e_lambda_value = bag.number("e_lambda");
  } else {
    bogoliubov::ELambdaOptions opts;
    opts.threads = static_cast<unsigned>(bag.integer("threads"));
    e_lambda_value = bogoliubov::e_lambda(opts).value;
  }
  const auto res = bogoliubov::ground_state_energy(
      bag.integer("n"), bag.number("a"), bag.number("cutoff"), e_lambda_value);

  io::JsonNode result = io::JsonNode::object();
  result["total"] = res.total;
  result["term_leading"] = res.term_leading;
  result["term_finite_volume"] = res.term_finite_volume;
  result["term_bogoliubov_sum"] = res.term_bogoliubov_sum;
  result["cutoff_used"] = res.cutoff_used;
  result["tail_estimate"] = res.tail_estimate;
  result["e_lambda_used"] = res.e_lambda_used;
  result["caveat"] = bogoliubov::EnergyFormulaResult::kCaveat;
  io::write_text(dir / "energy.json", result.dump());
  files.push_back("energy.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["tail_estimate"] = res.tail_estimate;
  return tol;
}

inline io::JsonNode run_bogo_elambda(const ParamBag& bag,
                                     const std::filesystem::path& dir,
                                     std::vector<std::string>& files) {
  bogoliubov::ELambdaOptions opts;
  opts.m_max = static_cast<int>(bag.integer("m_max"));
  opts.extrapolation_levels = static_cast<int>(bag.integer("levels"));
  opts.threads = static_cast<unsigned>(bag.integer("threads"));
  const auto res = bogoliubov::e_lambda(opts);

  io::JsonNode result = io::JsonNode::object();
  result["value"] = res.value;
  result["uncertainty"] = res.uncertainty;
  result["m_max"] = res.m_max;
  result["extrapolation_levels"] = res.extrapolation_levels;
  io::JsonNode means = io::JsonNode::array();
  for (double m : res.window_means) means.push_back(m);
  result["window_means"] = std::move(means);
  io::write_text(dir / "elambda.json", result.dump());
  files.push_back("elambda.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["uncertainty"] = res.uncertainty;
  return tol;
}

inline io::JsonNode run_bogo_depletion(const ParamBag& bag,
                                       const std::filesystem::path& dir,
                                       std::vector<std::string>& files) {
  const auto res = bogoliubov::depletion(bag.number("a"), bag.number("cutoff"));
  io::JsonNode result = io::JsonNode::object();
  result["value"] = res.value;
  result["tail_estimate"] = res.tail_estimate;
  result["cutoff_used"] = res.cutoff_used;
  io::write_text(dir / "depletion.json", result.dump());
  files.push_back("depletion.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["tail_estimate"] = res.tail_estimate;
  return tol;
}

inline io::JsonNode run_bogo_spectrum(const ParamBag& bag,
                                      const std::filesystem::path& dir,
                                      std::vector<std::string>& files) {
  const auto lines = bogoliubov::enumerate_spectrum(
      bag.number("a"), bag.number("zeta"),
      static_cast<std::uint64_t>(bag.integer("budget")));
  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (const auto& line : lines)
    rows.push_back({line.energy, static_cast<double>(line.degeneracy)});
  io::write_csv(dir / "spectrum.csv", {"energy", "degeneracy"}, rows);
  files.push_back("spectrum.csv");

  io::JsonNode tol = io::JsonNode::object();
  tol["line_merge_tolerance"] = 1e-9;
  return tol;
}

inline io::JsonNode run_oracle_pair(const ParamBag& bag,
                                    const std::filesystem::path& dir,
                                    std::vector<std::string>& files) {
  const fock::QuadraticHamiltonian h{{bag.number("D")},
                                     {bag.number("B")},
                                     bag.number("shift")};
  const auto diag = fock::symplectic_diagonalize(h);
  const auto space = fock::FockSpace::product(
      2, static_cast<int>(bag.integer("nmax")),
      static_cast<std::uint64_t>(bag.integer("budget")));
  const auto ground = fock::exact_ground_state(h, space);
  const auto levels = fock::excited_levels(h, space, 2);

  io::JsonNode result = io::JsonNode::object();
  result["D"] = h.d[0];
  result["B"] = h.b[0];
  result["shift"] = h.shift;
  result["tau"] = diag.tau[0];
  result["eps"] = diag.eps[0];
  result["gap"] = levels[1] - levels[0];
  result["gap_minus_eps"] = levels[1] - levels[0] - diag.eps[0];
  result["ground_energy"] = ground.energy;
  result["ground_shift"] = diag.ground_shift;
  io::JsonNode occ = io::JsonNode::array();
  for (double o : ground.occupations) occ.push_back(o);
  result["occupations"] = std::move(occ);
  result["occupation_total"] = ground.occupations[0] + ground.occupations[1];
  result["occupation_predicted"] = (h.d[0] - diag.eps[0]) / diag.eps[0];
  result["boundary_weight"] = ground.boundary_weight;
  io::write_text(dir / "pair.json", result.dump());
  files.push_back("pair.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["eigensolver_residual"] = 1e-10;
  return tol;
}

inline io::JsonNode run_oracle_map(const ParamBag& bag,
                                   const std::filesystem::path& dir,
                                   std::vector<std::string>& files) {
  const auto report = fock::excitation_map_check(
      bag.integer("n"), static_cast<int>(bag.integer("excited")),
      static_cast<std::uint64_t>(bag.integer("budget")));
  io::JsonNode result = io::JsonNode::object();
  result["sector_dimension"] = report.sector_dimension;
  result["transfer_deviation"] = report.transfer_deviation;
  result["condensate_number_deviation"] = report.condensate_number_deviation;
  result["raising_deviation"] = report.raising_deviation;
  result["composed_deviation"] = report.composed_deviation;
  io::write_text(dir / "map.json", result.dump());
  files.push_back("map.json");

  io::JsonNode tol = io::JsonNode::object();
  tol["identity_tolerance"] = 1e-12;
  return tol;
}

inline io::JsonNode run_oracle_levels(const ParamBag& bag,
                                      const std::filesystem::path& dir,
                                      std::vector<std::string>& files) {
  const auto lines = bogoliubov::enumerate_levels(
      bag.list("modes"), bag.number("threshold"),
      static_cast<std::uint64_t>(bag.integer("budget")));
  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (const auto& line : lines)
    rows.push_back({line.energy, static_cast<double>(line.degeneracy)});
  io::write_csv(dir / "levels.csv", {"energy", "degeneracy"}, rows);
  files.push_back("levels.csv");

  io::JsonNode tol = io::JsonNode::object();
  tol["line_merge_tolerance"] = 1e-12;
  return tol;
}

}  // namespace detail

// --- schema table -----------------------------------------------------------

inline const std::vector<CommandSchema>& schemas() {
  static const std::vector<CommandSchema> table = [] {
    using P = ParamSpec;
    std::vector<CommandSchema> t;

    t.push_back(
        {"scatter", "", "zero-energy scattering length of a radial potential",
         {P::text("potential", "", "potential kind")
              .require()
              .one_of({"hard-core", "square-well", "gaussian", "table"}),
          P::real("R", "1", "core or well radius").positive(),
          P::real("V0", "1", "square-well height").positive(),
          P::real("amplitude", "1", "gaussian height").positive(),
          P::real("width", "0.25", "gaussian width").positive(),
          P::path("table", "", "CSV file with (r, v) rows"),
          P::real("n_scale", "1", "evaluate the rescaled n^2 v(n r) as well")
              .at_least(1.0),
          P::real("r_max", "0", "outer radius (0 = auto)").non_negative(),
          P::integer("grid_points", "8193", "marching nodes").at_least(64)},
         detail::run_scatter});

    t.push_back(
        {"ideal", "", "ideal-gas condensation sweep on the unit torus",
         {P::real("rho", "", "particle density").require().positive(),
          P::real("beta_min", "", "lowest inverse temperature").require().positive(),
          P::real("beta_max", "", "highest inverse temperature").require().positive(),
          P::integer("beta_steps", "11", "sample count").at_least(1)},
         detail::run_ideal});

    const std::vector<P> gp_common = {
        P::integer("dim", "3", "spatial dimension").between(2, 3),
        P::integer("n", "32", "grid points per axis").at_least(4),
        P::real("length", "1", "box edge length").positive(),
        P::text("box", "torus", "domain layout").one_of({"torus", "centered"}),
        P::text("trap", "none", "external potential").one_of({"none", "harmonic"}),
        P::real("trap_strength", "1", "harmonic prefactor").positive(),
        P::real("a", "0.01", "scattering length").non_negative(),
        P::real("n_particles", "100", "particle number (2d coupling)").positive(),
        P::text("init", "gaussian", "initial state")
            .one_of({"constant", "gaussian", "random", "file"}),
        P::real("init_width", "0.2", "gaussian init width").positive(),
        P::path("init_field", "", "field base path for init=file")};

    {
      std::vector<P> params = gp_common;
      params.push_back(P::real("tolerance", "1e-9", "residual target").positive());
      params.push_back(
          P::integer("max_iterations", "20000", "descent budget").at_least(1));
      t.push_back({"gp-min", "", "ground state of the energy functional",
                   params, detail::run_gp_min});
      params.push_back(
          P::real("omega", "0.5", "rotation speed about z").non_negative());
      t.push_back({"gp-rotate", "", "rotating-frame ground state", params,
                   detail::run_gp_rotate});
    }

    {
      std::vector<P> params = gp_common;
      params.push_back(P::real("dt", "0.001", "time step").positive());
      params.push_back(P::integer("steps", "1000", "step count").non_negative());
      params.push_back(
          P::integer("snapshot_every", "0", "snapshot interval (0 = none)")
              .non_negative());
      t.push_back({"tdgp", "", "unitary time evolution", params,
                   detail::run_tdgp});
    }

    t.push_back({"bogo", "dispersion", "excitation dispersion over lattice shells",
                 {P::real("a", "0.01", "scattering length").non_negative(),
                  P::integer("shells", "8", "highest |m|^2 shell").at_least(1)},
                 detail::run_bogo_dispersion});

    t.push_back(
        {"bogo", "energy", "second-order ground-state energy",
         {P::integer("n", "100", "particle number").at_least(2),
          P::real("a", "0.01", "scattering length").non_negative(),
          P::real("cutoff", "50.265482457436689", "momentum cutoff (default 16 pi)")
              .positive(),
          P::real("e_lambda", "", "override for the finite-volume constant")},
         detail::run_bogo_energy});

    t.push_back(
        {"bogo", "elambda", "finite-volume lattice constant",
         {P::integer("m_max", "256", "largest cube half-side").at_least(8),
          P::integer("levels", "3", "dyadic extrapolation levels").at_least(2)},
         detail::run_bogo_elambda});

    t.push_back(
        {"bogo", "depletion", "condensate depletion sum",
         {P::real("a", "0.01", "scattering length").non_negative(),
          P::real("cutoff", "50.265482457436689", "momentum cutoff (default 16 pi)")
              .positive()},
         detail::run_bogo_depletion});

    t.push_back(
        {"bogo", "spectrum", "excitation spectrum lines below a threshold",
         {P::real("a", "0", "scattering length").non_negative(),
          P::real("zeta", "", "energy threshold").require().positive(),
          P::integer("budget", "1000000", "enumeration budget").at_least(1)},
         detail::run_bogo_spectrum});

    t.push_back(
        {"oracle", "pair", "exact +-p pair diagonalization vs closed form",
         {P::real("D", "", "diagonal coefficient").require().positive(),
          P::real("B", "", "pairing coefficient").require(),
          P::real("shift", "0", "constant energy offset"),
          P::integer("nmax", "60", "per-mode occupation cap").at_least(2),
          P::integer("budget", "20000", "basis size budget").at_least(1)},
         detail::run_oracle_pair});

    t.push_back(
        {"oracle", "map", "excitation-map identities on a fixed-N sector",
         {P::integer("n", "3", "particle number").between(1, 6),
          P::integer("excited", "2", "excited modes").between(1, 7),
          P::integer("budget", "20000", "basis size budget").at_least(1)},
         detail::run_oracle_map});

    t.push_back(
        {"oracle", "levels", "level enumeration over explicit mode energies",
         {P::list("modes", "", "comma-separated mode energies").require().positive(),
          P::real("threshold", "", "energy threshold").require().positive(),
          P::integer("budget", "1000000", "enumeration budget").at_least(1)},
         detail::run_oracle_levels});

    // Keys shared by every command.
    for (CommandSchema& schema : t) {
      schema.params.push_back(
          P::path("output_dir", "", "output directory (config-level default)"));
      schema.params.push_back(P::integer("seed", "0", "seed for randomized pieces"));
      schema.params.push_back(
          P::integer("threads", "1", "worker threads for parallel sums")
              .at_least(1));
    }
    return t;
  }();
  return table;
}

inline const CommandSchema& find_schema(const std::string& command,
                                        const std::string& action) {
  for (const CommandSchema& schema : schemas())
    if (schema.command == command && schema.action == action) return schema;
  std::string known;
  for (const CommandSchema& schema : schemas())
    known += (known.empty() ? "" : ", ") + schema.command +
             (schema.action.empty() ? "" : " " + schema.action);
  throw ValidationError("unknown command '" + command +
                        (action.empty() ? "" : " " + action) +
                        "'; expected one of: " + known);
}

// --- orchestration ----------------------------------------------------------

struct RunOutcome {
  std::filesystem::path output_dir;
  std::vector<std::string> files;  // includes manifest.json
};

// Validates, resolves the output directory (CLI flag over BOSEGAS_OUT over
// config key over ./bosegas_out), runs the command, and writes a manifest
// that fingerprints the effective configuration.
inline RunOutcome run(const RunConfig& config, const std::string& out_flag = "") {
  const CommandSchema& schema = find_schema(config.command, config.action);
  const ParamBag bag = validate(schema, config.values);

  std::string dir_name = out_flag;
  if (dir_name.empty())
    if (const char* env = std::getenv("BOSEGAS_OUT"); env != nullptr && *env != '\0')
      dir_name = env;
  if (dir_name.empty() && bag.has("output_dir")) dir_name = bag.text("output_dir");
  if (dir_name.empty()) dir_name = "bosegas_out";
  const std::filesystem::path dir(dir_name);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " +
                        ec.message());

  std::vector<std::string> files;
  io::JsonNode tolerances = schema.runner(bag, dir, files);
  std::sort(files.begin(), files.end());

  // Canonical config: what the run actually used, defaults resolved.
  std::string canonical_lines = "command=" + config.command + "\n";
  if (!config.action.empty()) canonical_lines += "action=" + config.action + "\n";
  io::JsonNode config_node = io::JsonNode::object();
  for (const auto& [key, value] : bag.canonical) {
    canonical_lines += key + "=" + value + "\n";
    config_node[key] = value;
  }

  io::JsonNode manifest = io::JsonNode::object();
  manifest["command"] = config.command;
  if (!config.action.empty()) manifest["action"] = config.action;
  manifest["config"] = std::move(config_node);
  manifest["config_hash"] = "fnv1a64:" + io::hex64(io::fnv1a64(canonical_lines));
  io::JsonNode file_list = io::JsonNode::array();
  for (const auto& f : files) file_list.push_back(f);
  manifest["files"] = std::move(file_list);
  manifest["tolerances"] = std::move(tolerances);
  io::write_text(dir / "manifest.json", manifest.dump());
  files.push_back("manifest.json");

  return {dir, std::move(files)};
}

}  // namespace bosegas::cli
