#include "fhbeam/bench/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fhbeam::bench {

namespace {

struct Line {
  std::string section;
  std::string key;
  std::string value;
  int number = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const Line& ln, const std::string& origin) {
  try {
    std::size_t used = 0;
    const double v = std::stod(ln.value, &used);
    if (used != ln.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, ln.number, "expected a number for '" + ln.key + "', got '" + ln.value + "'");
  }
}

long long parse_int(const Line& ln, const std::string& origin) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(ln.value, &used);
    if (used != ln.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, ln.number, "expected an integer for '" + ln.key + "', got '" + ln.value + "'");
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  if (!s.empty() && s.back() == ',') out.push_back("");
  return out;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Key sets; anything else is rejected.
const std::set<std::string> kSystemKeys = {
    "cells",        "tx_antennas",     "rx_antennas",   "streams",
    "users_per_cell", "power_dbm",     "power_watts",   "noise_dbm",
    "noise_watts",  "weights",         "bs_spacing_m",  "cell_radius_m",
    "shadowing_sigma_db"};
const std::set<std::string> kExperimentKeys = {
    "scenario", "seeds", "sweep_antennas", "time_budget_seconds",
    "trace_outer_iter"};
const std::set<std::string> kSolverKeys = {
    "variant", "horizon", "max_outer_iters", "rel_tol", "spectral_refresh"};

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kConvergenceIters: return "convergence_iters";
    case Scenario::kConvergenceTime: return "convergence_time";
    case Scenario::kInnerQpTrace: return "inner_qp_trace";
    case Scenario::kAntennaSweep: return "antenna_sweep";
    case Scenario::kMulticellConvergenceIters: return "multicell_convergence_iters";
    case Scenario::kMulticellConvergenceTime: return "multicell_convergence_time";
  }
  return "unknown";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "convergence_iters") return Scenario::kConvergenceIters;
  if (name == "convergence_time") return Scenario::kConvergenceTime;
  if (name == "inner_qp_trace") return Scenario::kInnerQpTrace;
  if (name == "antenna_sweep") return Scenario::kAntennaSweep;
  if (name == "multicell_convergence_iters") return Scenario::kMulticellConvergenceIters;
  if (name == "multicell_convergence_time") return Scenario::kMulticellConvergenceTime;
  throw ConfigError("unknown scenario '" + name + "'");
}

void ExperimentSpec::validate() const {
  try {
    system.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid system: ") + e.what());
  }
  if (solvers.empty()) throw ConfigError("at least one [solver.<name>] is required");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  for (const auto& s : solvers) {
    try {
      s.config.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("invalid solver '" + s.name + "': " + e.what());
    }
  }
  if (scenario == Scenario::kAntennaSweep) {
    if (sweep_antennas.empty()) {
      throw ConfigError("antenna_sweep requires sweep_antennas");
    }
    if (!time_budget_seconds) {
      throw ConfigError("antenna_sweep requires time_budget_seconds");
    }
    for (int m : sweep_antennas) {
      if (m < system.rx_antennas) {
        throw ConfigError("sweep_antennas entries must be >= rx_antennas");
      }
    }
  } else if (!sweep_antennas.empty()) {
    throw ConfigError("sweep_antennas is only valid for the antenna_sweep scenario");
  }
  if (scenario == Scenario::kInnerQpTrace) {
    if (trace_outer_iter < 1) {
      throw ConfigError("trace_outer_iter must be >= 1");
    }
    for (const auto& s : solvers) {
      if (s.config.variant == SolverVariant::kExactWmmse) {
        throw ConfigError("solver '" + s.name +
                          "': exact_wmmse has no inner gradient loop to trace");
      }
    }
  }
}

ExperimentSpec parse_config_text(const std::string& text, const std::string& origin) {
  std::vector<Line> lines;
  {
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int number = 0;
    std::set<std::string> seen;  // "section\nkey"
    while (std::getline(ss, raw)) {
      ++number;
      const auto hash = raw.find('#');
      std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (body.empty()) continue;
      if (body.front() == '[') {
        if (body.back() != ']') fail(origin, number, "unterminated section header");
        section = trim(body.substr(1, body.size() - 2));
        if (section.empty()) fail(origin, number, "empty section name");
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail(origin, number, "expected 'key = value'");
      Line ln;
      ln.section = section;
      ln.key = trim(body.substr(0, eq));
      ln.value = trim(body.substr(eq + 1));
      ln.number = number;
      if (ln.section.empty()) fail(origin, number, "key outside any [section]");
      if (ln.key.empty()) fail(origin, number, "empty key");
      if (ln.value.empty()) fail(origin, number, "empty value for '" + ln.key + "'");
      if (!seen.insert(ln.section + "\n" + ln.key).second) {
        fail(origin, number, "duplicate key '" + ln.key + "' in [" + ln.section + "]");
      }
      lines.push_back(std::move(ln));
    }
  }

  ExperimentSpec spec;
  spec.system.weights.clear();
  std::map<std::string, NamedSolver> solvers;  // insertion order handled below
  std::vector<std::string> solver_order;
  bool power_set = false;
  bool noise_set = false;

  for (const auto& ln : lines) {
    if (ln.section == "system") {
      if (!kSystemKeys.count(ln.key)) {
        fail(origin, ln.number, "unknown [system] key '" + ln.key + "'");
      }
      if (ln.key == "cells") spec.system.num_cells = static_cast<int>(parse_int(ln, origin));
      else if (ln.key == "tx_antennas") spec.system.tx_antennas = static_cast<int>(parse_int(ln, origin));
      else if (ln.key == "rx_antennas") spec.system.rx_antennas = static_cast<int>(parse_int(ln, origin));
      else if (ln.key == "streams") spec.system.streams = static_cast<int>(parse_int(ln, origin));
      else if (ln.key == "users_per_cell") spec.system.users_per_cell = static_cast<int>(parse_int(ln, origin));
      else if (ln.key == "power_dbm" || ln.key == "power_watts") {
        if (power_set) fail(origin, ln.number, "power specified twice");
        power_set = true;
        const double v = parse_double(ln, origin);
        spec.system.power_budget = ln.key == "power_dbm" ? dbm_to_watts(v) : v;
      } else if (ln.key == "noise_dbm" || ln.key == "noise_watts") {
        if (noise_set) fail(origin, ln.number, "noise specified twice");
        noise_set = true;
        const double v = parse_double(ln, origin);
        spec.system.noise_power = ln.key == "noise_dbm" ? dbm_to_watts(v) : v;
      } else if (ln.key == "weights") {
        for (const auto& tok : split_commas(ln.value)) {
          Line sub = ln;
          sub.value = tok;
          spec.system.weights.push_back(parse_double(sub, origin));
        }
      } else if (ln.key == "bs_spacing_m") spec.system.bs_spacing_m = parse_double(ln, origin);
      else if (ln.key == "cell_radius_m") spec.system.cell_radius_m = parse_double(ln, origin);
      else if (ln.key == "shadowing_sigma_db") spec.system.shadowing_sigma_db = parse_double(ln, origin);
    } else if (ln.section == "experiment") {
      if (!kExperimentKeys.count(ln.key)) {
        fail(origin, ln.number, "unknown [experiment] key '" + ln.key + "'");
      }
      if (ln.key == "scenario") {
        try {
          spec.scenario = scenario_from_name(ln.value);
        } catch (const ConfigError& e) {
          fail(origin, ln.number, e.what());
        }
      } else if (ln.key == "seeds") {
        spec.seeds.clear();
        for (const auto& tok : split_commas(ln.value)) {
          Line sub = ln;
          sub.value = tok;
          spec.seeds.push_back(static_cast<std::uint64_t>(parse_int(sub, origin)));
        }
      } else if (ln.key == "sweep_antennas") {
        spec.sweep_antennas.clear();
        for (const auto& tok : split_commas(ln.value)) {
          Line sub = ln;
          sub.value = tok;
          spec.sweep_antennas.push_back(static_cast<int>(parse_int(sub, origin)));
        }
      } else if (ln.key == "time_budget_seconds") {
        spec.time_budget_seconds = parse_double(ln, origin);
      } else if (ln.key == "trace_outer_iter") {
        spec.trace_outer_iter = static_cast<int>(parse_int(ln, origin));
      }
    } else if (ln.section.rfind("solver.", 0) == 0) {
      const std::string name = ln.section.substr(7);
      if (name.empty()) fail(origin, ln.number, "solver section needs a name");
      if (!kSolverKeys.count(ln.key)) {
        fail(origin, ln.number, "unknown [solver] key '" + ln.key + "'");
      }
      auto it = solvers.find(name);
      if (it == solvers.end()) {
        it = solvers.emplace(name, NamedSolver{name, SolverConfig{}}).first;
        solver_order.push_back(name);
      }
      SolverConfig& sc = it->second.config;
      if (ln.key == "variant") {
        try {
          sc.variant = variant_from_name(ln.value);
        } catch (const std::invalid_argument& e) {
          fail(origin, ln.number, e.what());
        }
      } else if (ln.key == "horizon") {
        sc.horizon = static_cast<int>(parse_int(ln, origin));
      } else if (ln.key == "max_outer_iters") {
        sc.max_outer_iters = static_cast<int>(parse_int(ln, origin));
      } else if (ln.key == "rel_tol") {
        sc.rel_tol = parse_double(ln, origin);
      } else if (ln.key == "spectral_refresh") {
        if (ln.value == "every_outer") sc.spectral_refresh = SpectralRefresh::kEveryOuter;
        else if (ln.value == "once") sc.spectral_refresh = SpectralRefresh::kOnce;
        else fail(origin, ln.number, "spectral_refresh must be every_outer or once");
      }
    } else {
      fail(origin, ln.number, "unknown section [" + ln.section + "]");
    }
  }

  for (const auto& name : solver_order) {
    spec.solvers.push_back(solvers.at(name));
  }
  if (spec.solvers.empty()) {
    // Default comparison set mirroring the benchmark scenarios.
    for (auto variant : {SolverVariant::kExactWmmse, SolverVariant::kFiniteHorizon,
                         SolverVariant::kConstantGd}) {
      NamedSolver s;
      s.name = variant_name(variant);
      s.config.variant = variant;
      spec.solvers.push_back(std::move(s));
    }
  }
  if (spec.seeds.empty()) spec.seeds = {1};
  spec.validate();
  return spec;
}

ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize_config(const ExperimentSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "[system]\n";
  out << "cells = " << spec.system.num_cells << "\n";
  out << "tx_antennas = " << spec.system.tx_antennas << "\n";
  out << "rx_antennas = " << spec.system.rx_antennas << "\n";
  out << "streams = " << spec.system.streams << "\n";
  out << "users_per_cell = " << spec.system.users_per_cell << "\n";
  out << "power_watts = " << spec.system.power_budget << "\n";
  out << "noise_watts = " << spec.system.noise_power << "\n";
  if (!spec.system.weights.empty()) {
    out << "weights = ";
    for (std::size_t i = 0; i < spec.system.weights.size(); ++i) {
      out << (i ? "," : "") << spec.system.weights[i];
    }
    out << "\n";
  }
  out << "bs_spacing_m = " << spec.system.bs_spacing_m << "\n";
  out << "cell_radius_m = " << spec.system.cell_radius_m << "\n";
  out << "shadowing_sigma_db = " << spec.system.shadowing_sigma_db << "\n";
  out << "\n[experiment]\n";
  out << "scenario = " << scenario_name(spec.scenario) << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    out << (i ? "," : "") << spec.seeds[i];
  }
  out << "\n";
  if (!spec.sweep_antennas.empty()) {
    out << "sweep_antennas = ";
    for (std::size_t i = 0; i < spec.sweep_antennas.size(); ++i) {
      out << (i ? "," : "") << spec.sweep_antennas[i];
    }
    out << "\n";
  }
  if (spec.time_budget_seconds) {
    out << "time_budget_seconds = " << *spec.time_budget_seconds << "\n";
  }
  if (spec.scenario == Scenario::kInnerQpTrace) {
    out << "trace_outer_iter = " << spec.trace_outer_iter << "\n";
  }
  for (const auto& s : spec.solvers) {
    out << "\n[solver." << s.name << "]\n";
    out << "variant = " << variant_name(s.config.variant) << "\n";
    out << "horizon = " << s.config.horizon << "\n";
    out << "max_outer_iters = " << s.config.max_outer_iters << "\n";
    out << "rel_tol = " << s.config.rel_tol << "\n";
    out << "spectral_refresh = "
        << (s.config.spectral_refresh == SpectralRefresh::kOnce ? "once"
                                                                : "every_outer")
        << "\n";
  }
  return out.str();
}

}  // namespace fhbeam::bench
