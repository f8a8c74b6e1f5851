#include "fhbeam/bench/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "fhbeam/bench/trace_io.hpp"

namespace fhbeam::bench {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string trace_filename(const ExperimentSpec& spec, const NamedSolver& solver,
                           int m, std::uint64_t seed) {
  return scenario_name(spec.scenario) + "__" + solver.name + "__M" +
         std::to_string(m) + "__seed" + std::to_string(seed) + ".csv";
}

IterationTrace collect_inner_trace(const ChannelSet& channels,
                                   const SolverConfig& cfg, int traced_outer) {
  IterationTrace inner;
  const auto t0 = Clock::now();
  auto seconds = [&t0] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  auto sum_qp_objective = [&channels](const PrecoderSet& v,
                                      const std::vector<fp::QuadraticProgram>& qps) {
    double acc = 0.0;
    for (int l = 0; l < channels.config.num_cells; ++l) {
      if (qps[static_cast<std::size_t>(l)].degenerate) continue;
      for (int k = 0; k < channels.config.users_per_cell; ++k) {
        acc += fp::qp_objective(qps[static_cast<std::size_t>(l)], v.at(l, k), k);
      }
    }
    return acc;
  };

  InnerHooks hooks;
  hooks.before_inner = [&](int outer, const PrecoderSet& v,
                           const std::vector<fp::QuadraticProgram>& qps,
                           const std::vector<StepSchedule>&) {
    if (outer != traced_outer) return;
    inner.records.push_back(
        {outer, 0, seconds(), objective_g(channels, v), sum_qp_objective(v, qps)});
  };
  hooks.after_inner_step = [&](int outer, int step, const PrecoderSet& v,
                               const std::vector<fp::QuadraticProgram>& qps) {
    if (outer != traced_outer) return;
    inner.records.push_back({outer, step + 1, seconds(),
                             objective_g(channels, v),
                             sum_qp_objective(v, qps)});
  };
  run_solver(channels, cfg, {}, &hooks);
  if (inner.records.empty()) {
    throw std::runtime_error(
        "inner_qp_trace: the run never reached outer iteration " +
        std::to_string(traced_outer));
  }
  return inner;
}

void write_summary(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "'");
  out << "scenario,variant,M,seed,final_wsr_bits,total_seconds,outer_iters\n";
  for (const auto& r : rows) {
    out << r.scenario << "," << r.variant << "," << r.tx_antennas << ","
        << r.seed << ",";
    if (r.error) {
      out << "error";
    } else {
      out << format_double(r.final_wsr_bits, "%.15g");
    }
    out << "," << format_double(r.total_seconds, "%.6f") << ","
        << format_double(r.outer_iters, "%g") << "\n";
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::string& out_dir) {
  spec.validate();
  fs::create_directories(out_dir);

  ExperimentResult result;
  std::vector<int> antennas = spec.scenario == Scenario::kAntennaSweep
                                  ? spec.sweep_antennas
                                  : std::vector<int>{spec.system.tx_antennas};

  for (const std::uint64_t seed : spec.seeds) {
    for (const int m : antennas) {
      SystemConfig sys = spec.system;
      sys.tx_antennas = m;
      const ChannelSet channels = generate_channels(sys, seed);
      for (const auto& solver : spec.solvers) {
        SolverConfig cfg = solver.config;
        cfg.seed = seed;
        if (spec.time_budget_seconds) {
          cfg.time_budget_seconds = spec.time_budget_seconds;
        }

        SummaryRow row;
        row.scenario = scenario_name(spec.scenario);
        row.variant = solver.name;
        row.tx_antennas = m;
        row.seed = std::to_string(seed);
        try {
          IterationTrace trace;
          if (spec.scenario == Scenario::kInnerQpTrace) {
            trace = collect_inner_trace(channels, cfg, spec.trace_outer_iter);
            row.final_wsr_bits = trace.records.back().wsr_bits;
            row.total_seconds = trace.records.back().cumulative_seconds;
            row.outer_iters = spec.trace_outer_iter;
          } else {
            const SolverResult run = run_solver(channels, cfg);
            trace = run.trace;
            row.final_wsr_bits = run.final_wsr_bits;
            row.total_seconds = trace.records.back().cumulative_seconds;
            row.outer_iters = run.outer_iters;
          }
          TraceMeta meta;
          meta.scenario = row.scenario;
          meta.variant = solver.name;
          meta.seed = seed;
          meta.tx_antennas = m;
          meta.rx_antennas = sys.rx_antennas;
          meta.users_per_cell = sys.users_per_cell;
          meta.streams = sys.streams;
          meta.num_cells = sys.num_cells;
          meta.horizon = cfg.horizon;
          const std::string path =
              (fs::path(out_dir) / trace_filename(spec, solver, m, seed)).string();
          emit_trace(trace, meta, path);
          validate_trace_file(path);
          result.trace_files.push_back(path);
        } catch (const std::exception& e) {
          row.error = true;
          row.error_message = e.what();
          result.any_solver_error = true;
          std::cerr << "solver '" << solver.name << "' failed (seed " << seed
                    << ", M " << m << "): " << e.what() << "\n";
        }
        result.rows.push_back(std::move(row));
      }
    }
  }

  // Mean-over-seeds rows per (variant, M); error runs are excluded.
  std::map<std::pair<std::string, int>, std::vector<const SummaryRow*>> groups;
  for (const auto& r : result.rows) {
    if (!r.error) groups[{r.variant, r.tx_antennas}].push_back(&r);
  }
  std::vector<SummaryRow> means;
  for (const auto& solver : spec.solvers) {
    for (const int m : antennas) {
      const auto it = groups.find({solver.name, m});
      if (it == groups.end() || it->second.empty()) continue;
      SummaryRow mean;
      mean.scenario = scenario_name(spec.scenario);
      mean.variant = solver.name;
      mean.tx_antennas = m;
      mean.seed = "mean";
      for (const SummaryRow* r : it->second) {
        mean.final_wsr_bits += r->final_wsr_bits;
        mean.total_seconds += r->total_seconds;
        mean.outer_iters += r->outer_iters;
      }
      const double n = static_cast<double>(it->second.size());
      mean.final_wsr_bits /= n;
      mean.total_seconds /= n;
      mean.outer_iters /= n;
      means.push_back(std::move(mean));
    }
  }
  std::vector<SummaryRow> all_rows = result.rows;
  all_rows.insert(all_rows.end(), means.begin(), means.end());
  write_summary((fs::path(out_dir) / "summary.csv").string(), all_rows);
  result.rows = std::move(all_rows);
  return result;
}

}  // namespace fhbeam::bench
