#pragma once

// Parameter sweeps: a grid of independent cells over alpha, data scale, and
// (for the power-law source) the exponent p. Cells run in a worker pool and
// the rows are merged in cell order, so the CSV is byte-identical no matter
// how the pool schedules them. A cell whose parameters violate a theorem
// hypothesis is recorded as "rejected" with the validator's message; it is a
// verdict, not a failure of the sweep.

#include <atomic>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "tfpp/config.hpp"
#include "tfpp/io.hpp"

namespace tfpp {

struct SweepRanges {
  std::vector<double> alphas;
  std::vector<double> scales;
  std::vector<double> ps;
};

struct SweepRow {
  double alpha = 0.0;
  double scale = 0.0;
  double p = 0.0;
  std::string outcome;  // global | blowup | nonconv | rejected
  std::optional<double> t_low;
  std::optional<double> t_high;
  int iterations = 0;
  double final_norm = 0.0;
  std::string note;
};

inline std::pair<RunConfig, SweepRanges> parse_sweep_config(const nlohmann::json& j) {
  RunConfig base = parse_config(j);
  if (!j.contains("sweep"))
    throw std::invalid_argument("sweep: config needs a \"sweep\" block with ranges");
  const nlohmann::json& sw = j["sweep"];

  SweepRanges ranges;
  auto read_range = [&](const char* key, double fallback) {
    std::vector<double> values{fallback};
    if (sw.contains(key)) {
      values = sw[key].get<std::vector<double>>();
      if (values.empty())
        throw std::invalid_argument(std::string("sweep: empty range for \"") + key + "\"");
    }
    return values;
  };
  ranges.alphas = read_range("alpha", base.alpha);
  ranges.scales = read_range("scale", 1.0);
  ranges.ps = read_range("p", base.source ? base.source->p : 3.0);
  if (ranges.ps.size() > 1 &&
      (!base.source || base.source->kind != SourceKind::polynomial))
    throw std::invalid_argument("sweep: a p range needs the power-law source");
  return {std::move(base), std::move(ranges)};
}

inline std::pair<RunConfig, SweepRanges> parse_sweep_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("sweep: cannot open file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("sweep: invalid JSON: ") + err.what());
  }
  return parse_sweep_config(j);
}

namespace detail {

inline RunConfig sweep_cell_config(const RunConfig& base, double alpha, double scale, double p) {
  RunConfig cfg = base;
  cfg.alpha = alpha;
  if (cfg.source && cfg.source->kind == SourceKind::polynomial) cfg.source->p = p;
  if (cfg.u0.profile == "modal-list")
    for (double& c : cfg.u0.coeffs) c *= scale;
  else
    cfg.u0.amplitude *= scale;
  return cfg;
}

inline SweepRow run_sweep_cell(const RunConfig& base, double alpha, double scale, double p) {
  SweepRow row;
  row.alpha = alpha;
  row.scale = scale;
  row.p = p;
  try {
    const RunConfig cfg = sweep_cell_config(base, alpha, scale, p);
    if (cfg.source) {
      if (cfg.alpha < 1.0)
        validate_source(*cfg.source, cfg.domain.dim, cfg.alpha);
      else
        validate_source(*cfg.source, cfg.domain.dim);
    }
    const RunInstance inst = materialize(cfg);
    WeightedNormSpec nspec = inst.norm;
    nspec.sigma = resolve_sigma(cfg, inst);

    SolveReport report;
    if (cfg.source && cfg.source->kind == SourceKind::bbm_burgers) {
      ExtensionParams params;
      params.T_initial = cfg.continuation ? cfg.continuation->window : cfg.grid.T / 3.0;
      params.T_step = params.T_initial;
      params.horizon = cfg.grid.T;
      params.norm_threshold = cfg.blowup_threshold;
      params.refine_tol = cfg.continuation ? cfg.continuation->refine_tol : 0.05;
      params.N_initial = cfg.grid.N;
      params.nodes_per_step = cfg.continuation ? cfg.continuation->nodes_per_step
                                               : std::max(2, cfg.grid.N / 2);
      params.grading = cfg.grid.r;
      params.tol = cfg.tol;
      params.max_iter = cfg.max_iter;
      params.norm = nspec;
      report = extend_and_detect_blowup(inst.problem, params);
    } else {
      auto [traj, rep] = picard_solve(inst.problem, inst.grid, nspec, cfg.tol, cfg.max_iter);
      report = rep;
    }

    row.iterations = report.iterations;
    if (!report.norm_history.empty()) row.final_norm = report.norm_history.back();
    row.note = report.note;
    if (report.blowup.has_value()) {
      row.outcome = "blowup";
      row.t_low = report.blowup->t_low;
      row.t_high = report.blowup->t_high;
    } else if (report.converged) {
      row.outcome = "global";
    } else {
      row.outcome = "nonconv";
    }
  } catch (const std::exception& err) {
    row.outcome = "rejected";
    row.note = err.what();
  }
  return row;
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepRanges& ranges,
                                       int threads = 1) {
  if (ranges.alphas.empty() || ranges.scales.empty() || ranges.ps.empty())
    throw std::invalid_argument("sweep: empty range");
  struct Cell {
    double alpha, scale, p;
  };
  std::vector<Cell> cells;
  for (double alpha : ranges.alphas)
    for (double scale : ranges.scales)
      for (double p : ranges.ps) cells.push_back({alpha, scale, p});

  std::vector<SweepRow> rows(cells.size());
  const int workers = std::max(1, std::min<int>(threads, int(cells.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      rows[i] = detail::run_sweep_cell(base, cells[i].alpha, cells[i].scale, cells[i].p);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
        rows[i] = detail::run_sweep_cell(base, cells[i].alpha, cells[i].scale, cells[i].p);
    });
  for (std::thread& t : pool) t.join();
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "alpha,scale,p,outcome,t_low,t_high,iterations,final_norm\n";
  for (const SweepRow& row : rows) {
    out << format_g17(row.alpha) << ',' << format_g17(row.scale) << ',' << format_g17(row.p)
        << ',' << row.outcome << ',' << (row.t_low ? format_g17(*row.t_low) : "") << ','
        << (row.t_high ? format_g17(*row.t_high) : "") << ',' << row.iterations << ','
        << format_g17(row.final_norm) << '\n';
  }
}

}  // namespace tfpp
