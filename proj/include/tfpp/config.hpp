#pragma once

// Run configuration: JSON schema, validation, and materialization into the
// solver's problem/grid types. Parsing is strict about enumerated names and
// re-serialization is canonical, so serialize(parse(file)) is a fixed point.
// Hypothesis checks are delegated to the same validators the solver runs, so
// a rejected config names the violated assumption, not a parser detail.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfpp/picard.hpp"

namespace tfpp {

struct U0Config {
  std::string profile = "single-mode";  // single-mode | modal-list | random
  int mode = 1;                         // single-mode: 1-based rank in the ordered basis
  double amplitude = 1.0;               // single-mode and random
  std::vector<double> coeffs;           // modal-list: one per basis mode
  std::uint64_t seed = 1;               // random
  double decay = 1.0;                   // random: mode k is damped by (1+theta_k)^-decay
};

struct GridConfig {
  double T = 1.0;
  int N = 32;
  double r = 2.0;
};

struct SigmaPolicyConfig {
  std::string policy = "auto";  // auto | fixed
  double value = 0.0;           // fixed only
};

struct ContinuationConfig {
  double window = 0.5;  // first window and step length of the march
  int nodes_per_step = 16;
  double refine_tol = 0.05;
};

struct OutputConfig {
  std::string directory = ".";
  std::vector<std::string> formats = {"csv", "json"};
};

struct RunConfig {
  Domain domain = interval(1.0);
  int K = 16;
  double alpha = 0.5;
  std::optional<NonlinearitySpec> source;
  U0Config u0;
  GridConfig grid;
  double tol = 1e-9;
  int max_iter = 50;
  SigmaPolicyConfig sigma;
  bool smallness_override = false;
  double blowup_threshold = 1e6;
  WeightedNormSpec norm{0.0, 0.0, 1.0};  // norm.sigma is filled by the policy at run time
  std::optional<ContinuationConfig> continuation;
  OutputConfig output;
};

namespace detail {

inline const nlohmann::json& config_at(const nlohmann::json& j, const char* key,
                                       const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("config: missing \"") + key + "\" in " + where);
  return *it;
}

inline SourceKind source_kind_from_name(const std::string& name) {
  if (name == "advection") return SourceKind::advection;
  if (name == "bbm_burgers") return SourceKind::bbm_burgers;
  if (name == "polynomial") return SourceKind::polynomial;
  if (name == "exponential") return SourceKind::exponential;
  throw std::invalid_argument("config: unknown source kind \"" + name + "\"");
}

inline std::string source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::advection: return "advection";
    case SourceKind::bbm_burgers: return "bbm_burgers";
    case SourceKind::polynomial: return "polynomial";
    case SourceKind::exponential: return "exponential";
  }
  return "advection";
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;

  const nlohmann::json& problem = detail::config_at(j, "problem", "the top level");
  {
    const nlohmann::json& dom = detail::config_at(problem, "domain", "problem");
    const std::string kind = detail::config_at(dom, "kind", "domain").get<std::string>();
    const auto lengths = detail::config_at(dom, "lengths", "domain").get<std::vector<double>>();
    if (kind == "interval") {
      if (lengths.size() != 1)
        throw std::invalid_argument("config: interval domain takes exactly one length");
      cfg.domain = interval(lengths[0]);
    } else if (kind == "rectangle") {
      if (lengths.size() != 2)
        throw std::invalid_argument("config: rectangle domain takes exactly two lengths");
      cfg.domain = rectangle(lengths[0], lengths[1]);
    } else {
      throw std::invalid_argument("config: unknown domain kind \"" + kind + "\"");
    }
    cfg.K = detail::config_at(problem, "K", "problem").get<int>();
    if (cfg.K < 1) throw std::invalid_argument("config: K must be >= 1");
    cfg.alpha = detail::config_at(problem, "alpha", "problem").get<double>();

    if (problem.contains("source") && !problem["source"].is_null()) {
      const nlohmann::json& src = problem["source"];
      NonlinearitySpec spec;
      spec.kind = detail::source_kind_from_name(
          detail::config_at(src, "kind", "source").get<std::string>());
      if (src.contains("eta")) {
        const auto eta = src["eta"].get<std::vector<double>>();
        if (eta.size() != 2)
          throw std::invalid_argument("config: source eta takes exactly two components");
        spec.eta = {eta[0], eta[1]};
      }
      if (src.contains("p")) spec.p = src["p"].get<double>();
      if (src.contains("nu")) spec.nu = src["nu"].get<double>();
      cfg.source = spec;
    }

    const nlohmann::json& u0 = detail::config_at(problem, "u0", "problem");
    cfg.u0.profile = detail::config_at(u0, "profile", "u0").get<std::string>();
    if (cfg.u0.profile == "single-mode") {
      cfg.u0.mode = detail::config_at(u0, "mode", "u0").get<int>();
      cfg.u0.amplitude = detail::config_at(u0, "amplitude", "u0").get<double>();
    } else if (cfg.u0.profile == "modal-list") {
      cfg.u0.coeffs = detail::config_at(u0, "coeffs", "u0").get<std::vector<double>>();
    } else if (cfg.u0.profile == "random") {
      cfg.u0.seed = detail::config_at(u0, "seed", "u0").get<std::uint64_t>();
      cfg.u0.decay = detail::config_at(u0, "decay", "u0").get<double>();
      if (u0.contains("amplitude")) cfg.u0.amplitude = u0["amplitude"].get<double>();
      if (!(cfg.u0.decay >= 0.0))
        throw std::invalid_argument("config: random profile decay must be >= 0");
    } else {
      throw std::invalid_argument("config: unknown u0 profile \"" + cfg.u0.profile + "\"");
    }
  }

  const nlohmann::json& grid = detail::config_at(j, "grid", "the top level");
  cfg.grid.T = detail::config_at(grid, "T", "grid").get<double>();
  cfg.grid.N = detail::config_at(grid, "N", "grid").get<int>();
  cfg.grid.r = detail::config_at(grid, "r", "grid").get<double>();

  if (j.contains("solver")) {
    const nlohmann::json& solver = j["solver"];
    if (solver.contains("tol")) cfg.tol = solver["tol"].get<double>();
    if (solver.contains("max_iter")) cfg.max_iter = solver["max_iter"].get<int>();
    if (solver.contains("sigma")) {
      const nlohmann::json& sig = solver["sigma"];
      cfg.sigma.policy = detail::config_at(sig, "policy", "sigma").get<std::string>();
      if (cfg.sigma.policy == "fixed") {
        cfg.sigma.value = detail::config_at(sig, "value", "sigma").get<double>();
        if (!(cfg.sigma.value >= 0.0))
          throw std::invalid_argument("config: fixed sigma must be >= 0");
      } else if (cfg.sigma.policy != "auto") {
        throw std::invalid_argument("config: sigma policy must be \"auto\" or \"fixed\"");
      }
    }
    if (solver.contains("smallness_override"))
      cfg.smallness_override = solver["smallness_override"].get<bool>();
    if (solver.contains("blowup_threshold")) {
      cfg.blowup_threshold = solver["blowup_threshold"].get<double>();
      if (!(cfg.blowup_threshold > 0.0))
        throw std::invalid_argument("config: blowup_threshold must be positive");
    }
    if (solver.contains("norm")) {
      const nlohmann::json& nrm = solver["norm"];
      if (nrm.contains("kappa")) cfg.norm.kappa = nrm["kappa"].get<double>();
      if (nrm.contains("nu")) cfg.norm.nu = nrm["nu"].get<double>();
      validate_norm_spec(cfg.norm);
    }
    if (solver.contains("continuation") && !solver["continuation"].is_null()) {
      const nlohmann::json& cont = solver["continuation"];
      ContinuationConfig cc;
      cc.window = detail::config_at(cont, "window", "continuation").get<double>();
      cc.nodes_per_step = detail::config_at(cont, "nodes_per_step", "continuation").get<int>();
      if (cont.contains("refine_tol")) cc.refine_tol = cont["refine_tol"].get<double>();
      if (!(cc.window > 0.0))
        throw std::invalid_argument("config: continuation window must be positive");
      if (cc.nodes_per_step < 2)
        throw std::invalid_argument("config: continuation nodes_per_step must be >= 2");
      if (!(cc.refine_tol > 0.0))
        throw std::invalid_argument("config: continuation refine_tol must be positive");
      cfg.continuation = cc;
    }
  }

  if (j.contains("output")) {
    const nlohmann::json& output = j["output"];
    if (output.contains("directory")) cfg.output.directory = output["directory"].get<std::string>();
    if (output.contains("formats")) {
      cfg.output.formats = output["formats"].get<std::vector<std::string>>();
      for (const std::string& f : cfg.output.formats)
        if (f != "csv" && f != "json")
          throw std::invalid_argument("config: unknown output format \"" + f + "\"");
    }
  }

  // the solver-side validators own the hypothesis checks; surface them now so
  // a bad config fails at parse time with the violated assumption named
  if (!(cfg.grid.T > 0.0 && cfg.grid.N >= 1 && cfg.grid.r >= 1.0))
    throw std::invalid_argument("config: grid needs T > 0, N >= 1, r >= 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    throw std::invalid_argument("config: alpha must lie in (0, 1]");
  if (cfg.source) {
    if (cfg.alpha < 1.0)
      validate_source(*cfg.source, cfg.domain.dim, cfg.alpha);
    else
      validate_source(*cfg.source, cfg.domain.dim);
  }
  if (cfg.u0.profile == "single-mode" && cfg.u0.mode < 1)
    throw std::invalid_argument("config: single-mode rank must be >= 1");
  if (cfg.continuation && cfg.continuation->window > cfg.grid.T)
    throw std::invalid_argument("config: continuation window cannot exceed the horizon T");
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + err.what());
  }
  return parse_config(j);
}

inline nlohmann::ordered_json serialize_config(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json dom;
  dom["kind"] = cfg.domain.dim == 1 ? "interval" : "rectangle";
  dom["lengths"] = cfg.domain.dim == 1 ? std::vector<double>{cfg.domain.length[0]}
                                       : std::vector<double>{cfg.domain.length[0],
                                                             cfg.domain.length[1]};
  j["problem"]["domain"] = dom;
  j["problem"]["K"] = cfg.K;
  j["problem"]["alpha"] = cfg.alpha;
  if (cfg.source) {
    nlohmann::ordered_json src;
    src["kind"] = detail::source_kind_name(cfg.source->kind);
    src["eta"] = std::vector<double>{cfg.source->eta[0], cfg.source->eta[1]};
    src["p"] = cfg.source->p;
    src["nu"] = cfg.source->nu;
    j["problem"]["source"] = src;
  } else {
    j["problem"]["source"] = nullptr;
  }
  nlohmann::ordered_json u0;
  u0["profile"] = cfg.u0.profile;
  if (cfg.u0.profile == "single-mode") {
    u0["mode"] = cfg.u0.mode;
    u0["amplitude"] = cfg.u0.amplitude;
  } else if (cfg.u0.profile == "modal-list") {
    u0["coeffs"] = cfg.u0.coeffs;
  } else {
    u0["seed"] = cfg.u0.seed;
    u0["decay"] = cfg.u0.decay;
    u0["amplitude"] = cfg.u0.amplitude;
  }
  j["problem"]["u0"] = u0;
  j["grid"] = {{"T", cfg.grid.T}, {"N", cfg.grid.N}, {"r", cfg.grid.r}};
  j["solver"]["tol"] = cfg.tol;
  j["solver"]["max_iter"] = cfg.max_iter;
  if (cfg.sigma.policy == "fixed")
    j["solver"]["sigma"] = {{"policy", "fixed"}, {"value", cfg.sigma.value}};
  else
    j["solver"]["sigma"] = {{"policy", "auto"}};
  j["solver"]["smallness_override"] = cfg.smallness_override;
  j["solver"]["blowup_threshold"] = cfg.blowup_threshold;
  j["solver"]["norm"] = {{"kappa", cfg.norm.kappa}, {"nu", cfg.norm.nu}};
  if (cfg.continuation)
    j["solver"]["continuation"] = {{"window", cfg.continuation->window},
                                   {"nodes_per_step", cfg.continuation->nodes_per_step},
                                   {"refine_tol", cfg.continuation->refine_tol}};
  else
    j["solver"]["continuation"] = nullptr;
  j["output"]["directory"] = cfg.output.directory;
  j["output"]["formats"] = cfg.output.formats;
  return j;
}

namespace detail {

inline double config_uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1p-53;
}

// explicit Box-Muller so the draw sequence does not depend on the standard
// library's distribution internals; 1-u keeps the log argument in (0, 1]
inline double config_normal(std::mt19937_64& rng) {
  const double u1 = config_uniform01(rng);
  const double u2 = config_uniform01(rng);
  return std::sqrt(-2.0 * std::log(1.0 - u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace detail

inline SpectralField build_u0(const U0Config& u0, const SpectralBasis& basis) {
  SpectralField f = zero_field(basis);
  if (u0.profile == "single-mode") {
    if (u0.mode < 1 || std::size_t(u0.mode) > f.coeffs.size())
      throw std::invalid_argument("config: single-mode rank exceeds the basis size");
    f.coeffs[std::size_t(u0.mode - 1)] = u0.amplitude;
  } else if (u0.profile == "modal-list") {
    if (u0.coeffs.size() != f.coeffs.size())
      throw std::invalid_argument("config: modal-list length must equal the basis size");
    f.coeffs = u0.coeffs;
  } else {
    std::mt19937_64 rng(u0.seed);
    for (std::size_t k = 0; k < f.coeffs.size(); ++k)
      f.coeffs[k] = u0.amplitude * detail::config_normal(rng) /
                    std::pow(1.0 + basis.modes[k].theta, u0.decay);
  }
  return f;
}

// A materialized run owns its basis so the problem's pointer stays valid when
// the instance moves.
struct RunInstance {
  std::unique_ptr<SpectralBasis> basis;
  Problem problem;
  TimeGrid grid;
  WeightedNormSpec norm;
};

inline RunInstance materialize(const RunConfig& cfg) {
  RunInstance inst;
  inst.basis = std::make_unique<SpectralBasis>(build_basis(cfg.domain, cfg.K));
  inst.problem.basis = inst.basis.get();
  inst.problem.alpha = cfg.alpha;
  inst.problem.u0 = build_u0(cfg.u0, *inst.basis);
  inst.problem.source = cfg.source;
  inst.problem.smallness_override = cfg.smallness_override;
  inst.grid = build_time_grid(cfg.grid.T, cfg.grid.N, cfg.grid.r);
  inst.norm = cfg.norm;
  validate_problem(inst.problem);
  return inst;
}

// Weight selection: the fixed policy is taken verbatim; auto applies the
// contraction certificate for the globally Lipschitz transport source and
// leaves every other regime unweighted (their theorems fix sigma = 0).
inline double resolve_sigma(const RunConfig& cfg, const RunInstance& inst) {
  if (cfg.sigma.policy == "fixed") return cfg.sigma.value;
  if (cfg.source && cfg.source->kind == SourceKind::advection && cfg.alpha < 1.0 &&
      eta_magnitude(*cfg.source) > 0.0) {
    const FractionalMultiplierProvider P(*inst.basis, cfg.alpha);
    const std::vector<double> probe_nodes(inst.grid.nodes.begin() + 1, inst.grid.nodes.end());
    const LinearBoundEstimate est = linear_bound_probe(P, 1.0, 1.0, probe_nodes);
    return sigma_for_contraction(cfg.alpha, eta_magnitude(*cfg.source) * est.c2, inst.grid)
        .sigma;
  }
  return 0.0;
}

}  // namespace tfpp
