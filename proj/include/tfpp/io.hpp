#pragma once

// CSV and JSON artifact writers. Every floating-point value is printed with
// %.17g so the text round-trips to the identical double and repeated runs
// produce bit-identical files; JSON uses ordered_json to pin key order.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tfpp/picard.hpp"

namespace tfpp {

inline std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

inline void write_field_csv(std::ostream& out, const SpectralField& f) {
  detail::require_attached(f);
  const SpectralBasis& basis = *f.basis;
  out << "i,j,theta,coeff\n";
  for (std::size_t k = 0; k < f.coeffs.size(); ++k)
    out << basis.modes[k].index[0] << ',' << basis.modes[k].index[1] << ','
        << format_g17(basis.modes[k].theta) << ',' << format_g17(f.coeffs[k]) << '\n';
}

// One row per time node with the spatial norms a plot needs; coefficients go
// to the states file so this one stays small enough to eyeball.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.states.size() != traj.grid.nodes.size())
    throw std::invalid_argument("trajectory writer: states/nodes length mismatch");
  out << "node,t,norm_l2,norm_d1,norm_orlicz\n";
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const SpectralField& f = traj.states[j];
    out << j << ',' << format_g17(traj.grid.nodes[j]) << ',' << format_g17(hilbert_norm(f, 0.0))
        << ',' << format_g17(hilbert_norm(f, 1.0)) << ',' << format_g17(orlicz_norm(f).value)
        << '\n';
  }
}

inline void write_states_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.states.size() != traj.grid.nodes.size())
    throw std::invalid_argument("states writer: states/nodes length mismatch");
  out << "node,t,i,j,theta,coeff\n";
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const SpectralField& f = traj.states[j];
    detail::require_attached(f);
    const SpectralBasis& basis = *f.basis;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k)
      out << j << ',' << format_g17(traj.grid.nodes[j]) << ',' << basis.modes[k].index[0] << ','
          << basis.modes[k].index[1] << ',' << format_g17(basis.modes[k].theta) << ','
          << format_g17(f.coeffs[k]) << '\n';
  }
}

inline nlohmann::ordered_json solve_report_json(const SolveReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["final_residual"] = rep.final_residual;
  j["sigma"] = rep.sigma;
  j["overflow"] = rep.overflow;
  j["nonconvergence"] = rep.nonconvergence;
  j["note"] = rep.note;
  j["contraction_ratios"] = rep.contraction_ratios;
  j["norm_history"] = rep.norm_history;
  if (rep.blowup.has_value())
    j["blowup"] = {{"t_low", rep.blowup->t_low}, {"t_high", rep.blowup->t_high}};
  else
    j["blowup"] = nullptr;
  return j;
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace tfpp
