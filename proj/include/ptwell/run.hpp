#pragma once

// Command layer behind the CLI: validated run configuration, the five
// commands (spectrum, wavefunction, verify, figures, residual) as library
// calls producing plain tables, and bit-stable CSV/JSON emission (shortest
// round-trip decimals, LF line endings, mandatory header row).

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptwell/exact.hpp"
#include "ptwell/model.hpp"
#include "ptwell/paradox.hpp"
#include "ptwell/shoot.hpp"

namespace ptwell::cli {

enum class Command { spectrum, wavefunction, verify, figures, residual };
enum class Format { csv, json };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::wavefunction: return "wavefunction";
    case Command::verify: return "verify";
    case Command::figures: return "figures";
    case Command::residual: return "residual";
  }
  return "?";
}

inline const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

struct RunConfig {
  Command command = Command::spectrum;
  double A = 2.5;
  double B = 1.25;
  bool all_branches = true;
  int sigma = +1;
  int tau = +1;
  double epsilon = 0.1;
  int n_max = 2;
  shoot::IntegrationGrid grid{};
  double e_min = -1.0;  // < 0: derive the window from the requested levels
  double e_max = -1.0;
  double scan_step = 0.1;
  double tol = 1e-8;
  int figure = 0;  // 0 = all four
  Format format = Format::csv;
  std::string output_path;  // empty: stdout for tables, cwd for figures
  bool unsafe_couplings = false;

  WellParameters params() const { return WellParameters::from_couplings(A, B, unsafe_couplings); }

  void validate() const {
    params();  // throws on bad couplings
    if (n_max < 0) throw std::invalid_argument("config: n_max must be >= 0");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be >= 0");
    if ((sigma != 1 && sigma != -1) || (tau != 1 && tau != -1))
      throw std::invalid_argument("config: sigma, tau must be +1/-1");
    grid.validate();
    if (!(scan_step > 0.0) || !(tol > 0.0))
      throw std::invalid_argument("config: scan_step and tol must be > 0");
    if (figure < 0 || figure > 4)
      throw std::invalid_argument("config: figure must be 1..4 (0 = all)");
    if (e_min >= 0.0 && e_max >= 0.0 && !(e_min < e_max))
      throw std::invalid_argument("config: need e_min < e_max");
  }

  std::vector<Branch> branches() const {
    if (all_branches) {
      const auto a = ptwell::all_branches();
      return {a.begin(), a.end()};
    }
    return {Branch(sigma, tau)};
  }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Shortest decimal that round-trips to the same double; 17 significant
/// digits at most.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (j) out += ',';
    out += t.columns[j];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  return nlohmann::json{{"command", to_string(c.command)},
                        {"A", c.A},
                        {"B", c.B},
                        {"alpha", c.A - 0.5},
                        {"beta", c.B - 0.5},
                        {"all_branches", c.all_branches},
                        {"sigma", c.sigma},
                        {"tau", c.tau},
                        {"epsilon", c.epsilon},
                        {"n_max", c.n_max},
                        {"delta", c.grid.delta},
                        {"steps", c.grid.steps},
                        {"t_match", c.grid.t_match},
                        {"e_min", c.e_min},
                        {"e_max", c.e_max},
                        {"scan_step", c.scan_step},
                        {"tol", c.tol},
                        {"figure", c.figure},
                        {"format", to_string(c.format)},
                        {"out", c.output_path},
                        {"unsafe_couplings", c.unsafe_couplings}};
}

inline std::string to_json(const Table& t, const RunConfig& config) {
  nlohmann::json j;
  for (std::size_t col = 0; col < t.columns.size(); ++col) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : t.rows) arr.push_back(row[col]);
    j[t.columns[col]] = std::move(arr);
  }
  j["meta"] = config_to_json(config);
  return j.dump() + "\n";
}

inline std::string emit(const Table& t, const RunConfig& config) {
  return config.format == Format::csv ? to_csv(t) : to_json(t, config);
}

/// Rows (sigma, tau, n, k_n, E_n) for each requested branch, n = 0..n_max,
/// branches in (+,+), (+,-), (-,+), (-,-) order.
inline Table run_spectrum(const RunConfig& config) {
  config.validate();
  const WellParameters p = config.params();
  Table t;
  t.columns = {"sigma", "tau", "n", "k", "E"};
  for (const Branch& br : config.branches())
    for (int n = 0; n <= config.n_max; ++n) {
      const double k = exact::termination_k(p, br, n);
      t.rows.push_back({static_cast<double>(br.sigma), static_cast<double>(br.tau),
                        static_cast<double>(n), k, k * k});
    }
  return t;
}

/// Samples of the terminating state (sigma, tau, n = n_max) along the
/// contour at grid.steps + 1 points.
inline Table run_wavefunction(const RunConfig& config) {
  config.validate();
  const WellParameters p = config.params();
  const Contour contour(config.epsilon);
  const Branch br(config.sigma, config.tau);
  const auto sol = exact::bound_state(p, br, config.n_max);
  Table t;
  t.columns = {"t", "re_x", "im_x", "re_psi", "im_psi"};
  const double t0 = config.grid.delta;
  const double t1 = kHalfPi - config.grid.delta;
  const int n = config.grid.steps;
  for (int i = 0; i <= n; ++i) {
    const double tt = t0 + (t1 - t0) * i / n;
    const Complex x = contour_point(contour, tt);
    const Complex psi = exact::bound_state_psi(sol, p, x);
    t.rows.push_back({tt, x.real(), x.imag(), psi.real(), psi.imag()});
  }
  return t;
}

struct VerifyOutcome {
  Table table;
  bool all_found = false;
  bool within_tol = false;  // every rel_err < 1e-5
  int exit_code() const { return (all_found && within_tol) ? 0 : 3; }
};

/// Closed-form energies vs the shooting oracle, one row per (branch, n).
inline VerifyOutcome run_verify(const RunConfig& config) {
  config.validate();
  const WellParameters p = config.params();
  const Contour contour(config.epsilon);
  VerifyOutcome out;
  out.table.columns = {"sigma", "tau", "n", "E_exact", "E_shoot", "abs_err", "rel_err", "residual"};
  out.all_found = true;
  out.within_tol = true;
  for (const Branch& br : config.branches()) {
    double lo = config.e_min, hi = config.e_max;
    if (lo < 0.0 || hi < 0.0) {
      double emin = 1e300, emax = -1e300;
      for (int n = 0; n <= config.n_max; ++n) {
        const double e = exact::energy(p, br, n);
        emin = std::min(emin, e);
        emax = std::max(emax, e);
      }
      if (lo < 0.0) lo = std::max(1e-4, 0.9 * emin - 0.1);
      if (hi < 0.0) hi = 1.05 * emax + 1.0;
    }
    shoot::EigenvalueSearch search{lo, hi, config.scan_step, config.tol, 200};
    const auto found = shoot::find_eigenvalues(search, br, p, contour, config.grid);
    for (int n = 0; n <= config.n_max; ++n) {
      const double e_exact = exact::energy(p, br, n);
      double e_shoot = std::numeric_limits<double>::quiet_NaN();
      double residual = std::numeric_limits<double>::quiet_NaN();
      double best = 1e300;
      for (const auto& r : found) {
        if (!r.converged) continue;
        const double d = std::abs(r.energy - e_exact);
        if (d < best) {
          best = d;
          e_shoot = r.energy;
          residual = r.residual;
        }
      }
      double abs_err = std::numeric_limits<double>::quiet_NaN();
      double rel_err = std::numeric_limits<double>::quiet_NaN();
      if (std::isnan(e_shoot)) {
        out.all_found = false;
      } else {
        abs_err = std::abs(e_shoot - e_exact);
        rel_err = abs_err / std::max(std::abs(e_exact), 1e-12);
        if (!(rel_err < 1e-5)) out.within_tol = false;
      }
      out.table.rows.push_back({static_cast<double>(br.sigma), static_cast<double>(br.tau),
                                static_cast<double>(n), e_exact, e_shoot, abs_err, rel_err,
                                residual});
    }
  }
  return out;
}

/// Figure tables keyed by default file stem ("figure1", ...).
inline std::vector<std::pair<std::string, Table>> run_figures(const RunConfig& config) {
  config.validate();
  const WellParameters p = config.params();
  std::vector<int> ids;
  if (config.figure == 0)
    ids = {1, 2, 3, 4};
  else
    ids = {config.figure};
  std::vector<std::pair<std::string, Table>> out;
  for (int id : ids) {
    const paradox::FigureData fd = paradox::make_figure(id, p);
    Table t;
    t.columns = fd.column_names;
    t.rows = fd.rows;
    out.emplace_back("figure" + std::to_string(id), std::move(t));
  }
  return out;
}

/// Scaled ODE residual of each requested terminating state along the contour.
inline Table run_residual(const RunConfig& config) {
  config.validate();
  const WellParameters p = config.params();
  const Contour contour(config.epsilon);
  Table t;
  t.columns = {"sigma", "tau", "n", "E", "residual"};
  for (const Branch& br : config.branches())
    for (int n = 0; n <= config.n_max; ++n) {
      const auto sol = exact::bound_state(p, br, n);
      const double r = shoot::residual_norm(
          [&](const Complex& x) { return exact::bound_state_psi(sol, p, x); }, p, sol.E_n, contour,
          config.grid);
      t.rows.push_back({static_cast<double>(br.sigma), static_cast<double>(br.tau),
                        static_cast<double>(n), sol.E_n, r});
    }
  return t;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << content;
}

inline void deliver(const std::string& content, const std::string& path) {
  if (path.empty())
    std::fputs(content.c_str(), stdout);
  else
    write_file(path, content);
}

}  // namespace detail

/// Run one command end to end. Exit codes: 0 success, 2 invalid
/// configuration, 3 numerical non-convergence.
inline int execute(const RunConfig& config) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  try {
    const std::string ext = config.format == Format::csv ? ".csv" : ".json";
    switch (config.command) {
      case Command::spectrum:
        detail::deliver(emit(run_spectrum(config), config), config.output_path);
        return 0;
      case Command::wavefunction:
        detail::deliver(emit(run_wavefunction(config), config), config.output_path);
        return 0;
      case Command::residual:
        detail::deliver(emit(run_residual(config), config), config.output_path);
        return 0;
      case Command::verify: {
        const VerifyOutcome v = run_verify(config);
        detail::deliver(emit(v.table, config), config.output_path);
        return v.exit_code();
      }
      case Command::figures: {
        const auto figs = run_figures(config);
        if (figs.size() == 1 && !config.output_path.empty()) {
          detail::write_file(config.output_path, emit(figs[0].second, config));
        } else {
          const std::filesystem::path dir =
              config.output_path.empty() ? std::filesystem::path(".")
                                         : std::filesystem::path(config.output_path);
          std::filesystem::create_directories(dir);
          for (const auto& [stem, table] : figs)
            detail::write_file((dir / (stem + ext)).string(), emit(table, config));
        }
        return 0;
      }
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}

}  // namespace ptwell::cli
