// Command-line front end: spectrum / wavefunction / verify / figures /
// residual over the complexified trigonometric well.

#include <string>

#include <CLI11.hpp>

#include "ptwell/run.hpp"

namespace {

struct Cli {
  ptwell::cli::RunConfig config;
  bool have_alpha = false, have_beta = false;
  double alpha = 2.0, beta = 0.75;
  std::string sigma_s, tau_s, format_s = "csv";

  void add_common(CLI::App* cmd) {
    cmd->add_option("--A", config.A, "coupling A (default 2.5)");
    cmd->add_option("--B", config.B, "coupling B (default 1.25)");
    cmd->add_option("--alpha", alpha, "strength alpha = A - 1/2 (alternative to --A)")
        ->each([this](const std::string&) { have_alpha = true; });
    cmd->add_option("--beta", beta, "strength beta = B - 1/2 (alternative to --B)")
        ->each([this](const std::string&) { have_beta = true; });
    cmd->add_option("--sigma", sigma_s, "left exponent sign, + or -")
        ->check(CLI::IsMember({"+", "-"}));
    cmd->add_option("--tau", tau_s, "right exponent sign, + or -")
        ->check(CLI::IsMember({"+", "-"}));
    cmd->add_flag("--all-branches", "run all four (sigma, tau) branches");
    cmd->add_option("--n-max", config.n_max,
                    "highest level index (state index for wavefunction)");
    cmd->add_option("--epsilon", config.epsilon, "contour shift (default 0.1)");
    cmd->add_option("--delta", config.grid.delta, "endpoint offset in t (default 1e-4)");
    cmd->add_option("--steps", config.grid.steps, "total RK4 steps (default 20000)");
    cmd->add_option("--e-min", config.e_min, "search window lower edge");
    cmd->add_option("--e-max", config.e_max, "search window upper edge");
    cmd->add_option("--scan-step", config.scan_step, "energy scan step (default 0.1)");
    cmd->add_option("--figure", config.figure, "figure id 1..4 (figures command; default all)");
    cmd->add_option("--format", format_s, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", config.output_path, "output file (tables) or directory (figures)");
    cmd->add_flag("--unsafe-couplings", config.unsafe_couplings,
                  "accept couplings outside alpha, beta > 0");
  }

  void finalize(const CLI::App& cmd) {
    if (have_alpha) config.A = alpha + 0.5;
    if (have_beta) config.B = beta + 0.5;
    const bool branch_given = !sigma_s.empty() || !tau_s.empty();
    if (!sigma_s.empty()) config.sigma = (sigma_s == "+") ? +1 : -1;
    if (!tau_s.empty()) config.tau = (tau_s == "+") ? +1 : -1;
    if (cmd.count("--all-branches") > 0)
      config.all_branches = true;
    else if (branch_given || config.command == ptwell::cli::Command::wavefunction)
      config.all_branches = false;
    config.format = (format_s == "json") ? ptwell::cli::Format::json : ptwell::cli::Format::csv;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exactly solvable complexified trigonometric well: closed-form spectra, "
               "wavefunctions, a shooting-method cross-check, and figure data"};
  app.require_subcommand(1);

  Cli cli;
  using ptwell::cli::Command;
  struct Sub {
    const char* name;
    const char* help;
    Command command;
  };
  const Sub subs[] = {
      {"spectrum", "closed-form energy table for the requested branches", Command::spectrum},
      {"wavefunction", "sampled terminating state along the contour", Command::wavefunction},
      {"verify", "shooting-oracle cross-check of the closed-form energies", Command::verify},
      {"figures", "emit the figure data files", Command::figures},
      {"residual", "ODE residual of the terminating states along the contour", Command::residual},
  };
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    cli.add_common(cmd);
    cmd->callback([&cli, &s, cmd]() {
      cli.config.command = s.command;
      cli.finalize(*cmd);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return ptwell::cli::execute(cli.config);
}
