// entcheck - command-line front end.
//
//   entcheck reproduce-all [--cutoff N] [--format json|csv] [--out FILE]
//   entcheck equality      --system S [state flags]
//   entcheck cfrd          --n N --split-r R [--theta T --phi F --cutoff C]
//   entcheck sweep         --param P --from A --to B [--steps K] --system S ...
//   entcheck sampled-run   --system S --shots N --seed X [--eta E --p P --k K]
//
// Exit codes: 0 success, 1 a reproduced result failed, 2 usage error.

#include "entcheck/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

using entcheck::OutputFormat;
using entcheck::RunConfig;

void add_state_flags(CLI::App* cmd, RunConfig& cfg, std::optional<std::size_t>& cutoff) {
  cmd->add_option("--system", cfg.system,
                  "qubit | product | photon | tmss | multimode | cfrd")
      ->capture_default_str();
  cmd->add_option("--theta", cfg.theta, "superposition angle (rad)")->capture_default_str();
  cmd->add_option("--phi", cfg.phi, "relative phase (rad)")->capture_default_str();
  cmd->add_option("--r", cfg.r, "two-mode squeezing parameter")->capture_default_str();
  cmd->add_option("--p", cfg.p, "weight of the pure state under white noise")
      ->capture_default_str();
  cmd->add_option("--eta", cfg.eta, "detector efficiency applied to every mode")
      ->capture_default_str();
  cmd->add_option("--n", cfg.n, "number of parties/modes")->capture_default_str();
  cmd->add_option("--split-r", cfg.split_r, "modes in the first group")->capture_default_str();
  cmd->add_option("--cutoff", cutoff, "Fock cutoff n_max");
}

void add_output_flags(CLI::App* cmd, std::string& format, std::string& out) {
  cmd->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", out, "write the report here instead of stdout");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw entcheck::UsageError("cannot open output file " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-measurement entanglement tests and CFRD evaluation"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<std::size_t> cutoff;
  std::string format = "json";
  std::string out;

  auto* reproduce = app.add_subcommand("reproduce-all", "check every reproduced result");
  reproduce->add_option("--cutoff", cutoff, "Fock cutoff for the few-photon results");
  add_output_flags(reproduce, format, out);

  auto* equality = app.add_subcommand("equality", "evaluate one equality instance exactly");
  add_state_flags(equality, cfg, cutoff);
  add_output_flags(equality, format, out);

  auto* cfrd = app.add_subcommand("cfrd", "CFRD test with the pseudospin settings");
  cfrd->add_option("--theta", cfg.theta)->capture_default_str();
  cfrd->add_option("--phi", cfg.phi)->capture_default_str();
  cfrd->add_option("--p", cfg.p)->capture_default_str();
  cfrd->add_option("--eta", cfg.eta)->capture_default_str();
  cfrd->add_option("--n", cfg.n)->capture_default_str();
  cfrd->add_option("--split-r", cfg.split_r)->capture_default_str();
  cfrd->add_option("--cutoff", cutoff);
  add_output_flags(cfrd, format, out);

  auto* sweep = app.add_subcommand("sweep", "tabulate an instance over one parameter");
  add_state_flags(sweep, cfg, cutoff);
  sweep->add_option("--param", cfg.param, "theta | phi | p | eta | r | n | split_r")->required();
  sweep->add_option("--from", cfg.from)->required();
  sweep->add_option("--to", cfg.to)->required();
  sweep->add_option("--steps", cfg.steps, "points for real-valued parameters")
      ->capture_default_str();
  add_output_flags(sweep, format, out);

  auto* sampled = app.add_subcommand("sampled-run", "finite-shot estimate of an instance");
  add_state_flags(sampled, cfg, cutoff);
  sampled->add_option("--shots", cfg.shots, "shots per correlation")->capture_default_str();
  sampled->add_option("--seed", cfg.seed)->capture_default_str();
  sampled->add_option("--k", cfg.k_sigma, "verdict threshold in propagated sigmas")
      ->capture_default_str();
  add_output_flags(sampled, format, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.cutoff = cutoff;
  cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  cfg.out = out;
  const bool csv = cfg.format == OutputFormat::Csv;

  try {
    if (reproduce->parsed()) {
      cfg.command = "reproduce-all";
      const auto bundle = entcheck::reproduce_all(cfg);
      emit(csv ? to_csv(bundle) : to_json(bundle), out);
      if (!bundle.all_pass) {
        for (const auto& c : bundle.claims) {
          if (!c.pass) std::cerr << "FAIL " << c.id << '\n';
        }
        return 1;
      }
      return 0;
    }
    if (equality->parsed()) {
      cfg.command = "equality";
      const auto rep = entcheck::evaluate_instance(cfg);
      emit(csv ? to_csv(rep) : to_json(rep), out);
    } else if (cfrd->parsed()) {
      cfg.command = "cfrd";
      const auto run = entcheck::cfrd_run(cfg);
      emit(csv ? to_csv(run) : to_json(run), out);
    } else if (sweep->parsed()) {
      cfg.command = "sweep";
      const auto table = entcheck::sweep(cfg);
      emit(csv ? to_csv(table) : to_json(table), out);
    } else if (sampled->parsed()) {
      cfg.command = "sampled-run";
      const auto run = entcheck::sampled_run(cfg);
      emit(csv ? to_csv(run) : to_json(run), out);
    }
  } catch (const entcheck::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const entcheck::DimensionError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
