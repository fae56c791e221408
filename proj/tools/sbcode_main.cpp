// Command-line front end for the sbcode shared library. Every subcommand
// talks to the library exclusively through the C API in sbcode.h.
//
// Exit codes: 0 success, 2 usage/validation, 3 I/O, 4 resource guard.
// All indices in output files and JSON are 0-based.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbcode.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitResource = 4;

int status_to_exit(sbcode_status status) {
  switch (status) {
    case SBCODE_OK:
      return kExitOk;
    case SBCODE_ERROR_INVALID_ARGUMENT:
      return kExitUsage;
    case SBCODE_ERROR_IO:
      return kExitIo;
    case SBCODE_ERROR_RESOURCE_LIMIT:
      return kExitResource;
    case SBCODE_ERROR_INTERNAL:
      return 1;
  }
  return 1;
}

int fail(sbcode_status status) {
  std::cerr << "error: " << sbcode_last_error() << "\n";
  return status_to_exit(status);
}

std::string take_string(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  sbcode_string_free(s);
  return out;
}

// Staged output writer: nothing lands at its final path until every staged
// file has been written to a temp name, and a failure cleans up everything
// from this invocation.
class OutputSet {
 public:
  void stage(std::string path, std::string content) {
    staged_.push_back({std::move(path), std::move(content)});
  }

  bool commit() {
    std::vector<std::string> temps;
    std::vector<std::string> finals;
    for (const auto& [path, content] : staged_) {
      const std::string tmp = path + ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out || !(out << content) || !out.flush()) {
        cleanup(temps, finals);
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        std::cerr << "error: cannot write " << tmp << "\n";
        return false;
      }
      out.close();
      temps.push_back(tmp);
    }
    for (std::size_t i = 0; i < staged_.size(); ++i) {
      std::error_code ec;
      std::filesystem::rename(temps[i], staged_[i].first, ec);
      if (ec) {
        temps.erase(temps.begin(), temps.begin() + static_cast<long>(i));
        cleanup(temps, finals);
        std::cerr << "error: cannot rename into place: " << staged_[i].first
                  << "\n";
        return false;
      }
      finals.push_back(staged_[i].first);
    }
    return true;
  }

 private:
  static void cleanup(const std::vector<std::string>& temps,
                      const std::vector<std::string>& finals) {
    std::error_code ec;
    for (const auto& t : temps) {
      std::filesystem::remove(t, ec);
    }
    for (const auto& f : finals) {
      std::filesystem::remove(f, ec);
    }
  }

  std::vector<std::pair<std::string, std::string>> staged_;
};

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

// --q accepts a number or the word "matched".
int resolve_q(std::int64_t k, std::int64_t s, double p,
              const std::string& q_text, double& q) {
  if (q_text == "matched") {
    if (sbcode_status st = sbcode_matched_q(k, s, p, &q)) {
      return fail(st);
    }
    return -1;
  }
  try {
    std::size_t used = 0;
    q = std::stod(q_text, &used);
    if (used != q_text.size()) {
      throw std::invalid_argument(q_text);
    }
  } catch (const std::exception&) {
    std::cerr << "error: --q must be a number or 'matched', got '" << q_text
              << "'\n";
    return kExitUsage;
  }
  return -1;
}

const char* derived_family(double p, double q) {
  if (p == 1.0 && q == 0.0) return "FRC";
  if (p == q) return "BGC";
  return "SBC";
}

struct CodeFlags {
  std::int64_t k = 0;
  std::int64_t s = 0;
  double p = 1.0;
  std::string q_text = "matched";
};

void add_code_flags(CLI::App* cmd, CodeFlags& flags) {
  cmd->add_option("--k", flags.k, "number of functions / workers")
      ->required();
  cmd->add_option("--s", flags.s, "block size (tasks per worker target)")
      ->required();
  cmd->add_option("--p", flags.p, "in-block Bernoulli probability")
      ->required();
  cmd->add_option("--q", flags.q_text,
                  "cross-block Bernoulli probability, or 'matched' for the q "
                  "giving expected column weight s");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sbcode - stochastic block gradient code simulator.\n"
      "Builds SBC/FRC/BGC assignment matrices, decodes them under random and "
      "adversarial stragglers, evaluates closed-form error bounds, and runs "
      "seeded Monte Carlo sweeps. All indices in files and JSON are 0-based."};
  app.require_subcommand(1);

  // gen
  CodeFlags gen_flags;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand(
      "gen", "generate an assignment matrix and write it as 0/1 CSV");
  add_code_flags(gen, gen_flags);
  gen->add_option("--seed", gen_seed, "matrix seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // simulate
  CodeFlags sim_flags;
  std::string sim_decoder = "STOCHASTIC_BLOCK";
  double sim_epsilon = -1.0;
  std::int64_t sim_r = -1;
  std::int64_t sim_trials = 1000;
  std::uint64_t sim_seed = 0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo error statistics for one parameter cell");
  add_code_flags(simulate, sim_flags);
  simulate->add_option("--decoder", sim_decoder,
                       "STOCHASTIC_BLOCK | AVERAGED_BLOCK | BGC_UNIFORM | "
                       "OPTIMAL");
  simulate->add_option("--epsilon", sim_epsilon,
                       "straggler fraction (sets r = round((1-eps)k))");
  simulate->add_option("--r", sim_r, "number of non-stragglers");
  simulate->add_option("--trials", sim_trials, "number of trials");
  simulate->add_option("--seed", sim_seed, "master seed");

  // sweep
  std::string sweep_config;
  std::string sweep_out_csv;
  std::string sweep_out_svg;
  std::int64_t sweep_trials = 0;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a Monte Carlo sweep from a JSON config");
  sweep->add_option("--config", sweep_config, "sweep config JSON path")
      ->required();
  sweep->add_option("--out-csv", sweep_out_csv, "results CSV path")
      ->required();
  sweep->add_option("--out-svg", sweep_out_svg, "optional SVG plot path");
  sweep->add_option("--trials", sweep_trials,
                    "override the configured trial count");

  // bounds
  CodeFlags bounds_flags;
  std::int64_t bounds_r = -1;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "evaluate every closed-form bound for the given parameters");
  add_code_flags(bounds, bounds_flags);
  bounds->add_option("--r", bounds_r,
                     "number of non-stragglers (enables the r-dependent "
                     "hypotheses and lemma evaluations)");

  // attack
  CodeFlags attack_flags;
  std::int64_t attack_r = 0;
  std::string attack_method = "random";
  std::int64_t attack_trials = 100;
  std::uint64_t attack_seed = 0;
  std::string attack_out_csv;
  CLI::App* attack = app.add_subcommand(
      "attack", "evaluate a straggler-selection strategy against the code");
  add_code_flags(attack, attack_flags);
  attack->add_option("--r", attack_r, "number of non-stragglers")->required();
  attack->add_option("--method", attack_method,
                     "random | blocks | greedy | bruteforce | spectral");
  attack->add_option("--trials", attack_trials, "number of trials");
  attack->add_option("--seed", attack_seed, "master seed");
  attack->add_option("--out-csv", attack_out_csv,
                     "optional per-trial error CSV path");

  // plot
  std::string plot_in_csv;
  std::string plot_out_svg;
  CLI::App* plot =
      app.add_subcommand("plot", "render a results CSV as an SVG chart");
  plot->add_option("--in-csv", plot_in_csv, "results CSV path")->required();
  plot->add_option("--out-svg", plot_out_svg, "output SVG path")->required();

  // gd-demo
  CodeFlags gd_flags;
  double gd_epsilon = 0.2;
  std::int64_t gd_steps = 50;
  std::uint64_t gd_seed = 0;
  CLI::App* gd = app.add_subcommand(
      "gd-demo",
      "gradient-descent demo: coded aggregation vs full-gradient and uncoded "
      "baselines on a synthetic least-squares problem");
  add_code_flags(gd, gd_flags);
  gd->add_option("--epsilon", gd_epsilon, "straggler fraction per step");
  gd->add_option("--steps", gd_steps, "gradient steps");
  gd->add_option("--seed", gd_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << app.help();
    return kExitUsage;
  }

  if (gen->parsed()) {
    double q = 0.0;
    if (int rc = resolve_q(gen_flags.k, gen_flags.s, gen_flags.p,
                           gen_flags.q_text, q);
        rc >= 0) {
      return rc;
    }
    sbcode_code* code = nullptr;
    if (sbcode_status st = sbcode_code_create_sbc(
            gen_flags.k, gen_flags.s, gen_flags.p, q, gen_seed, &code)) {
      return fail(st);
    }
    char* csv = nullptr;
    const sbcode_status st = sbcode_code_csv(code, &csv);
    sbcode_code_destroy(code);
    if (st != SBCODE_OK) {
      return fail(st);
    }
    OutputSet outputs;
    outputs.stage(gen_out, take_string(csv));
    if (!outputs.commit()) {
      return kExitIo;
    }
    std::cout << "{\"family\":\"" << derived_family(gen_flags.p, q)
              << "\",\"k\":" << gen_flags.k << ",\"s\":" << gen_flags.s
              << ",\"p\":" << gen_flags.p << ",\"q\":" << q
              << ",\"seed\":" << gen_seed << ",\"out\":\"" << gen_out
              << "\"}\n";
    return kExitOk;
  }

  if (simulate->parsed()) {
    double q = 0.0;
    if (int rc = resolve_q(sim_flags.k, sim_flags.s, sim_flags.p,
                           sim_flags.q_text, q);
        rc >= 0) {
      return rc;
    }
    if ((sim_epsilon < 0.0) == (sim_r < 0)) {
      std::cerr << "error: give exactly one of --epsilon or --r\n";
      return kExitUsage;
    }
    std::int64_t r = sim_r;
    if (sim_epsilon >= 0.0) {
      if (sbcode_status st =
              sbcode_r_from_epsilon(sim_flags.k, sim_epsilon, &r)) {
        return fail(st);
      }
    }
    char* json = nullptr;
    if (sbcode_status st = sbcode_simulate_json(
            sim_flags.k, sim_flags.s, sim_flags.p, q, sim_decoder.c_str(), r,
            sim_trials, sim_seed, &json)) {
      return fail(st);
    }
    std::cout << take_string(json) << "\n";
    return kExitOk;
  }

  if (sweep->parsed()) {
    std::string config_text;
    if (!read_file(sweep_config, config_text)) {
      std::cerr << "error: cannot read config " << sweep_config << "\n";
      return kExitIo;
    }
    char* csv = nullptr;
    if (sbcode_status st =
            sbcode_sweep_csv(config_text.c_str(), sweep_trials, 0, &csv)) {
      return fail(st);
    }
    const std::string csv_text = take_string(csv);
    OutputSet outputs;
    outputs.stage(sweep_out_csv, csv_text);
    if (!sweep_out_svg.empty()) {
      char* svg = nullptr;
      if (sbcode_status st = sbcode_plot_svg(csv_text.c_str(), &svg)) {
        return fail(st);
      }
      outputs.stage(sweep_out_svg, take_string(svg));
    }
    if (!outputs.commit()) {
      return kExitIo;
    }
    std::cout << csv_text;  // the per-cell summary table
    std::cout << "wrote " << sweep_out_csv;
    if (!sweep_out_svg.empty()) {
      std::cout << " and " << sweep_out_svg;
    }
    std::cout << "\n";
    return kExitOk;
  }

  if (bounds->parsed()) {
    double q = 0.0;
    if (int rc = resolve_q(bounds_flags.k, bounds_flags.s, bounds_flags.p,
                           bounds_flags.q_text, q);
        rc >= 0) {
      return rc;
    }
    char* json = nullptr;
    if (sbcode_status st = sbcode_bounds_json(
            bounds_flags.k, bounds_flags.s, bounds_flags.p, q, bounds_r,
            &json)) {
      return fail(st);
    }
    std::cout << take_string(json) << "\n";
    return kExitOk;
  }

  if (attack->parsed()) {
    double q = 0.0;
    if (int rc = resolve_q(attack_flags.k, attack_flags.s, attack_flags.p,
                           attack_flags.q_text, q);
        rc >= 0) {
      return rc;
    }
    char* json = nullptr;
    char* csv = nullptr;
    const bool want_csv = !attack_out_csv.empty();
    if (sbcode_status st = sbcode_attack_json(
            attack_flags.k, attack_flags.s, attack_flags.p, q, attack_r,
            attack_method.c_str(), attack_trials, attack_seed, &json,
            want_csv ? &csv : nullptr)) {
      return fail(st);
    }
    if (want_csv) {
      OutputSet outputs;
      outputs.stage(attack_out_csv, take_string(csv));
      if (!outputs.commit()) {
        sbcode_string_free(json);
        return kExitIo;
      }
    }
    std::cout << take_string(json) << "\n";
    return kExitOk;
  }

  if (plot->parsed()) {
    std::string csv_text;
    if (!read_file(plot_in_csv, csv_text)) {
      std::cerr << "error: cannot read " << plot_in_csv << "\n";
      return kExitIo;
    }
    char* svg = nullptr;
    if (sbcode_status st = sbcode_plot_svg(csv_text.c_str(), &svg)) {
      return fail(st);
    }
    OutputSet outputs;
    outputs.stage(plot_out_svg, take_string(svg));
    if (!outputs.commit()) {
      return kExitIo;
    }
    std::cout << "wrote " << plot_out_svg << "\n";
    return kExitOk;
  }

  if (gd->parsed()) {
    double q = 0.0;
    if (int rc =
            resolve_q(gd_flags.k, gd_flags.s, gd_flags.p, gd_flags.q_text, q);
        rc >= 0) {
      return rc;
    }
    char* json = nullptr;
    if (sbcode_status st =
            sbcode_gd_demo_json(gd_flags.k, gd_flags.s, gd_flags.p, q,
                                gd_epsilon, gd_steps, gd_seed, &json)) {
      return fail(st);
    }
    std::cout << take_string(json) << "\n";
    return kExitOk;
  }

  std::cerr << app.help();
  return kExitUsage;
}
