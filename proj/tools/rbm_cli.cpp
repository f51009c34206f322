// Copyright 2026 The rbm-spin Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line frontend: offline training, surrogate scans and diagnostics.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbm/cli/commands.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

void AddCommon(CLI::App *sub, Common &c, bool config_required) {
  auto *opt = sub->add_option("--config", c.config, "run configuration (JSON)")->check(CLI::ExistingFile);
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory (default: output_dir from the config)");
  sub->add_option("--threads", c.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", c.seed, "seed for random initial blocks");
}

std::optional<rbm::io::RunConfig> Resolve(const Common &c) {
  if (c.config.empty()) return std::nullopt;
  rbm::io::RunConfig cfg = rbm::io::LoadConfig(c.config);
  if (c.threads) cfg.threads = *c.threads;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

std::string OutDir(const Common &c, const std::optional<rbm::io::RunConfig> &cfg) {
  if (!c.out.empty()) return c.out;
  return cfg ? cfg->output_dir : std::string("rbm_out");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Reduced-basis surrogates for parametrized spin Hamiltonians"};
  app.require_subcommand(1);
  app.fallthrough();

  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the configuration with all defaults and exit");
  std::string print_from;
  app.add_option("--config", print_from, "config to resolve with --print-config");

  Common off, sc, sv, va;
  bool no_store_basis = false;
  auto *offline = app.add_subcommand("offline", "greedy training; writes model.rbm and training_log.jsonl");
  AddCommon(offline, off, true);
  offline->add_flag("--no-store-basis", no_store_basis, "leave the reduced basis out of the model file");

  std::string scan_model;
  std::vector<std::string> momenta;
  auto *scan = app.add_subcommand("scan", "surrogate scan; writes scan.csv and scan.json");
  scan->add_option("model", scan_model, "model file")->required()->check(CLI::ExistingFile);
  AddCommon(scan, sc, false);
  scan->add_option("--momenta", momenta, "structure factor momenta to report (labels as k3 or k1_0)")
      ->delimiter(',');

  auto *svd = app.add_subcommand("svd", "snapshot singular values over the training grid");
  AddCommon(svd, sv, true);

  std::string val_model;
  auto *validate = app.add_subcommand("validate", "error report against truth solves on the test grid");
  validate->add_option("model", val_model, "model file")->required()->check(CLI::ExistingFile);
  AddCommon(validate, va, false);

  std::string info_model;
  auto *info = app.add_subcommand("model-info", "print the model file header");
  info->add_option("model", info_model, "model file")->required()->check(CLI::ExistingFile);

  // --print-config works without a subcommand.
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--print-config") app.require_subcommand(0, 1);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rbm::cli::kExitConfig;
  }

  try {
    if (print_config) {
      std::string path = print_from;
      for (const Common *c : {&off, &sc, &sv, &va}) {
        if (path.empty() && !c->config.empty()) path = c->config;
      }
      const rbm::io::RunConfig cfg = path.empty() ? rbm::io::RunConfig{} : rbm::io::LoadConfig(path);
      std::cout << rbm::io::ConfigToJson(cfg).dump(2) << '\n';
      return rbm::cli::kExitOk;
    }
    if (*offline) {
      auto cfg = Resolve(off);
      if (no_store_basis) cfg->store_basis = false;
      return rbm::cli::Offline(*cfg, OutDir(off, cfg), std::cerr);
    }
    if (*scan) {
      const auto cfg = Resolve(sc);
      return rbm::cli::ScanCommand(scan_model, cfg, OutDir(sc, cfg), momenta, sc.threads, std::cerr);
    }
    if (*svd) {
      const auto cfg = Resolve(sv);
      return rbm::cli::SvdCommand(*cfg, OutDir(sv, cfg), std::cerr);
    }
    if (*validate) {
      const auto cfg = Resolve(va);
      return rbm::cli::ValidateCommand(val_model, cfg, OutDir(va, cfg), va.threads, std::cerr);
    }
    if (*info) return rbm::cli::ModelInfo(info_model, std::cout);
  } catch (const rbm::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rbm::cli::kExitConfig;
  } catch (const rbm::DomainError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rbm::cli::kExitConfig;
  } catch (const rbm::StructuralError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rbm::cli::kExitConfig;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rbm::cli::kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return rbm::cli::kExitSolver;
  }
  return rbm::cli::kExitOk;
}
