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


#ifndef RBM_CLI_COMMANDS_HPP
#define RBM_CLI_COMMANDS_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rbm/rbm.hpp"

namespace rbm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

namespace fs = std::filesystem;
using io::Json;

namespace detail {

inline void EnsureDir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline std::ofstream OpenOut(const fs::path &p) {
  std::ofstream os(p, std::ios::trunc);
  if (!os) throw ConfigError("cannot open '" + p.string() + "' for writing");
  return os;
}

inline void WriteJson(const fs::path &p, const Json &j) {
  auto os = OpenOut(p);
  os << j.dump(2) << '\n';
}

inline Json AxesJson(const ParameterGrid &g) { return g.axes(); }

inline void CheckSameModel(const models::ModelSpec &a, const models::ModelSpec &b) {
  if (a.lattice.kind != b.lattice.kind || a.lattice.nx != b.lattice.nx || a.lattice.ny != b.lattice.ny ||
      !(a.domain == b.domain)) {
    throw ConfigError("config describes a different model than the model file");
  }
}

/// Rough size of the snapshot matrix, one column per grid point.
inline void CheckSnapshotBudget(const io::RunConfig &cfg, std::size_t points, Index dim) {
  const double gb = static_cast<double>(points) * static_cast<double>(dim) * 8.0 / 1e9;
  if (gb > cfg.max_snapshot_gb) {
    throw ConfigError("snapshot matrix would need about " + FormatDouble(gb) +
                      " GB for " + std::to_string(points) + " truth solves; reduce the grid or "
                      "raise validate.max_snapshot_gb");
  }
  if (dim > cfg.truth.dense_cap * 64) {
    throw ConfigError("Hilbert space dimension " + std::to_string(dim) +
                      " is beyond desk scale for exhaustive truth sweeps");
  }
}

inline Json StepJson(const GreedyStep &s) {
  return {{"iteration", s.iteration},
          {"mu", s.mu.coords()},
          {"grid_index", s.grid_index},
          {"m", s.m},
          {"lambda", s.lambda},
          {"added", s.added},
          {"basis_size", s.basis_size},
          {"max_residual", s.max_residual},
          {"mean_residual", s.mean_residual},
          {"truth_iterations", s.truth_iterations},
          {"truth_method", s.method == SolveMethod::kDense ? "dense" : "iterative"},
          {"fell_back", s.fell_back},
          {"wall_time", s.wall_time}};
}

inline Json SamplesJson(const ReducedBasisModel &rbm) {
  Json a = Json::array();
  for (const auto &s : rbm.samples) a.push_back({{"mu", s.mu.coords()}, {"m", s.m}, {"lambda", s.lambda}});
  return a;
}

}  // namespace detail

/// Greedy training. Writes model.rbm, training_log.jsonl,
/// residual_history.csv and the resolved config into `out`.
inline int Offline(const io::RunConfig &cfg, const fs::path &out, std::ostream &msg) {
  detail::EnsureDir(out);
  const models::ModelSpec spec = cfg.Spec();
  const models::Model model = models::Build(spec);
  const GreedyConfig gc = cfg.Greedy();
  detail::WriteJson(out / "config.json", io::ConfigToJson(cfg));

  const fs::path log_partial = out / "training_log.jsonl.partial";
  std::ofstream log = detail::OpenOut(log_partial);
  auto observer = [&](const GreedyStep &s, const ReducedBasisModel &) {
    log << detail::StepJson(s).dump() << '\n';
    log.flush();
    msg << "iter " << s.iteration << "  N=" << s.basis_size << "  m=" << s.m
        << "  max residual " << FormatDouble(s.max_residual) << '\n';
  };

  Json meta;
  meta["config"] = io::ConfigToJson(cfg);
  ReducedBasisModel rbm;
  try {
    rbm = GreedyTrain(model.op, {models::StructureFactor(spec)}, gc, observer);
  } catch (const TrainingAborted &e) {
    log.close();
    meta["aborted"] = e.what();
    io::SaveModel((out / "model.rbm.partial").string(), spec, e.partial(), meta, cfg.store_basis);
    msg << "training aborted: " << e.what() << "\npartial model kept in "
        << (out / "model.rbm.partial").string() << '\n';
    return kExitSolver;
  }
  log.close();
  fs::rename(log_partial, out / "training_log.jsonl");

  meta["n_f"] = rbm.samples.size();
  meta["final_max_residual"] = rbm.history.empty() ? Json(nullptr) : Json(rbm.history.back());
  io::SaveModel((out / "model.rbm").string(), spec, rbm, meta, cfg.store_basis);

  auto hist = detail::OpenOut(out / "residual_history.csv");
  hist << "iteration,basis_size,max_residual\n";
  for (std::size_t i = 0; i < rbm.history.size(); ++i) {
    hist << i + 1 << ',' << rbm.history_size[i] << ',' << FormatDouble(rbm.history[i]) << '\n';
  }
  msg << "trained N=" << rbm.size() << " from " << rbm.samples.size() << " truth solves\n";
  return kExitOk;
}

/// Surrogate scan over the config's scan grid (or the one stored with the
/// model). Writes scan.csv and scan.json.
inline int ScanCommand(const fs::path &model_path, const std::optional<io::RunConfig> &cfg_in,
                       const fs::path &out, const std::vector<std::string> &momenta,
                       std::optional<int> threads, std::ostream &msg) {
  const io::ModelFile mf = io::LoadModel(model_path.string());
  io::RunConfig cfg = cfg_in ? *cfg_in : io::ParseConfig(mf.metadata.at("config"));
  if (cfg_in) detail::CheckSameModel(cfg.Spec(), mf.spec);
  if (threads) cfg.threads = *threads;
  if (!momenta.empty()) cfg.momenta = momenta;
  const ParameterGrid grid = cfg.ScanGrid();

  ScanOptions opt;
  opt.tol_degeneracy = cfg.truth.tol_degeneracy;
  opt.residual = cfg.residual;
  opt.outputs = cfg.momenta;
  opt.threads = cfg.threads;
  const ScanTable table = Scan(mf.rbm, grid, opt);

  detail::EnsureDir(out);
  {
    auto os = detail::OpenOut(out / "scan.csv");
    WriteScanCsv(os, table);
  }
  std::size_t flagged = 0;
  for (const auto &r : table.rows) flagged += r.flags.empty() ? 0 : 1;
  Json side;
  side["model_file"] = model_path.string();
  side["model"] = io::SpecToJson(mf.spec);
  side["N"] = mf.rbm.size();
  side["n_f"] = mf.rbm.samples.size();
  side["samples"] = detail::SamplesJson(mf.rbm);
  side["tolerances"] = {{"tol_degeneracy", opt.tol_degeneracy},
                        {"greedy_tol", cfg.tol},
                        {"residual", ToString(opt.residual)}};
  side["grid_axes"] = detail::AxesJson(grid);
  side["rows"] = table.rows.size();
  side["flagged_rows"] = flagged;
  side["columns"] = {
      {"mu_i", "parameter coordinates"},
      {"lambda_rb", "reduced ground energy"},
      {"m", "reduced ground-state degeneracy"},
      {"residual", "||H(mu) Phi - lambda_rb Phi|| of the lifted reduced manifold"},
      {"structure_factor_<k>", "real part of the manifold-averaged structure factor at momentum k"},
      {"occupation", "largest manifold-averaged basis-state weight (needs the stored basis)"},
      {"flags", "space-separated: degenerate, imag:<k>, negative:<k>, error"}};
  detail::WriteJson(out / "scan.json", side);
  msg << "scanned " << table.rows.size() << " points, " << flagged << " flagged\n";
  return kExitOk;
}

/// Normalized singular values of the snapshot matrix over the training
/// grid. Writes svd.csv and svd.json.
inline int SvdCommand(const io::RunConfig &cfg, const fs::path &out, std::ostream &msg) {
  const models::ModelSpec spec = cfg.Spec();
  const models::Model model = models::Build(spec);
  const ParameterGrid grid = cfg.TrainGrid();
  detail::CheckSnapshotBudget(cfg, grid.size(), model.op.dim());

  TruthSweepOptions so;
  so.truth = cfg.truth;
  so.truth.seed = cfg.seed;
  so.threads = cfg.threads;
  const TruthSweep sweep = SweepTruth(model.op, grid, so);
  const Vector s = SnapshotSingularValues(sweep);

  detail::EnsureDir(out);
  {
    auto os = detail::OpenOut(out / "svd.csv");
    os << "n,sigma_normalized\n";
    for (Index i = 0; i < s.size(); ++i) os << i + 1 << ',' << FormatDouble(s[i]) << '\n';
  }
  Json trunc = Json::array();
  for (double tol : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    trunc.push_back({{"tol", tol}, {"basis_size", BasisSizeForTolerance(s, tol)}});
  }
  Json j;
  j["model"] = io::SpecToJson(spec);
  j["hilbert_dim"] = model.op.dim();
  j["grid_axes"] = detail::AxesJson(grid);
  j["columns"] = s.size();
  j["truncation"] = trunc;
  j["truth_iterations"] = sweep.total_iterations;
  j["dense_fallbacks"] = sweep.fallbacks;
  detail::WriteJson(out / "svd.json", j);
  msg << s.size() << " snapshot columns from " << grid.size() << " truth solves\n";
  return kExitOk;
}

/// Error report of a stored model against truth solves on the test grid.
/// Writes validate.csv (one row per basis size), validate_points.csv (final
/// size) and validate.json.
inline int ValidateCommand(const fs::path &model_path, const std::optional<io::RunConfig> &cfg_in,
                           const fs::path &out, std::optional<int> threads, std::ostream &msg) {
  const io::ModelFile mf = io::LoadModel(model_path.string());
  io::RunConfig cfg = cfg_in ? *cfg_in : io::ParseConfig(mf.metadata.at("config"));
  if (cfg_in) detail::CheckSameModel(cfg.Spec(), mf.spec);
  if (threads) cfg.threads = *threads;
  const models::Model model = models::Build(mf.spec);
  const ParameterGrid grid = cfg.TestGrid();
  detail::CheckSnapshotBudget(cfg, grid.size(), model.op.dim());

  TruthSweepOptions so;
  so.truth = cfg.truth;
  so.truth.seed = cfg.seed;
  so.threads = cfg.threads;
  if (cfg.validate_guess == "neighbor") so.guess = GuessMode::kNeighbor;
  if (cfg.validate_guess == "surrogate") {
    so.guess = GuessMode::kSurrogate;
    so.surrogate = &mf.rbm;
  }
  const AffineObservable sf = models::StructureFactor(mf.spec);
  const TruthSweep sweep = SweepTruth(model.op, grid, so, &sf);

  std::vector<Index> sizes = cfg.validate_sizes;
  if (sizes.empty()) sizes.push_back(mf.rbm.size());
  ErrorOptions eo;
  eo.tol_degeneracy = cfg.truth.tol_degeneracy;
  eo.residual = cfg.residual;
  eo.threads = cfg.threads;

  detail::EnsureDir(out);
  auto csv = detail::OpenOut(out / "validate.csv");
  csv << "basis_size,err_val,mean_val,err_vec,mean_vec,err_sf,mean_sf,max_residual,degeneracy_mismatches\n";
  Json reports = Json::array();
  ErrorReport last;
  for (Index n : sizes) {
    if (n < 1 || n > mf.rbm.size()) {
      throw ConfigError("validate.basis_sizes entry " + std::to_string(n) + " outside 1.." +
                        std::to_string(mf.rbm.size()));
    }
    last = EvaluateErrors(n == mf.rbm.size() ? mf.rbm : mf.rbm.Truncated(n), grid, sweep, eo);
    double max_res = 0.0;
    for (const auto &p : last.per_point) max_res = std::max(max_res, p.residual);
    csv << n << ',' << FormatDouble(last.err_val) << ',' << FormatDouble(last.mean_val) << ','
        << FormatDouble(last.err_vec) << ',' << FormatDouble(last.mean_vec) << ','
        << FormatDouble(last.err_sf) << ',' << FormatDouble(last.mean_sf) << ','
        << FormatDouble(max_res) << ',' << last.degeneracy_mismatches << '\n';
    reports.push_back({{"basis_size", n},
                       {"err_val", last.err_val},
                       {"mean_val", last.mean_val},
                       {"err_vec", last.has_vec ? Json(last.err_vec) : Json(nullptr)},
                       {"mean_vec", last.has_vec ? Json(last.mean_vec) : Json(nullptr)},
                       {"err_sf", last.has_sf ? Json(last.err_sf) : Json(nullptr)},
                       {"mean_sf", last.has_sf ? Json(last.mean_sf) : Json(nullptr)},
                       {"max_residual", max_res},
                       {"degeneracy_mismatches", last.degeneracy_mismatches}});
  }

  auto pts = detail::OpenOut(out / "validate_points.csv");
  for (std::size_t d = 0; d < grid.dimension(); ++d) pts << "mu_" << d + 1 << ',';
  pts << "lambda,lambda_rb,m,m_rb,residual,err_val,err_vec,err_sf,flags\n";
  for (const auto &p : last.per_point) {
    for (std::size_t d = 0; d < grid.dimension(); ++d) pts << FormatDouble(p.mu[d]) << ',';
    pts << FormatDouble(p.lambda) << ',' << FormatDouble(p.lambda_rb) << ',' << p.m << ',' << p.m_rb << ','
        << FormatDouble(p.residual) << ',' << FormatDouble(p.err_val) << ',' << FormatDouble(p.err_vec)
        << ',' << FormatDouble(p.err_sf) << ',' << p.flags << '\n';
  }

  Json j;
  j["model_file"] = model_path.string();
  j["model"] = io::SpecToJson(mf.spec);
  j["grid_axes"] = detail::AxesJson(grid);
  j["guess"] = cfg.validate_guess;
  j["truth_iterations"] = sweep.total_iterations;
  j["dense_fallbacks"] = sweep.fallbacks;
  j["reports"] = reports;
  detail::WriteJson(out / "validate.json", j);
  msg << "N=" << last.basis_size << "  err_val " << FormatDouble(last.err_val) << "  err_vec "
      << FormatDouble(last.err_vec) << "  err_sf " << FormatDouble(last.err_sf) << '\n';
  return kExitOk;
}

/// Prints the model file header.
inline int ModelInfo(const fs::path &model_path, std::ostream &os) {
  Json h = io::ReadModelHeader(model_path.string());
  os << h.dump(2) << '\n';
  return kExitOk;
}

}  // namespace rbm::cli

#endif  // RBM_CLI_COMMANDS_HPP
