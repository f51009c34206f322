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


#ifndef RBM_IO_CONFIG_HPP
#define RBM_IO_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/io/model_file.hpp"
#include "rbm/models/models.hpp"
#include "rbm/offline/greedy.hpp"
#include "rbm/offline/residual.hpp"
#include "rbm/truth/ground_state.hpp"

namespace rbm::io {

/// A grid given either by per-axis point counts over the domain
/// ("uniform" includes the endpoints, "midpoints" interleaves a uniform
/// grid with one more point per axis) or by explicit axes.
struct GridSpec {
  std::string kind = "uniform";
  std::vector<std::size_t> counts;
  std::vector<std::vector<double>> axes;

  bool empty() const { return counts.empty() && axes.empty(); }

  ParameterGrid Build(const DomainBox &box) const {
    if (kind == "axes") return ParameterGrid(axes);
    if (kind == "uniform") return ParameterGrid::Uniform(box, counts);
    if (kind == "midpoints") return ParameterGrid::Midpoints(box, counts);
    throw ConfigError("unknown grid kind '" + kind + "'");
  }
};

struct RunConfig {
  std::string model = "rydberg";
  int nx = 13;
  int ny = 1;
  std::optional<DomainBox> domain;
  /// Defaults to 50x50 for the chain and 20x20x20 for the triangle lattice.
  GridSpec train_grid{"uniform", {50, 50}, {}};
  /// Defaults to midpoints interleaved with the training grid.
  GridSpec test_grid;
  /// Defaults to the test grid.
  GridSpec scan_grid;
  double tol = 1e-6;
  int max_truth_solves = 200;
  Index max_basis = 0;
  double compress_tol = 1e-10;
  std::optional<std::vector<double>> mu_1;
  ResidualMethod residual = ResidualMethod::kFactored;
  bool warm_start = true;
  TruthOptions truth;
  std::uint64_t seed = 20211124;
  int threads = 0;
  std::string output_dir = "rbm_out";
  std::vector<std::string> momenta;
  bool store_basis = true;
  /// Basis sizes at which validate reports errors; empty means the final
  /// size only.
  std::vector<Index> validate_sizes;
  std::string validate_guess = "cold";
  /// Upper bound on the snapshot matrix size for svd and validate.
  double max_snapshot_gb = 4.0;

  models::ModelSpec Spec() const {
    if (model == "rydberg") return models::ModelSpec::Rydberg(nx, domain);
    if (model == "triangle") return models::ModelSpec::Triangle(nx, ny, domain);
    throw ConfigError("unknown model '" + model + "' (expected rydberg or triangle)");
  }

  ParameterGrid TrainGrid() const { return train_grid.Build(Spec().domain); }

  ParameterGrid TestGrid() const {
    if (!test_grid.empty()) return test_grid.Build(Spec().domain);
    if (train_grid.kind == "axes") {
      throw ConfigError("test_grid must be given when train_grid lists explicit axes");
    }
    std::vector<std::size_t> c;
    for (std::size_t n : train_grid.counts) c.push_back(n > 1 ? n - 1 : 1);
    return ParameterGrid::Midpoints(Spec().domain, c);
  }

  ParameterGrid ScanGrid() const {
    if (!scan_grid.empty()) return scan_grid.Build(Spec().domain);
    return TestGrid();
  }

  GreedyConfig Greedy() const {
    GreedyConfig g;
    g.train_grid = TrainGrid();
    g.tol = tol;
    g.max_truth_solves = max_truth_solves;
    g.max_basis = max_basis;
    g.compress_tol = compress_tol;
    if (mu_1) g.mu_1 = ParameterPoint(*mu_1);
    g.truth = truth;
    g.truth.seed = seed;
    g.residual = residual;
    g.warm_start = warm_start;
    g.threads = threads;
    return g;
  }
};

namespace detail {

inline void RejectUnknown(const Json &j, const std::set<std::string> &known, const std::string &where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto &[k, v] : j.items()) {
    if (!known.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void Read(const Json &j, const char *key, T &out, const std::string &where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

inline GridSpec ReadGrid(const Json &j, const std::string &where) {
  RejectUnknown(j, {"kind", "counts", "axes"}, where);
  GridSpec g;
  Read(j, "kind", g.kind, where);
  if (j.contains("axes")) {
    g.kind = "axes";
    for (const auto &a : j.at("axes")) {
      if (a.is_array()) {
        g.axes.push_back(a.get<std::vector<double>>());
      } else {
        RejectUnknown(a, {"from", "to", "count"}, where + ".axes");
        const double lo = a.at("from").get<double>(), hi = a.at("to").get<double>();
        const auto n = a.at("count").get<std::size_t>();
        if (n == 0) throw ConfigError("axis count must be positive in " + where);
        std::vector<double> axis;
        for (std::size_t i = 0; i < n; ++i) {
          axis.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        g.axes.push_back(std::move(axis));
      }
    }
  } else {
    Read(j, "counts", g.counts, where);
    if (g.counts.empty()) throw ConfigError(where + " needs counts or axes");
  }
  return g;
}

inline Json GridToJson(const GridSpec &g) {
  if (g.empty()) return nullptr;
  if (g.kind == "axes") return {{"axes", g.axes}};
  return {{"kind", g.kind}, {"counts", g.counts}};
}

}  // namespace detail

inline Json ConfigToJson(const RunConfig &c) {
  Json j;
  j["model"] = c.model;
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  const DomainBox box = c.Spec().domain;
  j["domain"] = {{"lower", box.lower()}, {"upper", box.upper()}};
  j["train_grid"] = detail::GridToJson(c.train_grid);
  j["test_grid"] = detail::GridToJson(c.test_grid);
  j["scan_grid"] = detail::GridToJson(c.scan_grid);
  j["greedy"] = {{"tol", c.tol},
                 {"max_truth_solves", c.max_truth_solves},
                 {"max_basis", c.max_basis},
                 {"compress_tol", c.compress_tol},
                 {"mu_1", c.mu_1 ? Json(*c.mu_1) : Json(nullptr)},
                 {"residual", ToString(c.residual)},
                 {"warm_start", c.warm_start}};
  j["truth"] = {{"tol_resid", c.truth.tol_resid},
                {"tol_degeneracy", c.truth.tol_degeneracy},
                {"max_iter", c.truth.max_iter},
                {"dense_cap", c.truth.dense_cap},
                {"dense_below", c.truth.dense_below},
                {"min_guard", c.truth.min_guard}};
  j["validate"] = {{"basis_sizes", c.validate_sizes},
                   {"guess", c.validate_guess},
                   {"max_snapshot_gb", c.max_snapshot_gb}};
  j["momenta"] = c.momenta;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  j["store_basis"] = c.store_basis;
  return j;
}

/// Parses and validates a run configuration; unknown keys are rejected.
inline RunConfig ParseConfig(const Json &j) {
  using detail::Read;
  detail::RejectUnknown(j,
                        {"model", "nx", "ny", "domain", "train_grid", "test_grid", "scan_grid",
                         "greedy", "truth", "validate", "momenta", "seed", "threads",
                         "output_dir", "store_basis"},
                        "config");
  RunConfig c;
  const std::string top = "config";
  Read(j, "model", c.model, top);
  Read(j, "nx", c.nx, top);
  Read(j, "ny", c.ny, top);
  if (c.model == "rydberg" && j.contains("ny") && c.ny != 1) {
    throw ConfigError("the Rydberg chain has ny = 1");
  }
  if (j.contains("domain") && !j.at("domain").is_null()) {
    detail::RejectUnknown(j.at("domain"), {"lower", "upper"}, "domain");
    std::vector<double> lo, hi;
    Read(j.at("domain"), "lower", lo, "domain");
    Read(j.at("domain"), "upper", hi, "domain");
    c.domain = DomainBox(lo, hi);
  }
  if (j.contains("train_grid")) {
    c.train_grid = detail::ReadGrid(j.at("train_grid"), "train_grid");
  } else if (c.model == "triangle") {
    c.train_grid.counts = {20, 20, 20};
  }
  if (j.contains("test_grid") && !j.at("test_grid").is_null()) {
    c.test_grid = detail::ReadGrid(j.at("test_grid"), "test_grid");
  }
  if (j.contains("scan_grid") && !j.at("scan_grid").is_null()) {
    c.scan_grid = detail::ReadGrid(j.at("scan_grid"), "scan_grid");
  }
  if (j.contains("greedy")) {
    const Json &g = j.at("greedy");
    detail::RejectUnknown(g, {"tol", "max_truth_solves", "max_basis", "compress_tol", "mu_1", "residual", "warm_start"},
                          "greedy");
    Read(g, "tol", c.tol, "greedy");
    Read(g, "max_truth_solves", c.max_truth_solves, "greedy");
    Read(g, "max_basis", c.max_basis, "greedy");
    Read(g, "compress_tol", c.compress_tol, "greedy");
    if (g.contains("mu_1") && !g.at("mu_1").is_null()) {
      std::vector<double> mu;
      Read(g, "mu_1", mu, "greedy");
      c.mu_1 = mu;
    }
    std::string res = ToString(c.residual);
    Read(g, "residual", res, "greedy");
    if (res == "factored") {
      c.residual = ResidualMethod::kFactored;
    } else if (res == "gram") {
      c.residual = ResidualMethod::kGram;
    } else {
      throw ConfigError("greedy.residual must be 'factored' or 'gram'");
    }
    Read(g, "warm_start", c.warm_start, "greedy");
  }
  if (j.contains("truth")) {
    const Json &t = j.at("truth");
    detail::RejectUnknown(t, {"tol_resid", "tol_degeneracy", "max_iter", "dense_cap", "dense_below", "min_guard"},
                          "truth");
    Read(t, "tol_resid", c.truth.tol_resid, "truth");
    Read(t, "tol_degeneracy", c.truth.tol_degeneracy, "truth");
    Read(t, "max_iter", c.truth.max_iter, "truth");
    Read(t, "dense_cap", c.truth.dense_cap, "truth");
    Read(t, "dense_below", c.truth.dense_below, "truth");
    Read(t, "min_guard", c.truth.min_guard, "truth");
  }
  if (j.contains("validate")) {
    const Json &v = j.at("validate");
    detail::RejectUnknown(v, {"basis_sizes", "guess", "max_snapshot_gb"}, "validate");
    Read(v, "basis_sizes", c.validate_sizes, "validate");
    Read(v, "guess", c.validate_guess, "validate");
    Read(v, "max_snapshot_gb", c.max_snapshot_gb, "validate");
  }
  Read(j, "momenta", c.momenta, top);
  Read(j, "seed", c.seed, top);
  Read(j, "threads", c.threads, top);
  Read(j, "output_dir", c.output_dir, top);
  Read(j, "store_basis", c.store_basis, top);

  // Validation against the model before any compute.
  const models::ModelSpec spec = c.Spec();
  const ParameterGrid train = c.TrainGrid();
  if (train.dimension() != spec.parameter_dim()) {
    throw ConfigError("train_grid has " + std::to_string(train.dimension()) + " axes, the " + c.model +
                      " model has " + std::to_string(spec.parameter_dim()) + " parameters");
  }
  if (!train.InsideBox(spec.domain)) throw ConfigError("train_grid leaves the parameter domain");
  for (const ParameterGrid &g : {c.TestGrid(), c.ScanGrid()}) {
    if (g.dimension() != spec.parameter_dim() || !g.InsideBox(spec.domain)) {
      throw ConfigError("test/scan grid does not fit the parameter domain");
    }
  }
  if (c.mu_1 && train.Find(ParameterPoint(*c.mu_1)) < 0) {
    throw ConfigError("greedy.mu_1 is not a point of the training grid");
  }
  if (!(c.tol > 0.0)) throw ConfigError("greedy.tol must be positive");
  if (c.max_truth_solves < 1) throw ConfigError("greedy.max_truth_solves must be at least 1");
  if (c.max_basis < 0) throw ConfigError("greedy.max_basis must be non-negative");
  if (!(c.truth.tol_resid > 0.0) || !(c.truth.tol_degeneracy >= 0.0) || c.truth.max_iter < 1) {
    throw ConfigError("truth tolerances must be positive");
  }
  if (c.validate_guess != "cold" && c.validate_guess != "neighbor" && c.validate_guess != "surrogate") {
    throw ConfigError("validate.guess must be cold, neighbor or surrogate");
  }
  const auto labels = models::StructureFactorCoefficients(spec).labels();
  for (const auto &k : c.momenta) {
    if (std::find(labels.begin(), labels.end(), k) == labels.end()) {
      throw ConfigError("momentum '" + k + "' is not on the momentum grid of this lattice");
    }
  }
  if (c.threads < 0) throw ConfigError("threads must be non-negative");
  return c;
}

inline RunConfig LoadConfig(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(is);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return ParseConfig(j);
}

}  // namespace rbm::io

#endif  // RBM_IO_CONFIG_HPP
