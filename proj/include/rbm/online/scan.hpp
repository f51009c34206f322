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


#ifndef RBM_ONLINE_SCAN_HPP
#define RBM_ONLINE_SCAN_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/offline/residual.hpp"
#include "rbm/online/reduced_ground.hpp"
#include "rbm/util/parallel.hpp"

namespace rbm {

struct ScanOptions {
  double tol_degeneracy = 1e-8;
  ResidualMethod residual = ResidualMethod::kFactored;
  /// Output labels to report per observable; empty selects all outputs.
  std::vector<std::string> outputs;
  /// Include the occupation column (needs the stored basis).
  bool occupation = true;
  int threads = 0;
};

struct ScanRow {
  std::size_t index = 0;
  ParameterPoint mu;
  double lambda_rb = std::numeric_limits<double>::quiet_NaN();
  int m = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  /// values[o][p]: observable o at its p-th selected output.
  std::vector<std::vector<Complex>> values;
  double occupation = std::numeric_limits<double>::quiet_NaN();
  /// Space-separated markers; empty for clean rows.
  std::string flags;
};

struct ScanTable {
  std::size_t parameter_dim = 0;
  std::vector<std::string> observables;
  /// Selected output indices and labels per observable.
  std::vector<std::vector<std::size_t>> outputs;
  std::vector<std::vector<std::string>> labels;
  bool has_occupation = false;
  std::vector<ScanRow> rows;
};

namespace detail {

inline void AddFlag(std::string &flags, const std::string &f) {
  if (!flags.empty()) flags += ' ';
  flags += f;
}

}  // namespace detail

/// Surrogate sweep over `grid` in grid order. Failures at a point are
/// recorded in that row's flags and the sweep continues.
inline ScanTable Scan(const ReducedBasisModel &rbm, const ParameterGrid &grid,
                      const ScanOptions &opt = {}) {
  if (rbm.empty()) throw StateError("cannot scan with an empty reduced basis model");
  ScanTable table;
  table.parameter_dim = grid.dimension();
  table.has_occupation = opt.occupation && rbm.has_basis();
  for (const auto &o : rbm.observables) {
    std::vector<std::size_t> idx;
    std::vector<std::string> lab;
    const auto &all = o.alpha.labels();
    for (std::size_t p = 0; p < all.size(); ++p) {
      bool take = opt.outputs.empty();
      for (const auto &want : opt.outputs) take = take || want == all[p];
      if (take) {
        idx.push_back(p);
        lab.push_back(all[p]);
      }
    }
    table.observables.push_back(o.name);
    table.outputs.push_back(std::move(idx));
    table.labels.push_back(std::move(lab));
  }
  for (const auto &want : opt.outputs) {
    bool known = false;
    for (const auto &lab : table.labels) {
      for (const auto &l : lab) known = known || l == want;
    }
    if (!known) throw ConfigError("unknown observable output '" + want + "'");
  }

  table.rows.resize(grid.size());
  ParallelFor(grid.size(), opt.threads, [&](std::size_t i) {
    ScanRow &row = table.rows[i];
    row.index = i;
    row.mu = grid.Point(i);
    try {
      const ReducedSolution sol = ReducedGround(rbm, row.mu, opt.tol_degeneracy);
      row.lambda_rb = sol.lambda_rb;
      row.m = sol.m;
      row.residual = Residual(rbm, sol, opt.residual);
      if (sol.m > 1) detail::AddFlag(row.flags, "degenerate");
      for (std::size_t o = 0; o < rbm.observables.size(); ++o) {
        const auto all = ObservableEval(rbm.observables[o], sol);
        std::vector<Complex> sel;
        for (std::size_t p : table.outputs[o]) {
          const Complex v = all[p];
          if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real()))) {
            detail::AddFlag(row.flags, "imag:" + table.labels[o][sel.size()]);
          }
          if (v.real() < -1e-10) detail::AddFlag(row.flags, "negative:" + table.labels[o][sel.size()]);
          sel.push_back(v);
        }
        row.values.push_back(std::move(sel));
      }
      if (table.has_occupation) {
        const Matrix x = rbm.basis * sol.phi;
        row.occupation = (x.array().square().rowwise().sum() / static_cast<double>(sol.m)).maxCoeff();
      }
    } catch (const std::exception &e) {
      row.values.assign(rbm.observables.size(), {});
      for (std::size_t o = 0; o < rbm.observables.size(); ++o) {
        row.values[o].assign(table.outputs[o].size(),
                             Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
      }
      detail::AddFlag(row.flags, "error");
    }
  });
  return table;
}

/// Shortest decimal text that reads back as the same double (17 significant
/// digits).
inline std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with columns mu_1..mu_P, lambda_rb, m, residual, one column per
/// selected observable output (real part), occupation when present, flags.
inline void WriteScanCsv(std::ostream &os, const ScanTable &t) {
  for (std::size_t d = 0; d < t.parameter_dim; ++d) os << "mu_" << d + 1 << ',';
  os << "lambda_rb,m,residual";
  for (std::size_t o = 0; o < t.observables.size(); ++o) {
    for (const auto &l : t.labels[o]) os << ',' << t.observables[o] << '_' << l;
  }
  if (t.has_occupation) os << ",occupation";
  os << ",flags\n";
  for (const auto &r : t.rows) {
    for (std::size_t d = 0; d < t.parameter_dim; ++d) os << FormatDouble(r.mu[d]) << ',';
    os << FormatDouble(r.lambda_rb) << ',' << r.m << ',' << FormatDouble(r.residual);
    for (const auto &vals : r.values) {
      for (const auto &v : vals) os << ',' << FormatDouble(v.real());
    }
    if (t.has_occupation) os << ',' << FormatDouble(r.occupation);
    os << ',' << r.flags << '\n';
  }
}

}  // namespace rbm

#endif  // RBM_ONLINE_SCAN_HPP
