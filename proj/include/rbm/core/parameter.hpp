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

#ifndef RBM_CORE_PARAMETER_HPP
#define RBM_CORE_PARAMETER_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rbm/core/errors.hpp"

namespace rbm {

/// A point in the parameter domain. Coordinates are dimensionless couplings.
class ParameterPoint {
 public:
  ParameterPoint() = default;
  ParameterPoint(std::initializer_list<double> coords)
      : coords_(coords) {
    Validate();
  }
  explicit ParameterPoint(std::vector<double> coords)
      : coords_(std::move(coords)) {
    Validate();
  }

  std::size_t size() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double> &coords() const { return coords_; }

  bool operator==(const ParameterPoint &) const = default;

  std::string ToString() const {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) os << ", ";
      os << coords_[i];
    }
    os << ")";
    return os.str();
  }

 private:
  void Validate() const {
    for (double c : coords_) {
      if (!std::isfinite(c)) {
        throw DomainError("parameter coordinates must be finite");
      }
    }
  }

  std::vector<double> coords_;
};

/// Axis-aligned box of admissible parameters.
class DomainBox {
 public:
  DomainBox() = default;
  DomainBox(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.empty()) {
      throw ConfigError("domain bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) ||
          lower_[i] > upper_[i]) {
        throw ConfigError("invalid domain interval on axis " +
                          std::to_string(i));
      }
    }
  }

  std::size_t dimension() const { return lower_.size(); }
  const std::vector<double> &lower() const { return lower_; }
  const std::vector<double> &upper() const { return upper_; }

  bool Contains(const ParameterPoint &mu) const {
    if (mu.size() != dimension()) return false;
    for (std::size_t i = 0; i < dimension(); ++i) {
      double slack = 1e-12 * std::max(1.0, upper_[i] - lower_[i]);
      if (mu[i] < lower_[i] - slack || mu[i] > upper_[i] + slack) return false;
    }
    return true;
  }

  void Check(const ParameterPoint &mu) const {
    if (mu.size() != dimension()) {
      throw DomainError("parameter point " + mu.ToString() + " has dimension " +
                        std::to_string(mu.size()) + ", expected " +
                        std::to_string(dimension()));
    }
    if (!Contains(mu)) {
      throw DomainError("parameter point " + mu.ToString() +
                        " lies outside the parameter domain");
    }
  }

  bool operator==(const DomainBox &) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Cartesian product grid; points are enumerated row-major (last axis
/// fastest).
class ParameterGrid {
 public:
  ParameterGrid() = default;
  explicit ParameterGrid(std::vector<std::vector<double>> axes)
      : axes_(std::move(axes)) {
    if (axes_.empty()) throw ConfigError("parameter grid needs at least one axis");
    for (const auto &axis : axes_) {
      if (axis.empty()) throw ConfigError("parameter grid axis is empty");
      for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i])) throw ConfigError("grid values must be finite");
        if (i > 0 && !(axis[i] > axis[i - 1])) {
          throw ConfigError("grid axes must be strictly increasing");
        }
      }
    }
  }

  /// `counts[i]` equispaced values covering [lower, upper] including both ends.
  static ParameterGrid Uniform(const DomainBox &box,
                               const std::vector<std::size_t> &counts) {
    CheckCounts(box, counts);
    std::vector<std::vector<double>> axes(counts.size());
    for (std::size_t d = 0; d < counts.size(); ++d) {
      double lo = box.lower()[d], hi = box.upper()[d];
      if (counts[d] == 1) {
        axes[d] = {lo};
        continue;
      }
      for (std::size_t i = 0; i < counts[d]; ++i) {
        axes[d].push_back(lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(counts[d] - 1));
      }
    }
    return ParameterGrid(std::move(axes));
  }

  /// Midpoints of the uniform grid with `counts[i] + 1` values per axis, i.e.
  /// a grid interleaved with `Uniform(box, counts + 1)`.
  static ParameterGrid Midpoints(const DomainBox &box,
                                 const std::vector<std::size_t> &counts) {
    CheckCounts(box, counts);
    std::vector<std::vector<double>> axes(counts.size());
    for (std::size_t d = 0; d < counts.size(); ++d) {
      double lo = box.lower()[d], hi = box.upper()[d];
      double h = (hi - lo) / static_cast<double>(counts[d]);
      for (std::size_t i = 0; i < counts[d]; ++i) {
        axes[d].push_back(lo + h * (static_cast<double>(i) + 0.5));
      }
    }
    return ParameterGrid(std::move(axes));
  }

  std::size_t dimension() const { return axes_.size(); }
  const std::vector<std::vector<double>> &axes() const { return axes_; }

  std::size_t size() const {
    if (axes_.empty()) return 0;
    std::size_t n = 1;
    for (const auto &a : axes_) n *= a.size();
    return n;
  }

  std::vector<std::size_t> MultiIndex(std::size_t index) const {
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t d = axes_.size(); d-- > 0;) {
      idx[d] = index % axes_[d].size();
      index /= axes_[d].size();
    }
    return idx;
  }

  ParameterPoint Point(std::size_t index) const {
    if (index >= size()) throw StructuralError("grid index out of range");
    auto idx = MultiIndex(index);
    std::vector<double> c(axes_.size());
    for (std::size_t d = 0; d < axes_.size(); ++d) c[d] = axes_[d][idx[d]];
    return ParameterPoint(std::move(c));
  }

  std::vector<ParameterPoint> Points() const {
    std::vector<ParameterPoint> pts;
    pts.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) pts.push_back(Point(i));
    return pts;
  }

  /// Index of the grid point closest to `mu` if it matches within `tol`.
  std::ptrdiff_t Find(const ParameterPoint &mu, double tol = 1e-12) const {
    if (mu.size() != dimension()) return -1;
    std::size_t index = 0;
    for (std::size_t d = 0; d < dimension(); ++d) {
      std::ptrdiff_t hit = -1;
      for (std::size_t i = 0; i < axes_[d].size(); ++i) {
        if (std::abs(axes_[d][i] - mu[d]) <= tol * std::max(1.0, std::abs(mu[d]))) {
          hit = static_cast<std::ptrdiff_t>(i);
          break;
        }
      }
      if (hit < 0) return -1;
      index = index * axes_[d].size() + static_cast<std::size_t>(hit);
    }
    return static_cast<std::ptrdiff_t>(index);
  }

  bool InsideBox(const DomainBox &box) const {
    if (box.dimension() != dimension()) return false;
    for (std::size_t d = 0; d < dimension(); ++d) {
      if (!box.Contains(BoxProbe(box, d, axes_[d].front())) ||
          !box.Contains(BoxProbe(box, d, axes_[d].back()))) {
        return false;
      }
    }
    return true;
  }

 private:
  static void CheckCounts(const DomainBox &box,
                          const std::vector<std::size_t> &counts) {
    if (counts.size() != box.dimension()) {
      throw ConfigError("grid counts do not match the domain dimension");
    }
    for (std::size_t c : counts) {
      if (c == 0) throw ConfigError("grid counts must be positive");
    }
  }

  static ParameterPoint BoxProbe(const DomainBox &box, std::size_t axis,
                                 double value) {
    std::vector<double> c = box.lower();
    c[axis] = value;
    return ParameterPoint(std::move(c));
  }

  std::vector<std::vector<double>> axes_;
};

}  // namespace rbm

#endif  // RBM_CORE_PARAMETER_HPP
