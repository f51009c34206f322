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

#ifndef RBM_CORE_AFFINE_HPP
#define RBM_CORE_AFFINE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/core/sparse.hpp"

namespace rbm {

using Complex = std::complex<double>;

/// Closed-form coefficient list theta(mu) of an affine decomposition,
/// together with the parameter box it is defined on.
class CoefficientMap {
 public:
  using Function = std::function<std::vector<double>(const ParameterPoint &)>;

  CoefficientMap() = default;
  CoefficientMap(std::size_t count, DomainBox domain, Function fn)
      : count_(count), domain_(std::move(domain)), fn_(std::move(fn)) {
    if (count_ == 0) throw StructuralError("affine decomposition needs Q >= 1");
  }

  std::size_t size() const { return count_; }
  const DomainBox &domain() const { return domain_; }

  std::vector<double> operator()(const ParameterPoint &mu) const {
    domain_.Check(mu);
    std::vector<double> theta = fn_(mu);
    if (theta.size() != count_) {
      throw StructuralError("coefficient evaluator returned wrong length");
    }
    for (double t : theta) {
      if (!std::isfinite(t)) {
        throw DomainError("non-finite coefficient at " + mu.ToString());
      }
    }
    return theta;
  }

  CoefficientMap WithDomain(DomainBox domain) const {
    if (domain.dimension() != domain_.dimension()) {
      throw ConfigError("domain override has the wrong dimension");
    }
    CoefficientMap c = *this;
    c.domain_ = std::move(domain);
    return c;
  }

 private:
  std::size_t count_ = 0;
  DomainBox domain_;
  Function fn_;
};

/// H(mu) = sum_q theta_q(mu) H_q.
class AffineOperator {
 public:
  AffineOperator() = default;
  AffineOperator(std::vector<SparseHermitian> terms, CoefficientMap theta)
      : terms_(std::make_shared<const std::vector<SparseHermitian>>(std::move(terms))),
        theta_(std::move(theta)) {
    if (terms_->empty()) throw StructuralError("affine operator needs Q >= 1 terms");
    if (terms_->size() != theta_.size()) {
      throw StructuralError("number of terms and coefficients differ");
    }
    for (const auto &t : *terms_) {
      if (t.dim() != terms_->front().dim()) {
        throw StructuralError("affine operator terms have mismatching dimensions");
      }
    }
  }

  std::size_t num_terms() const { return terms_->size(); }
  Index dim() const { return terms_->front().dim(); }
  const std::vector<SparseHermitian> &terms() const { return *terms_; }
  const SparseHermitian &term(std::size_t q) const { return (*terms_)[q]; }
  const CoefficientMap &coefficients() const { return theta_; }
  const DomainBox &domain() const { return theta_.domain(); }

  AffineOperator WithDomain(DomainBox domain) const {
    AffineOperator op = *this;
    op.theta_ = theta_.WithDomain(std::move(domain));
    return op;
  }

 private:
  std::shared_ptr<const std::vector<SparseHermitian>> terms_;
  CoefficientMap theta_;
};

inline std::vector<double> ThetaEval(const AffineOperator &op,
                                     const ParameterPoint &mu) {
  return op.coefficients()(mu);
}

inline SparseHermitian EvaluateHamiltonian(const AffineOperator &op,
                                           const ParameterPoint &mu) {
  return Combine(op.terms(), ThetaEval(op, mu));
}

/// alpha_r(mu; p) for every term r at output index p.
class ObservableCoefficients {
 public:
  using Function =
      std::function<std::vector<Complex>(const ParameterPoint &, std::size_t)>;

  ObservableCoefficients() = default;
  ObservableCoefficients(std::size_t num_terms, std::vector<std::string> labels,
                         Function fn)
      : num_terms_(num_terms), labels_(std::move(labels)), fn_(std::move(fn)) {}

  std::size_t num_terms() const { return num_terms_; }
  std::size_t num_outputs() const { return labels_.size(); }
  const std::vector<std::string> &labels() const { return labels_; }

  std::vector<Complex> operator()(const ParameterPoint &mu, std::size_t p) const {
    if (p >= num_outputs()) throw StructuralError("observable output index out of range");
    auto a = fn_(mu, p);
    if (a.size() != num_terms_) {
      throw StructuralError("observable coefficient evaluator returned wrong length");
    }
    return a;
  }

 private:
  std::size_t num_terms_ = 0;
  std::vector<std::string> labels_;
  Function fn_;
};

/// One summand sign * F_left^T F_right of a factored observable term.
struct FactorProduct {
  std::size_t left;
  std::size_t right;
  double sign = 1.0;
};

/// O(p) = sum_r alpha_r(mu; p) O_r where each O_r is kept in factored form
/// O_r = sum_c sign_c F_{l_c}^T F_{r_c}. The factors are the one-sided
/// operators (occupations, spin components); reduced blocks are formed from
/// pairs of F B.
class AffineObservable {
 public:
  AffineObservable() = default;
  AffineObservable(std::string name, std::vector<RealSparse> factors,
                   std::vector<std::vector<FactorProduct>> terms,
                   ObservableCoefficients alpha)
      : name_(std::move(name)),
        factors_(std::make_shared<const std::vector<RealSparse>>(std::move(factors))),
        terms_(std::move(terms)),
        alpha_(std::move(alpha)) {
    if (factors_->empty()) throw StructuralError("observable needs factors");
    for (const auto &f : *factors_) {
      if (f.rows() != f.cols() || f.rows() != factors_->front().rows()) {
        throw StructuralError("observable factors must share one square shape");
      }
    }
    for (const auto &t : terms_) {
      for (const auto &p : t) {
        if (p.left >= factors_->size() || p.right >= factors_->size()) {
          throw StructuralError("observable term references unknown factor");
        }
      }
    }
    if (alpha_.num_terms() != terms_.size()) {
      throw StructuralError("observable coefficient count differs from term count");
    }
  }

  const std::string &name() const { return name_; }
  Index dim() const { return factors_->front().rows(); }
  std::size_t num_terms() const { return terms_.size(); }
  std::size_t num_outputs() const { return alpha_.num_outputs(); }
  const std::vector<RealSparse> &factors() const { return *factors_; }
  const std::vector<std::vector<FactorProduct>> &terms() const { return terms_; }
  const ObservableCoefficients &coefficients() const { return alpha_; }

  /// Explicit O_r; checked to be Hermitian.
  SparseHermitian Materialize(std::size_t r) const {
    RealSparse acc(dim(), dim());
    for (const auto &p : terms_.at(r)) {
      RealSparse prod = RealSparse((*factors_)[p.left].transpose()) * (*factors_)[p.right];
      acc += p.sign * prod;
    }
    return SparseHermitian::FromMatrix(acc, 1e-14);
  }

  /// Manifold averages (1/m) sum_i psi_i^T O_r psi_i for every term r.
  std::vector<double> TermExpectations(const Matrix &states) const {
    if (states.rows() != dim()) {
      throw StructuralError("state block does not match observable dimension");
    }
    const double m = static_cast<double>(states.cols());
    std::vector<Matrix> applied(factors_->size());
    for (std::size_t f = 0; f < factors_->size(); ++f) {
      applied[f] = (*factors_)[f] * states;
    }
    std::vector<double> t(terms_.size(), 0.0);
    for (std::size_t r = 0; r < terms_.size(); ++r) {
      for (const auto &p : terms_[r]) {
        t[r] += p.sign * (applied[p.left].array() * applied[p.right].array()).sum();
      }
      t[r] /= m;
    }
    return t;
  }

  /// sum_r alpha_r(mu; p) t_r.
  Complex Combine(const ParameterPoint &mu, std::size_t p,
                  const std::vector<double> &term_values) const {
    auto a = alpha_(mu, p);
    Complex acc = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) acc += a[r] * term_values[r];
    return acc;
  }

  /// Truth evaluation of every output for the manifold `states`.
  std::vector<Complex> Evaluate(const ParameterPoint &mu, const Matrix &states) const {
    auto t = TermExpectations(states);
    std::vector<Complex> out(num_outputs());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = Combine(mu, p, t);
    return out;
  }

 private:
  std::string name_;
  std::shared_ptr<const std::vector<RealSparse>> factors_;
  std::vector<std::vector<FactorProduct>> terms_;
  ObservableCoefficients alpha_;
};

}  // namespace rbm

#endif  // RBM_CORE_AFFINE_HPP
