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

#ifndef RBM_CORE_ERRORS_HPP
#define RBM_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbm {

// Shapes or dimensions that do not fit together.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter point outside the declared parameter box.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid user configuration (model sizes, grids, tolerances).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A truth solve that could not be completed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loss of precision beyond the accepted round-off window.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An object used before the data it needs was computed.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rbm

#endif  // RBM_CORE_ERRORS_HPP
