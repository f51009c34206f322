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


#ifndef RBM_RBM_HPP
#define RBM_RBM_HPP

#include "rbm/core/affine.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/core/sparse.hpp"
#include "rbm/diagnostics/errors.hpp"
#include "rbm/diagnostics/snapshot_svd.hpp"
#include "rbm/diagnostics/truth_sweep.hpp"
#include "rbm/io/config.hpp"
#include "rbm/io/model_file.hpp"
#include "rbm/models/models.hpp"
#include "rbm/offline/greedy.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/offline/residual.hpp"
#include "rbm/online/reduced_ground.hpp"
#include "rbm/online/scan.hpp"
#include "rbm/truth/ground_state.hpp"

#endif  // RBM_RBM_HPP
