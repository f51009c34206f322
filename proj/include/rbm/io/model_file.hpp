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


#ifndef RBM_IO_MODEL_FILE_HPP
#define RBM_IO_MODEL_FILE_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/models/models.hpp"
#include "rbm/offline/reduced_basis.hpp"

namespace rbm::io {

using Json = nlohmann::ordered_json;

inline constexpr std::array<char, 8> kModelMagic = {'R', 'B', 'M', 'S', 'P', 'I', 'N', '\0'};
inline constexpr std::uint32_t kModelVersion = 1;

inline Json SpecToJson(const models::ModelSpec &spec) {
  Json j;
  j["model"] = models::ToString(spec.lattice.kind);
  j["nx"] = spec.lattice.nx;
  j["ny"] = spec.lattice.ny;
  j["domain"] = {{"lower", spec.domain.lower()}, {"upper", spec.domain.upper()}};
  return j;
}

inline models::ModelSpec SpecFromJson(const Json &j) {
  const DomainBox box(j.at("domain").at("lower").get<std::vector<double>>(),
                      j.at("domain").at("upper").get<std::vector<double>>());
  const std::string kind = j.at("model").get<std::string>();
  if (kind == "rydberg") return models::ModelSpec::Rydberg(j.at("nx").get<int>(), box);
  if (kind == "triangle") {
    return models::ModelSpec::Triangle(j.at("nx").get<int>(), j.at("ny").get<int>(), box);
  }
  throw ConfigError("unknown model kind '" + kind + "'");
}

namespace detail {

inline void WriteU64(std::ostream &os, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t ReadU64(std::istream &is) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    const int c = is.get();
    if (c == EOF) throw ConfigError("model file is truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

inline void WriteBlock(std::ostream &os, const Matrix &m) {
  for (Index i = 0; i < m.size(); ++i) {
    std::uint64_t bits;
    const double v = m.data()[i];
    std::memcpy(&bits, &v, sizeof bits);
    WriteU64(os, bits);
  }
}

inline Matrix ReadBlock(std::istream &is, Index rows, Index cols) {
  Matrix m(rows, cols);
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char *>(m.data()),
            static_cast<std::streamsize>(m.size() * static_cast<Index>(sizeof(double))));
    if (!is) throw ConfigError("model file is truncated");
  } else {
    for (Index i = 0; i < m.size(); ++i) {
      const std::uint64_t bits = ReadU64(is);
      std::memcpy(m.data() + i, &bits, sizeof bits);
    }
  }
  return m;
}

}  // namespace detail

/// A stored surrogate: the model spec it was trained for, the reduced
/// model, and free-form metadata (training settings).
struct ModelFile {
  models::ModelSpec spec;
  ReducedBasisModel rbm;
  Json metadata;
};

/// Layout: 8-byte magic, u64 format version, u64 header length, JSON
/// header, then the dense blocks listed in the header as column-major
/// little-endian float64.
inline void SaveModel(const std::string &path, const models::ModelSpec &spec,
                      const ReducedBasisModel &rbm, const Json &metadata = Json::object(),
                      bool store_basis = true) {
  std::vector<std::pair<std::string, const Matrix *>> blocks;
  const bool with_basis = store_basis && rbm.has_basis();
  if (with_basis) blocks.push_back({"basis", &rbm.basis});
  blocks.push_back({"gram", &rbm.gram});
  for (std::size_t q = 0; q < rbm.h.size(); ++q) blocks.push_back({"h" + std::to_string(q), &rbm.h[q]});
  for (std::size_t q = 0; q < rbm.hh.size(); ++q) {
    blocks.push_back({"hh" + std::to_string(q), &rbm.hh[q]});
  }
  blocks.push_back({"resid_r", &rbm.resid_r});
  for (const auto &o : rbm.observables) {
    for (std::size_t r = 0; r < o.blocks.size(); ++r) {
      blocks.push_back({o.name + "." + std::to_string(r), &o.blocks[r]});
    }
  }

  Json h;
  h["format"] = "rbm-spin reduced basis model";
  h["version"] = kModelVersion;
  h["spec"] = SpecToJson(spec);
  h["truth_dim"] = rbm.truth_dim;
  h["basis_size"] = rbm.size();
  h["num_terms"] = rbm.num_terms();
  h["has_basis"] = with_basis;
  Json samples = Json::array();
  for (const auto &s : rbm.samples) {
    samples.push_back({{"mu", s.mu.coords()}, {"m", s.m}, {"lambda", s.lambda}, {"added", s.added}});
  }
  h["samples"] = samples;
  h["history"] = rbm.history;
  h["history_size"] = rbm.history_size;
  h["resid_rows"] = rbm.resid_rows;
  Json obs = Json::array();
  for (const auto &o : rbm.observables) obs.push_back({{"name", o.name}, {"terms", o.blocks.size()}});
  h["observables"] = obs;
  Json bl = Json::array();
  for (const auto &[name, m] : blocks) bl.push_back({{"name", name}, {"rows", m->rows()}, {"cols", m->cols()}});
  h["blocks"] = bl;
  h["metadata"] = metadata;

  const std::string header = h.dump();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os.write(kModelMagic.data(), kModelMagic.size());
  detail::WriteU64(os, kModelVersion);
  detail::WriteU64(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto &[name, m] : blocks) detail::WriteBlock(os, *m);
  if (!os) throw ConfigError("failed writing '" + path + "'");
}

/// Header only, without reading the blocks.
inline Json ReadModelHeader(std::istream &is, const std::string &path) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kModelMagic) throw ConfigError("'" + path + "' is not a model file");
  const std::uint64_t version = detail::ReadU64(is);
  if (version != kModelVersion) {
    throw ConfigError("model file '" + path + "' has format version " + std::to_string(version) +
                      ", this build reads version " + std::to_string(kModelVersion));
  }
  const std::uint64_t len = detail::ReadU64(is);
  std::string header(len, '\0');
  is.read(header.data(), static_cast<std::streamsize>(len));
  if (!is) throw ConfigError("model file is truncated");
  return Json::parse(header);
}

inline Json ReadModelHeader(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open model file '" + path + "'");
  return ReadModelHeader(is, path);
}

inline ModelFile LoadModel(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open model file '" + path + "'");
  const Json h = ReadModelHeader(is, path);
  ModelFile f;
  f.spec = SpecFromJson(h.at("spec"));
  f.metadata = h.value("metadata", Json::object());
  ReducedBasisModel &rbm = f.rbm;
  rbm.theta = models::Coefficients(f.spec);
  rbm.truth_dim = h.at("truth_dim").get<Index>();
  const auto nq = h.at("num_terms").get<std::size_t>();
  if (nq != rbm.theta.size()) throw ConfigError("model file term count does not match its model");
  for (const auto &s : h.at("samples")) {
    rbm.samples.push_back({ParameterPoint(s.at("mu").get<std::vector<double>>()), s.at("m").get<int>(),
                           s.at("lambda").get<double>(), s.at("added").get<Index>()});
  }
  rbm.history = h.at("history").get<std::vector<double>>();
  rbm.history_size = h.at("history_size").get<std::vector<Index>>();
  rbm.resid_rows = h.at("resid_rows").get<std::vector<Index>>();
  rbm.h.resize(nq);
  rbm.hh.resize(nq * nq);
  for (const auto &o : h.at("observables")) {
    const std::string name = o.at("name").get<std::string>();
    if (name != "structure_factor") throw ConfigError("unknown observable '" + name + "' in model file");
    ReducedObservable red{name, models::StructureFactorCoefficients(f.spec), {}};
    red.blocks.resize(o.at("terms").get<std::size_t>());
    rbm.observables.push_back(std::move(red));
  }
  for (const auto &b : h.at("blocks")) {
    const std::string name = b.at("name").get<std::string>();
    Matrix m = detail::ReadBlock(is, b.at("rows").get<Index>(), b.at("cols").get<Index>());
    if (name == "basis") {
      rbm.basis = std::move(m);
    } else if (name == "gram") {
      rbm.gram = std::move(m);
    } else if (name == "resid_r") {
      rbm.resid_r = std::move(m);
    } else if (name.rfind("hh", 0) == 0) {
      rbm.hh.at(std::stoul(name.substr(2))) = std::move(m);
    } else if (name[0] == 'h') {
      rbm.h.at(std::stoul(name.substr(1))) = std::move(m);
    } else {
      const auto dot = name.rfind('.');
      bool placed = false;
      for (auto &o : rbm.observables) {
        if (dot != std::string::npos && o.name == name.substr(0, dot)) {
          o.blocks.at(std::stoul(name.substr(dot + 1))) = std::move(m);
          placed = true;
        }
      }
      if (!placed) throw ConfigError("unexpected block '" + name + "' in model file");
    }
  }
  if (!h.at("has_basis").get<bool>()) rbm.basis = Matrix(0, 0);
  return f;
}

}  // namespace rbm::io

#endif  // RBM_IO_MODEL_FILE_HPP
