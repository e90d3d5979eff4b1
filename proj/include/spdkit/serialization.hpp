// Copyright 2026 the spdkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Text formats. All values are written with 17 significant digits, which
// round-trips IEEE doubles exactly, so a write/read cycle is bit-faithful.
//
//   SPDDESC v1 <dim> <set_id> <label>      one SPD descriptor,
//   <dim rows of dim values>               symmetry verified on load
//
//   GRAM v1 <m> <kernel-kind> <params>     certified kernel matrix,
//   <m point ids>                          re-certified on load
//   <m rows of m values>
//
//   SPDMODEL v1 <variant>                  trained classifier; stores the
//   kernel <kind> <params>                 exact training inputs and re-runs
//   hyper <ridge_scale> <sparsity>         the (deterministic) trainer on
//   points <m> <dim>                       load, which reproduces the model
//   <id> <label> + <matrix>, m times       state bit for bit

#ifndef SPDKIT_SERIALIZATION_HPP_
#define SPDKIT_SERIALIZATION_HPP_

#include <Eigen/Dense>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "spdkit/classifiers.hpp"
#include "spdkit/error.hpp"
#include "spdkit/kernels.hpp"
#include "spdkit/matrix.hpp"

namespace spdkit {
namespace detail_ser {

inline void check_token(const std::string& s, const std::string& what) {
  if (s.empty()) throw IoError(what + ": empty token");
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw IoError(what + " '" + s + "': whitespace not allowed");
    }
  }
}

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_value(m(i, j));
    }
    out << '\n';
  }
}

inline std::string read_token(std::istream& in, const std::string& context) {
  std::string tok;
  if (!(in >> tok)) throw IoError(context + ": unexpected end of input");
  return tok;
}

inline void expect_token(std::istream& in, const std::string& expected,
                         const std::string& context) {
  const std::string tok = read_token(in, context);
  if (tok != expected) {
    throw IoError(context + ": expected '" + expected + "', got '" + tok + "'");
  }
}

inline long read_long(std::istream& in, const std::string& context) {
  const std::string tok = read_token(in, context);
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw IoError(context + ": expected integer, got '" + tok + "'");
  }
  if (pos != tok.size()) throw IoError(context + ": expected integer, got '" + tok + "'");
  return v;
}

inline double read_value(std::istream& in, const std::string& context) {
  const std::string tok = read_token(in, context);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw IoError(context + ": expected number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw IoError(context + ": expected number, got '" + tok + "'");
  return v;
}

inline Eigen::MatrixXd read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols,
                                   const std::string& context) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = read_value(in, context);
  }
  return m;
}

inline void verify_exact_symmetry(const Eigen::MatrixXd& m, const std::string& context) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i)) {
        throw IoError(context + ": not symmetric at (" + std::to_string(i) + "," +
                      std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace detail_ser

struct DescriptorRecord {
  SpdMatrix matrix;
  std::string set_id;
  std::string label;
};

inline void write_descriptor(const SpdMatrix& m, const std::string& set_id,
                             const std::string& label, std::ostream& out) {
  detail_ser::check_token(set_id, "descriptor set_id");
  detail_ser::check_token(label, "descriptor label");
  out << "SPDDESC v1 " << m.dim() << ' ' << set_id << ' ' << label << '\n';
  detail_ser::write_matrix(out, m.mat());
  if (!out) throw IoError("write_descriptor: write failed");
}

inline DescriptorRecord read_descriptor(std::istream& in, const std::string& context = "SPDDESC") {
  detail_ser::expect_token(in, "SPDDESC", context);
  detail_ser::expect_token(in, "v1", context);
  const long dim = detail_ser::read_long(in, context);
  if (dim < 1) throw IoError(context + ": bad dimension " + std::to_string(dim));
  const std::string set_id = detail_ser::read_token(in, context);
  const std::string label = detail_ser::read_token(in, context);
  const Eigen::MatrixXd m = detail_ser::read_matrix(in, dim, dim, context);
  detail_ser::verify_exact_symmetry(m, context);
  return DescriptorRecord{SpdMatrix(SymMatrix(m)), set_id, label};
}

inline void write_descriptor_file(const SpdMatrix& m, const std::string& set_id,
                                  const std::string& label, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  write_descriptor(m, set_id, label, out);
}

inline DescriptorRecord read_descriptor_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_descriptor(in, path.string());
}

inline void write_gram(const GramMatrix& g, std::ostream& out) {
  out << "GRAM v1 " << g.size() << ' ' << g.kernel().kind_token() << ' '
      << g.kernel().params_token() << '\n';
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const std::string& id = g.point_ids()[static_cast<std::size_t>(i)];
    detail_ser::check_token(id, "gram point id");
    if (i) out << ' ';
    out << id;
  }
  out << '\n';
  detail_ser::write_matrix(out, g.entries());
  if (!out) throw IoError("write_gram: write failed");
}

inline GramMatrix read_gram(std::istream& in, const std::string& context = "GRAM") {
  detail_ser::expect_token(in, "GRAM", context);
  detail_ser::expect_token(in, "v1", context);
  const long m = detail_ser::read_long(in, context);
  if (m < 1) throw IoError(context + ": bad size " + std::to_string(m));
  const std::string kind = detail_ser::read_token(in, context);
  const std::string params = detail_ser::read_token(in, context);
  const KernelSpec spec = KernelSpec::parse(kind, params);
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) ids.push_back(detail_ser::read_token(in, context));
  Eigen::MatrixXd entries = detail_ser::read_matrix(in, m, m, context);
  detail_ser::verify_exact_symmetry(entries, context);
  return GramMatrix(std::move(entries), std::move(ids), spec);
}

inline void write_gram_file(const GramMatrix& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  write_gram(g, out);
}

inline GramMatrix read_gram_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_gram(in, path.string());
}

namespace detail_ser {

struct ModelParts {
  const std::vector<SpdMatrix>* points;
  const std::vector<std::string>* ids;
  const std::vector<int>* point_class;
  const std::vector<std::string>* classes;
  KernelSpec kernel;
  bool has_kernel = false;
  HyperParams hyper;
};

inline ModelParts model_parts(const TrainedModel& model) {
  ModelParts p;
  if (const auto* nn = std::get_if<NnState>(&model.state)) {
    p = ModelParts{&nn->points, &nn->ids, &nn->point_class, &nn->classes, {}, false, {}};
  } else if (const auto* cdl = std::get_if<CdlState>(&model.state)) {
    p = ModelParts{&cdl->points, &cdl->ids, &cdl->point_class, &cdl->classes,
                   cdl->kernel,  true,      {}};
    p.hyper.lda_ridge_scale = cdl->ridge_scale;
  } else {
    const auto& sr = std::get<LogeksrState>(model.state);
    p = ModelParts{&sr.points, &sr.ids, &sr.point_class, &sr.classes, sr.kernel, true, {}};
    p.hyper.sparsity = sr.sparsity;
  }
  return p;
}

}  // namespace detail_ser

// Writes the model's training inputs; read_model re-runs the trainer on
// them, which is deterministic and therefore reproduces predictions exactly.
inline void write_model(const TrainedModel& model, std::ostream& out) {
  const detail_ser::ModelParts p = detail_ser::model_parts(model);
  out << "SPDMODEL v1 " << variant_token(model.variant) << '\n';
  if (p.has_kernel) {
    out << "kernel " << p.kernel.kind_token() << ' ' << p.kernel.params_token() << '\n';
  } else {
    out << "kernel none -\n";
  }
  out << "hyper " << detail_ser::format_value(p.hyper.lda_ridge_scale) << ' '
      << p.hyper.sparsity << '\n';
  out << "points " << p.points->size() << ' ' << p.points->front().dim() << '\n';
  for (std::size_t i = 0; i < p.points->size(); ++i) {
    const std::string& id = (*p.ids)[i];
    const std::string& label = (*p.classes)[static_cast<std::size_t>((*p.point_class)[i])];
    detail_ser::check_token(id, "model point id");
    detail_ser::check_token(label, "model point label");
    out << id << ' ' << label << '\n';
    detail_ser::write_matrix(out, (*p.points)[i].mat());
  }
  if (!out) throw IoError("write_model: write failed");
}

inline TrainedModel read_model(std::istream& in, const std::string& context = "SPDMODEL") {
  detail_ser::expect_token(in, "SPDMODEL", context);
  detail_ser::expect_token(in, "v1", context);
  const ClassifierVariant variant = parse_variant(detail_ser::read_token(in, context));

  detail_ser::expect_token(in, "kernel", context);
  const std::string kind = detail_ser::read_token(in, context);
  const std::string params = detail_ser::read_token(in, context);
  std::optional<KernelSpec> spec;
  if (kind != "none") spec = KernelSpec::parse(kind, params);

  detail_ser::expect_token(in, "hyper", context);
  HyperParams hyper;
  hyper.lda_ridge_scale = detail_ser::read_value(in, context);
  hyper.sparsity = static_cast<int>(detail_ser::read_long(in, context));

  detail_ser::expect_token(in, "points", context);
  const long m = detail_ser::read_long(in, context);
  const long dim = detail_ser::read_long(in, context);
  if (m < 1 || dim < 1) throw IoError(context + ": bad points header");
  LabeledDescriptors data;
  for (long i = 0; i < m; ++i) {
    data.ids.push_back(detail_ser::read_token(in, context));
    data.labels.push_back(detail_ser::read_token(in, context));
    const Eigen::MatrixXd mat = detail_ser::read_matrix(in, dim, dim, context);
    detail_ser::verify_exact_symmetry(mat, context);
    data.points.emplace_back(SymMatrix(mat));
  }
  return train(variant, data, spec, hyper);
}

inline void write_model_file(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  write_model(model, out);
}

inline TrainedModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_model(in, path.string());
}

}  // namespace spdkit

#endif  // SPDKIT_SERIALIZATION_HPP_
