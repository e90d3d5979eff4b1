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

#ifndef SPDKIT_INGESTION_HPP_
#define SPDKIT_INGESTION_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spdkit/descriptors.hpp"
#include "spdkit/error.hpp"
#include "spdkit/image.hpp"
#include "spdkit/rng.hpp"

namespace spdkit {

// One image-set directory: its name and the image files inside, sorted.
struct SetEntry {
  std::string set_name;
  std::vector<std::filesystem::path> images;
};

// Result of scanning a `root/<class>/<set>/*.pgm` tree. Classes and sets are
// listed lexicographically so scans are deterministic across platforms.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<std::string> classes;
  std::map<std::string, std::vector<SetEntry>> sets_per_class;

  std::size_t total_sets() const {
    std::size_t n = 0;
    for (const auto& [cls, sets] : sets_per_class) n += sets.size();
    return n;
  }
  std::size_t min_sets_per_class() const {
    std::size_t n = static_cast<std::size_t>(-1);
    for (const auto& [cls, sets] : sets_per_class) n = std::min(n, sets.size());
    return n;
  }
};

namespace detail_ingest {

// Directory names end up in CSV/space-separated text outputs, so restrict
// them to a safe charset up front.
inline void check_name(const std::string& name, const std::string& what) {
  if (name.empty()) throw IoError(what + ": empty name");
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) {
      throw IoError(what + " '" + name + "': names may only contain [A-Za-z0-9._-]");
    }
  }
}

inline bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

inline std::vector<std::filesystem::path> sorted_subdirs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail_ingest

inline DatasetManifest scan_dataset(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw IoError("dataset root '" + root.string() + "' is not a directory");
  }
  DatasetManifest m;
  m.root = root;
  for (const auto& class_dir : detail_ingest::sorted_subdirs(root)) {
    const std::string class_name = class_dir.filename().string();
    detail_ingest::check_name(class_name, "class directory");
    std::vector<SetEntry> sets;
    for (const auto& set_dir : detail_ingest::sorted_subdirs(class_dir)) {
      SetEntry entry;
      entry.set_name = set_dir.filename().string();
      detail_ingest::check_name(entry.set_name, "set directory");
      for (const auto& f : std::filesystem::directory_iterator(set_dir)) {
        if (f.is_regular_file() && detail_ingest::is_image_file(f.path())) {
          entry.images.push_back(f.path());
        }
      }
      std::sort(entry.images.begin(), entry.images.end());
      if (entry.images.empty()) {
        throw IoError("set directory '" + set_dir.string() + "' contains no images");
      }
      sets.push_back(std::move(entry));
    }
    if (sets.empty()) {
      throw IoError("class directory '" + class_dir.string() + "' contains no set directories");
    }
    m.classes.push_back(class_name);
    m.sets_per_class.emplace(class_name, std::move(sets));
  }
  if (m.classes.empty()) {
    throw IoError("dataset root '" + root.string() + "' lists zero classes");
  }
  return m;
}

// Decodes each file, converts to grayscale in [0,1], and resizes to the
// target. The set id is "<label>/<set_name>" by convention at call sites.
inline ImageSet load_image_set(const std::vector<std::filesystem::path>& paths,
                               Eigen::Index target_h, Eigen::Index target_w,
                               const std::string& set_id, const std::string& label) {
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const auto& p : paths) {
    images.push_back(bilinear_resize(decode_pnm_file(p), target_h, target_w));
  }
  return ImageSet(set_id, label, std::move(images));
}

inline std::vector<ImageSet> load_all_sets(const DatasetManifest& m, Eigen::Index target_h,
                                           Eigen::Index target_w) {
  std::vector<ImageSet> out;
  for (const std::string& cls : m.classes) {
    for (const SetEntry& entry : m.sets_per_class.at(cls)) {
      out.push_back(load_image_set(entry.images, target_h, target_w,
                                   cls + "/" + entry.set_name, cls));
    }
  }
  return out;
}

// Per-fold, per-class train/test assignment of set names.
struct SplitPlan {
  struct ClassSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
  };

  std::uint64_t seed = 0;
  int folds = 0;
  int train_per_class = 0;
  // assignments[fold][class] — std::map keeps class iteration lexicographic.
  std::vector<std::map<std::string, ClassSplit>> assignments;
};

// Each fold independently shuffles every class's set list (seeded generator,
// fixed iteration order) and marks the first train_per_class names as train.
inline SplitPlan make_splits(const DatasetManifest& m, int train_per_class, int folds,
                             std::uint64_t seed) {
  if (folds < 1) throw Error("make_splits: folds must be >= 1, got " + std::to_string(folds));
  if (train_per_class < 1) {
    throw Error("make_splits: train_per_class must be >= 1, got " +
                std::to_string(train_per_class));
  }
  if (static_cast<std::size_t>(train_per_class) >= m.min_sets_per_class()) {
    throw Error("make_splits: train_per_class " + std::to_string(train_per_class) +
                " leaves no test sets (smallest class has " +
                std::to_string(m.min_sets_per_class()) + " sets)");
  }
  SplitPlan plan;
  plan.seed = seed;
  plan.folds = folds;
  plan.train_per_class = train_per_class;
  Xoshiro256ss rng(seed);
  for (int f = 0; f < folds; ++f) {
    std::map<std::string, SplitPlan::ClassSplit> fold;
    for (const std::string& cls : m.classes) {
      std::vector<std::string> names;
      for (const SetEntry& e : m.sets_per_class.at(cls)) names.push_back(e.set_name);
      deterministic_shuffle(names, rng);
      SplitPlan::ClassSplit split;
      split.train.assign(names.begin(), names.begin() + train_per_class);
      split.test.assign(names.begin() + train_per_class, names.end());
      std::sort(split.train.begin(), split.train.end());
      std::sort(split.test.begin(), split.test.end());
      fold.emplace(cls, std::move(split));
    }
    plan.assignments.push_back(std::move(fold));
  }
  return plan;
}

// Line-oriented audit format: a comment header with the parameters, then one
// `fold,class,set_id,role` line per assignment.
inline void write_splits(const SplitPlan& plan, std::ostream& out) {
  out << "# seed=" << plan.seed << " folds=" << plan.folds
      << " train_per_class=" << plan.train_per_class << "\n";
  out << "fold,class,set_id,role\n";
  for (int f = 0; f < plan.folds; ++f) {
    for (const auto& [cls, split] : plan.assignments[static_cast<std::size_t>(f)]) {
      for (const std::string& s : split.train) out << f << "," << cls << "," << s << ",train\n";
      for (const std::string& s : split.test) out << f << "," << cls << "," << s << ",test\n";
    }
  }
  if (!out) throw IoError("write_splits: write failed");
}

inline void write_splits_file(const SplitPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create splits file " + path.string());
  write_splits(plan, out);
}

inline SplitPlan read_splits(std::istream& in) {
  SplitPlan plan;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# seed=", 0) != 0) {
    throw IoError("splits file: missing '# seed=...' header");
  }
  {
    std::stringstream ss(line.substr(2));
    std::string kv;
    while (ss >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw IoError("splits file: bad header token '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      try {
        if (key == "seed") plan.seed = std::stoull(val);
        else if (key == "folds") plan.folds = std::stoi(val);
        else if (key == "train_per_class") plan.train_per_class = std::stoi(val);
        else throw IoError("splits file: unknown header key '" + key + "'");
      } catch (const IoError&) {
        throw;
      } catch (const std::exception&) {
        throw IoError("splits file: bad header value '" + kv + "'");
      }
    }
  }
  if (!std::getline(in, line) || line != "fold,class,set_id,role") {
    throw IoError("splits file: missing 'fold,class,set_id,role' column header");
  }
  plan.assignments.assign(static_cast<std::size_t>(std::max(plan.folds, 0)), {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string fold_s, cls, set_id, role;
    if (!std::getline(ss, fold_s, ',') || !std::getline(ss, cls, ',') ||
        !std::getline(ss, set_id, ',') || !std::getline(ss, role)) {
      throw IoError("splits file: bad line '" + line + "'");
    }
    int f = 0;
    try {
      f = std::stoi(fold_s);
    } catch (const std::exception&) {
      throw IoError("splits file: bad fold '" + fold_s + "'");
    }
    if (f < 0 || f >= plan.folds) throw IoError("splits file: fold " + fold_s + " out of range");
    auto& split = plan.assignments[static_cast<std::size_t>(f)][cls];
    if (role == "train") split.train.push_back(set_id);
    else if (role == "test") split.test.push_back(set_id);
    else throw IoError("splits file: bad role '" + role + "'");
  }
  return plan;
}

inline SplitPlan read_splits_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open splits file " + path.string());
  return read_splits(in);
}

}  // namespace spdkit

#endif  // SPDKIT_INGESTION_HPP_
