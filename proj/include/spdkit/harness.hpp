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

#ifndef SPDKIT_HARNESS_HPP_
#define SPDKIT_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spdkit/classifiers.hpp"
#include "spdkit/descriptors.hpp"
#include "spdkit/error.hpp"
#include "spdkit/ingestion.hpp"
#include "spdkit/kernels.hpp"

namespace spdkit {

struct ExperimentConfig {
  std::filesystem::path root;
  std::vector<int> grids{0};
  std::vector<ClassifierVariant> classifiers{
      ClassifierVariant::nn_airm, ClassifierVariant::nn_loged, ClassifierVariant::cdl_lda,
      ClassifierVariant::logeksr};
  KernelSpec cdl_kernel = KernelSpec::linear();
  KernelSpec logeksr_kernel = KernelSpec::poly({1.0, 1.0});
  HyperParams hyper;
  DescriptorConfig descriptor;  // grid field is overridden per descriptor row
  int train_per_class = 2;
  int folds = 10;
  std::uint64_t seed = 0;
  Eigen::Index target_h = 24;
  Eigen::Index target_w = 24;

  void validate() const {
    if (grids.empty()) throw Error("experiment: no descriptor grids selected");
    if (classifiers.empty()) throw Error("experiment: no classifiers selected");
    for (int g : grids) {
      if (g != 0 && g < 2) throw Error("experiment: grid must be 0 or >= 2, got " + std::to_string(g));
    }
    if (folds < 1) throw Error("experiment: folds must be >= 1");
    if (train_per_class < 1) throw Error("experiment: train_per_class must be >= 1");
    if (target_h < 2 || target_w < 2) throw Error("experiment: target size too small");
  }
};

// One (descriptor, classifier) table cell aggregated over folds.
struct CellResult {
  int grid = 0;
  ClassifierVariant classifier = ClassifierVariant::nn_airm;
  std::vector<double> fold_accuracies;  // percent, one per fold
  double mean = 0.0;
  double stddev = 0.0;
  double classify_ms = 0.0;  // prediction wall time summed over folds
  bool failed = false;
  std::string error;
};

struct ExtractionStat {
  int grid = 0;
  double seconds = 0.0;
  long count = 0;  // descriptor computations performed (one per set)
};

struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ExtractionStat> extraction;  // baseline first, then grids ascending
  std::vector<CellResult> cells;           // descriptor-major, classifiers in fixed order
  int folds = 0;
};

inline double mean_of(const std::vector<double>& values) {
  if (values.empty()) throw Error("mean_of: empty list");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// Population standard deviation (divisor N).
inline double std_dev(const std::vector<double>& values) {
  if (values.empty()) throw Error("std_dev: empty list");
  const double m = mean_of(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size()));
}

inline std::string descriptor_name(int grid) {
  return grid == 0 ? "SPD" : "CSPD " + std::to_string(grid) + "x" + std::to_string(grid);
}

inline std::string classifier_display_name(ClassifierVariant v) {
  switch (v) {
    case ClassifierVariant::nn_airm: return "NN-AIRM";
    case ClassifierVariant::nn_loged: return "NN-LogED";
    case ClassifierVariant::cdl_lda: return "CDL";
    case ClassifierVariant::logeksr: return "LogEKSR";
  }
  return "?";
}

namespace detail_harness {

// Runs fn(0..n-1) on up to hardware_concurrency() threads. Each index is
// processed exactly once; exceptions from fn propagate to the caller.
template <typename Fn>
inline void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

inline std::vector<int> ordered_grids(std::vector<int> grids) {
  std::sort(grids.begin(), grids.end());
  grids.erase(std::unique(grids.begin(), grids.end()), grids.end());
  return grids;  // ascending puts the 0 baseline first
}

inline std::vector<ClassifierVariant> ordered_classifiers(
    const std::vector<ClassifierVariant>& requested) {
  static constexpr ClassifierVariant canonical[] = {
      ClassifierVariant::nn_airm, ClassifierVariant::nn_loged, ClassifierVariant::cdl_lda,
      ClassifierVariant::logeksr};
  std::vector<ClassifierVariant> out;
  for (ClassifierVariant v : canonical) {
    if (std::find(requested.begin(), requested.end(), v) != requested.end()) out.push_back(v);
  }
  return out;
}

struct FoldOutcome {
  bool ok = false;
  double accuracy = 0.0;
  double classify_ms = 0.0;
  std::string error;
};

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail_harness

// Core experiment loop over preloaded image sets and an explicit split plan.
// Set ids must follow the "<label>/<set_name>" convention used by the loader
// so plan entries can be matched to sets.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       const std::vector<ImageSet>& sets, const SplitPlan& plan) {
  cfg.validate();
  if (sets.empty()) throw Error("experiment: no image sets");
  if (static_cast<int>(plan.assignments.size()) < plan.folds) {
    throw Error("experiment: split plan is missing folds");
  }

  std::map<std::string, std::size_t> index_by_id;
  for (std::size_t i = 0; i < sets.size(); ++i) index_by_id.emplace(sets[i].set_id(), i);

  const std::vector<int> grids = detail_harness::ordered_grids(cfg.grids);
  const std::vector<ClassifierVariant> classifiers =
      detail_harness::ordered_classifiers(cfg.classifiers);

  ExperimentReport report;
  report.folds = plan.folds;

  for (int grid : grids) {
    DescriptorConfig desc_cfg = cfg.descriptor;
    desc_cfg.grid = grid;

    // Extraction stage: every set's descriptor exactly once per grid.
    std::vector<std::optional<SpdMatrix>> slots(sets.size());
    std::atomic<long> extract_count{0};
    const auto t0 = std::chrono::steady_clock::now();
    detail_harness::parallel_for(sets.size(), [&](std::size_t i) {
      slots[i] = extract_descriptor(sets[i], desc_cfg);
      extract_count.fetch_add(1);
    });
    ExtractionStat stat;
    stat.grid = grid;
    stat.seconds = detail_harness::elapsed_ms(t0) / 1000.0;
    stat.count = extract_count.load();
    report.extraction.push_back(stat);

    std::vector<SpdMatrix> descs;
    descs.reserve(sets.size());
    for (auto& s : slots) descs.push_back(std::move(*s));

    auto descriptor_at = [&](const std::string& cls, const std::string& set_name) -> std::size_t {
      const std::string id = cls + "/" + set_name;
      const auto it = index_by_id.find(id);
      if (it == index_by_id.end()) throw Error("split references unknown set '" + id + "'");
      return it->second;
    };

    for (ClassifierVariant variant : classifiers) {
      std::optional<KernelSpec> spec;
      if (variant == ClassifierVariant::cdl_lda) spec = cfg.cdl_kernel;
      if (variant == ClassifierVariant::logeksr) spec = cfg.logeksr_kernel;

      std::vector<detail_harness::FoldOutcome> outcomes(
          static_cast<std::size_t>(plan.folds));
      detail_harness::parallel_for(static_cast<std::size_t>(plan.folds), [&](std::size_t f) {
        detail_harness::FoldOutcome& out = outcomes[f];
        try {
          LabeledDescriptors train_data;
          std::vector<std::size_t> test_idx;
          for (const auto& [cls, split] : plan.assignments[f]) {
            for (const std::string& name : split.train) {
              const std::size_t i = descriptor_at(cls, name);
              train_data.points.push_back(descs[i]);
              train_data.labels.push_back(sets[i].label());
              train_data.ids.push_back(sets[i].set_id());
            }
            for (const std::string& name : split.test) test_idx.push_back(descriptor_at(cls, name));
          }
          if (test_idx.empty()) throw Error("fold " + std::to_string(f) + " has no test sets");

          const TrainedModel model = train(variant, train_data, spec, cfg.hyper);
          long correct = 0;
          const auto tp = std::chrono::steady_clock::now();
          for (std::size_t i : test_idx) {
            if (predict(model, descs[i]) == sets[i].label()) ++correct;
          }
          out.classify_ms = detail_harness::elapsed_ms(tp);
          out.accuracy = 100.0 * static_cast<double>(correct) /
                         static_cast<double>(test_idx.size());
          out.ok = true;
        } catch (const std::exception& e) {
          out.error = e.what();
        }
      });

      CellResult cell;
      cell.grid = grid;
      cell.classifier = variant;
      for (const auto& out : outcomes) {
        if (!out.ok) {
          cell.failed = true;
          if (cell.error.empty()) cell.error = out.error;
          continue;
        }
        cell.fold_accuracies.push_back(out.accuracy);
        cell.classify_ms += out.classify_ms;
      }
      if (!cell.failed) {
        cell.mean = mean_of(cell.fold_accuracies);
        cell.stddev = std_dev(cell.fold_accuracies);
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

namespace detail_harness {

inline std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

inline void echo_config(const ExperimentConfig& cfg, ExperimentReport* report,
                        std::size_t n_classes, std::size_t n_sets) {
  auto& md = report->metadata;
  md.emplace_back("tool", "spdkit bench");
  md.emplace_back("root", cfg.root.string());
  {
    std::string g;
    for (int v : ordered_grids(cfg.grids)) g += (g.empty() ? "" : ",") + std::to_string(v);
    md.emplace_back("grids", g);
  }
  {
    std::string c;
    for (ClassifierVariant v : ordered_classifiers(cfg.classifiers)) {
      c += (c.empty() ? "" : ",") + variant_token(v);
    }
    md.emplace_back("classifiers", c);
  }
  md.emplace_back("train_per_class", std::to_string(cfg.train_per_class));
  md.emplace_back("folds", std::to_string(cfg.folds));
  md.emplace_back("seed", std::to_string(cfg.seed));
  md.emplace_back("image_size",
                  std::to_string(cfg.target_h) + "x" + std::to_string(cfg.target_w));
  md.emplace_back("lambda", fmt("%.17g", cfg.descriptor.lambda));
  md.emplace_back("abs_floor", fmt("%.17g", cfg.descriptor.abs_floor));
  md.emplace_back("cdl_kernel", cfg.cdl_kernel.describe());
  md.emplace_back("logeksr_kernel", cfg.logeksr_kernel.describe());
  md.emplace_back("sparsity",
                  cfg.hyper.sparsity > 0 ? std::to_string(cfg.hyper.sparsity) : "auto");
  md.emplace_back("lda_ridge_scale", fmt("%.17g", cfg.hyper.lda_ridge_scale));
  md.emplace_back("classes", std::to_string(n_classes));
  md.emplace_back("sets", std::to_string(n_sets));
  md.emplace_back("std_dev", "population");
  md.emplace_back("timing", "wall-clock per stage; stages may run in parallel");
}

}  // namespace detail_harness

// Full pipeline: scan the dataset directory, load and resize every set,
// derive the split plan from the config seed, and run the experiment.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const DatasetManifest manifest = scan_dataset(cfg.root);
  const SplitPlan plan = make_splits(manifest, cfg.train_per_class, cfg.folds, cfg.seed);

  struct Job {
    const SetEntry* entry;
    const std::string* cls;
  };
  std::vector<Job> jobs;
  for (const std::string& cls : manifest.classes) {
    for (const SetEntry& e : manifest.sets_per_class.at(cls)) jobs.push_back(Job{&e, &cls});
  }
  std::vector<std::optional<ImageSet>> slots(jobs.size());
  detail_harness::parallel_for(jobs.size(), [&](std::size_t i) {
    slots[i] = load_image_set(jobs[i].entry->images, cfg.target_h, cfg.target_w,
                              *jobs[i].cls + "/" + jobs[i].entry->set_name, *jobs[i].cls);
  });
  std::vector<ImageSet> sets;
  sets.reserve(slots.size());
  for (auto& s : slots) sets.push_back(std::move(*s));

  ExperimentReport report = run_experiment(cfg, sets, plan);
  detail_harness::echo_config(cfg, &report, manifest.classes.size(), sets.size());
  return report;
}

// CSV rendering: `# key=value` metadata comments, a header row, then one row
// per (descriptor, classifier) cell. The two timing columns come last so a
// byte comparison of reproducibility can strip them; failed cells carry ERR
// in the statistics columns. Trailing `# error:` comments give details.
inline std::string render_report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "# spdkit bench report\n";
  for (const auto& [k, v] : report.metadata) out << "# " << k << "=" << v << "\n";
  out << "descriptor,classifier,mean,std";
  for (int f = 0; f < report.folds; ++f) out << ",fold" << f;
  out << ",extract_seconds,classify_ms\n";
  for (const CellResult& cell : report.cells) {
    double extract_seconds = 0.0;
    for (const ExtractionStat& s : report.extraction) {
      if (s.grid == cell.grid) extract_seconds = s.seconds;
    }
    out << descriptor_name(cell.grid) << "," << variant_token(cell.classifier);
    if (cell.failed) {
      out << ",ERR,ERR";
      for (int f = 0; f < report.folds; ++f) out << ",";
    } else {
      out << "," << detail_harness::fmt("%.4f", cell.mean) << ","
          << detail_harness::fmt("%.4f", cell.stddev);
      for (double a : cell.fold_accuracies) out << "," << detail_harness::fmt("%.4f", a);
    }
    out << "," << detail_harness::fmt("%.6f", extract_seconds) << ","
        << detail_harness::fmt("%.3f", cell.classify_ms) << "\n";
  }
  for (const CellResult& cell : report.cells) {
    if (cell.failed) {
      out << "# error: " << descriptor_name(cell.grid) << "/" << variant_token(cell.classifier)
          << ": " << cell.error << "\n";
    }
  }
  return out.str();
}

// Markdown rendering: an accuracy table in the fixed classifier column order
// with descriptor rows (baseline first, grids ascending), then the timing
// tables last so everything above them is reproducible byte for byte.
inline std::string render_report_markdown(const ExperimentReport& report) {
  std::ostringstream out;
  out << "# spdkit bench report\n\n";
  for (const auto& [k, v] : report.metadata) out << "- " << k << ": " << v << "\n";
  if (!report.metadata.empty()) out << "\n";

  std::vector<int> grids;
  std::vector<ClassifierVariant> classifiers;
  for (const CellResult& cell : report.cells) {
    if (std::find(grids.begin(), grids.end(), cell.grid) == grids.end()) grids.push_back(cell.grid);
    if (std::find(classifiers.begin(), classifiers.end(), cell.classifier) == classifiers.end()) {
      classifiers.push_back(cell.classifier);
    }
  }
  auto cell_at = [&](int grid, ClassifierVariant v) -> const CellResult* {
    for (const CellResult& cell : report.cells) {
      if (cell.grid == grid && cell.classifier == v) return &cell;
    }
    return nullptr;
  };

  out << "## Accuracy (%, mean ± std over " << report.folds << " folds)\n\n";
  out << "| Descriptor |";
  for (ClassifierVariant v : classifiers) out << " " << classifier_display_name(v) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < classifiers.size(); ++i) out << "---|";
  out << "\n";
  for (int grid : grids) {
    out << "| " << descriptor_name(grid) << " |";
    for (ClassifierVariant v : classifiers) {
      const CellResult* cell = cell_at(grid, v);
      if (cell == nullptr) {
        out << " - |";
      } else if (cell->failed) {
        out << " ERR |";
      } else {
        out << " " << detail_harness::fmt("%.2f", cell->mean) << " ± "
            << detail_harness::fmt("%.2f", cell->stddev) << " |";
      }
    }
    out << "\n";
  }

  bool any_failed = false;
  for (const CellResult& cell : report.cells) any_failed = any_failed || cell.failed;
  if (any_failed) {
    out << "\n## Errors\n\n";
    for (const CellResult& cell : report.cells) {
      if (cell.failed) {
        out << "- " << descriptor_name(cell.grid) << " / "
            << classifier_display_name(cell.classifier) << ": " << cell.error << "\n";
      }
    }
  }

  out << "\n## Descriptor extraction time\n\n";
  out << "| Descriptor | Seconds | Descriptors computed |\n|---|---|---|\n";
  for (const ExtractionStat& s : report.extraction) {
    out << "| " << descriptor_name(s.grid) << " | " << detail_harness::fmt("%.6f", s.seconds)
        << " | " << s.count << " |\n";
  }

  out << "\n## Classification time (ms, prediction only, summed over folds)\n\n";
  out << "| Descriptor |";
  for (ClassifierVariant v : classifiers) out << " " << classifier_display_name(v) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < classifiers.size(); ++i) out << "---|";
  out << "\n";
  for (int grid : grids) {
    out << "| " << descriptor_name(grid) << " |";
    for (ClassifierVariant v : classifiers) {
      const CellResult* cell = cell_at(grid, v);
      if (cell == nullptr) {
        out << " - |";
      } else {
        out << " " << detail_harness::fmt("%.3f", cell->classify_ms) << " |";
      }
    }
    out << "\n";
  }
  return out.str();
}

inline std::string render_report(const ExperimentReport& report, const std::string& format) {
  if (format == "csv") return render_report_csv(report);
  if (format == "markdown") return render_report_markdown(report);
  throw Error("render_report: unknown format '" + format + "' (expected csv or markdown)");
}

}  // namespace spdkit

#endif  // SPDKIT_HARNESS_HPP_
