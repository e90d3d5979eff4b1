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
// spdkit command-line tool:
//   spdkit extract  --root DIR --grid G --out DIR      write descriptors
//   spdkit bench    --root DIR --grids 0,6 ... --out DIR  run experiments
//   spdkit synth    --classes N ... --out DIR          synthetic dataset

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spdkit/spdkit.hpp"

namespace {

const std::vector<int> kGridMenu{0, 2, 3, 4, 6, 8, 12};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int parse_grid(const std::string& tok) {
  int g = 0;
  std::size_t pos = 0;
  try {
    g = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != tok.size() ||
      std::find(kGridMenu.begin(), kGridMenu.end(), g) == kGridMenu.end()) {
    throw spdkit::Error("grid '" + tok + "' not in {0,2,3,4,6,8,12}");
  }
  return g;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw spdkit::IoError("cannot create " + path.string());
  out << text;
  if (!out) throw spdkit::IoError("write failed for " + path.string());
}

int run_extract(const std::string& root, int grid, const std::string& out_dir, int size) {
  const spdkit::DatasetManifest manifest = spdkit::scan_dataset(root);
  spdkit::DescriptorConfig cfg;
  cfg.grid = grid;
  std::filesystem::create_directories(out_dir);
  std::size_t written = 0;
  for (const std::string& cls : manifest.classes) {
    std::filesystem::create_directories(std::filesystem::path(out_dir) / cls);
    for (const spdkit::SetEntry& entry : manifest.sets_per_class.at(cls)) {
      const spdkit::ImageSet set =
          spdkit::load_image_set(entry.images, size, size, cls + "/" + entry.set_name, cls);
      const spdkit::SpdMatrix desc = spdkit::extract_descriptor(set, cfg);
      const std::filesystem::path path =
          std::filesystem::path(out_dir) / cls / (entry.set_name + ".spddesc");
      spdkit::write_descriptor_file(desc, set.set_id(), set.label(), path);
      ++written;
    }
  }
  std::cout << "extract: root=" << root << " grid=" << grid << " size=" << size << "x" << size
            << " descriptors=" << written << " out=" << out_dir << "\n";
  return 0;
}

int run_bench(const std::string& root, const std::string& grids, const std::string& classifiers,
              int train_per_class, int folds, std::uint64_t seed, const std::string& format,
              const std::string& out_dir, int size, int sparsity) {
  spdkit::ExperimentConfig cfg;
  cfg.root = root;
  cfg.grids.clear();
  for (const std::string& tok : split_commas(grids)) cfg.grids.push_back(parse_grid(tok));
  cfg.classifiers.clear();
  for (const std::string& tok : split_commas(classifiers)) {
    cfg.classifiers.push_back(spdkit::parse_variant(tok));
  }
  cfg.train_per_class = train_per_class;
  cfg.folds = folds;
  cfg.seed = seed;
  cfg.target_h = size;
  cfg.target_w = size;
  cfg.hyper.sparsity = sparsity;

  spdkit::ExperimentReport report = spdkit::run_experiment(cfg);
  report.metadata.emplace_back("format", format);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path report_path =
      std::filesystem::path(out_dir) / (format == "csv" ? "report.csv" : "report.md");
  write_text_file(report_path, spdkit::render_report(report, format));

  // Re-derive the split plan (deterministic in the seed) for the audit file.
  const spdkit::DatasetManifest manifest = spdkit::scan_dataset(cfg.root);
  const spdkit::SplitPlan plan =
      spdkit::make_splits(manifest, cfg.train_per_class, cfg.folds, cfg.seed);
  const std::filesystem::path splits_path = std::filesystem::path(out_dir) / "splits.csv";
  spdkit::write_splits_file(plan, splits_path);

  std::cout << "bench: wrote " << report_path.string() << "\n";
  std::cout << "bench: wrote " << splits_path.string() << "\n";
  for (const spdkit::CellResult& cell : report.cells) {
    if (cell.failed) {
      std::cout << "bench: cell " << spdkit::descriptor_name(cell.grid) << "/"
                << spdkit::variant_token(cell.classifier) << " failed: " << cell.error << "\n";
    }
  }
  return 0;
}

int run_synth(int classes, int sets_per_class, int images_per_set, int size, std::uint64_t seed,
              const std::string& out_dir) {
  spdkit::SynthConfig cfg;
  cfg.classes = classes;
  cfg.sets_per_class = sets_per_class;
  cfg.images_per_set = images_per_set;
  cfg.size = size;
  cfg.seed = seed;
  spdkit::generate_synth_dataset(cfg, out_dir);
  std::cout << "synth: classes=" << classes << " sets-per-class=" << sets_per_class
            << " images-per-set=" << images_per_set << " size=" << size << "x" << size
            << " seed=" << seed << " out=" << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spdkit: SPD-manifold descriptors, kernels, and classifier benchmarks"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract one descriptor per image set");
  std::string ex_root, ex_out;
  int ex_grid = 0;
  int ex_size = 24;
  extract->add_option("--root", ex_root, "Dataset root (root/<class>/<set>/*.pgm)")->required();
  extract->add_option("--grid", ex_grid, "Block grid: 0 (whole-image) or one of 2,3,4,6,8,12")
      ->check(CLI::IsMember(kGridMenu))
      ->required();
  extract->add_option("--out", ex_out, "Output directory")->required();
  extract->add_option("--size", ex_size, "Target image side length")->default_val(24);

  // bench
  auto* bench = app.add_subcommand("bench", "Run classifier/descriptor benchmark tables");
  std::string b_root, b_out;
  std::string b_grids = "0,2,3,4,6,8,12";
  std::string b_classifiers = "nn-airm,nn-loged,cdl,logeksr";
  int b_train = 2, b_folds = 10, b_size = 24, b_sparsity = 0;
  std::uint64_t b_seed = 0;
  std::string b_format = "csv";
  bench->add_option("--root", b_root, "Dataset root")->required();
  bench->add_option("--grids", b_grids, "Comma-separated grids (0 = whole-image baseline)");
  bench->add_option("--classifiers", b_classifiers, "Comma-separated classifier names");
  bench->add_option("--train-per-class", b_train, "Training sets per class")->default_val(2);
  bench->add_option("--folds", b_folds, "Number of random split repetitions")->default_val(10);
  bench->add_option("--seed", b_seed, "Split-plan seed")->default_val(0);
  bench->add_option("--format", b_format, "Report format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  bench->add_option("--out", b_out, "Output directory")->required();
  bench->add_option("--size", b_size, "Target image side length")->default_val(24);
  bench->add_option("--sparsity", b_sparsity, "Sparse-code budget (0 = auto)")->default_val(0);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic PGM image-set dataset");
  int s_classes = 3, s_sets = 5, s_images = 20, s_size = 24;
  std::uint64_t s_seed = 42;
  std::string s_out;
  synth->add_option("--classes", s_classes, "Number of classes")->default_val(3);
  synth->add_option("--sets-per-class", s_sets, "Image sets per class")->default_val(5);
  synth->add_option("--images-per-set", s_images, "Images per set")->default_val(20);
  synth->add_option("--size", s_size, "Image side length")->default_val(24);
  synth->add_option("--seed", s_seed, "Generator seed")->default_val(42);
  synth->add_option("--out", s_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return run_extract(ex_root, ex_grid, ex_out, ex_size);
    if (bench->parsed()) {
      return run_bench(b_root, b_grids, b_classifiers, b_train, b_folds, b_seed, b_format, b_out,
                       b_size, b_sparsity);
    }
    if (synth->parsed()) return run_synth(s_classes, s_sets, s_images, s_size, s_seed, s_out);
  } catch (const std::exception& e) {
    std::cerr << "spdkit: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
