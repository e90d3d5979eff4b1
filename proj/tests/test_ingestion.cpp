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

#include <unistd.h>

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spdkit/image.hpp"
#include "spdkit/ingestion.hpp"
#include "spdkit/rng.hpp"

using namespace spdkit;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("spdkit_test_" + tag + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Image decode_str(const std::string& s) {
  std::istringstream in(s, std::ios::binary);
  return decode_pnm(in);
}

Image constant_image(Eigen::Index h, Eigen::Index w, double v) {
  Image img(h, w);
  img.pixels.setConstant(v);
  return img;
}

// root/<class>/<set>/imgN.pgm tree filled with constant-value images.
void make_tree(const fs::path& root, const std::vector<std::string>& classes,
               int sets_per_class, int images_per_set) {
  double v = 0.0;
  for (const std::string& cls : classes) {
    for (int s = 0; s < sets_per_class; ++s) {
      const fs::path dir = root / cls / ("set" + std::to_string(s));
      fs::create_directories(dir);
      for (int i = 0; i < images_per_set; ++i) {
        v += 1.0 / 64.0;
        if (v > 1.0) v = 0.0;
        encode_pgm_file(constant_image(6, 6, v), dir / ("img" + std::to_string(i) + ".pgm"));
      }
    }
  }
}

}  // namespace

TEST_CASE("the seed expander matches its published reference outputs") {
  std::uint64_t s = 0;
  CHECK(splitmix64_next(s) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64_next(s) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64_next(s) == 0x06C45D188009454FULL);
}

TEST_CASE("the generator stream is frozen") {
  Xoshiro256ss rng(7);
  CHECK(rng.next() == 12923355070828475994ULL);
  CHECK(rng.next() == 5142052590334782674ULL);
  CHECK(rng.next() == 15488392906492639638ULL);
  CHECK(rng.next() == 18098058644649177664ULL);
}

TEST_CASE("bounded draws stay in range and uniform01 stays in [0,1)") {
  Xoshiro256ss rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.bounded(7) < 7);
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("the shuffle is a frozen permutation of its input") {
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  Xoshiro256ss rng(1);
  deterministic_shuffle(v, rng);
  CHECK(v == std::vector<int>{4, 7, 0, 2, 1, 6, 3, 5});
  // Continuing the same stream gives a different, still valid permutation.
  deterministic_shuffle(v, rng);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("ASCII and binary grayscale decode to identical scaled values") {
  const Image ascii = decode_str("P2\n# a comment\n3 2\n255\n0 128 255\n64 32 16\n");
  REQUIRE(ascii.height() == 2);
  REQUIRE(ascii.width() == 3);
  CHECK(ascii.pixels(0, 0) == 0.0);
  CHECK(ascii.pixels(0, 1) == 128.0 / 255.0);
  CHECK(ascii.pixels(0, 2) == 1.0);
  CHECK(ascii.pixels(1, 0) == 64.0 / 255.0);

  std::string bin = "P5\n3 2\n255\n";
  for (unsigned char c : {0, 128, 255, 64, 32, 16}) bin.push_back(static_cast<char>(c));
  const Image binary = decode_str(bin);
  CHECK(binary.pixels == ascii.pixels);
}

TEST_CASE("sixteen-bit rasters are big-endian and scaled by their maxval") {
  std::string bin = "P5\n1 1\n65535\n";
  bin.push_back(static_cast<char>(0x01));
  bin.push_back(static_cast<char>(0x00));
  const Image img = decode_str(bin);
  CHECK(img.pixels(0, 0) == 256.0 / 65535.0);
}

TEST_CASE("color input reduces to luma") {
  CHECK_THAT(decode_str("P3\n1 1\n255\n255 0 0\n").pixels(0, 0), WithinAbs(0.299, 1e-15));
  CHECK_THAT(decode_str("P3\n1 1\n255\n0 255 0\n").pixels(0, 0), WithinAbs(0.587, 1e-15));
  CHECK_THAT(decode_str("P3\n1 1\n255\n0 0 255\n").pixels(0, 0), WithinAbs(0.114, 1e-15));
  std::string bin = "P6\n1 1\n255\n";
  for (unsigned char c : {255, 0, 0}) bin.push_back(static_cast<char>(c));
  CHECK(decode_str(bin).pixels(0, 0) == decode_str("P3\n1 1\n255\n255 0 0\n").pixels(0, 0));
}

TEST_CASE("malformed image files are rejected") {
  CHECK_THROWS_AS(decode_str("P7\n1 1\n255\n0\n"), IoError);
  CHECK_THROWS_AS(decode_str("P2\n0 0\n255\n"), IoError);
  CHECK_THROWS_AS(decode_str("P2\n1 1\n0\n0\n"), IoError);
  CHECK_THROWS_AS(decode_str("P2\n1 1\n70000\n0\n"), IoError);
  CHECK_THROWS_AS(decode_str("P5\n2 2\n255\n\x10\x20"), IoError);  // short raster
  CHECK_THROWS_AS(decode_str("P2\n2 2\n255\n1 2 3\n"), IoError);   // short raster
  CHECK_THROWS_AS(decode_str(""), IoError);
}

TEST_CASE("eight-bit values survive an encode/decode round trip exactly") {
  Image img(16, 16);
  int k = 0;
  for (Eigen::Index y = 0; y < 16; ++y) {
    for (Eigen::Index x = 0; x < 16; ++x) img.pixels(y, x) = k++ / 255.0;
  }
  std::ostringstream out(std::ios::binary);
  encode_pgm(img, out);
  const Image back = decode_str(out.str());
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("resize averages a checkerboard column pair to one half") {
  const Image img = decode_str("P2\n2 2\n255\n0 255\n0 255\n");
  const Image one = bilinear_resize(img, 1, 1);
  CHECK(one.pixels(0, 0) == 0.5);
}

TEST_CASE("resize at the source size is a bitwise passthrough") {
  Xoshiro256ss rng(81);
  Image img(5, 7);
  for (Eigen::Index y = 0; y < 5; ++y) {
    for (Eigen::Index x = 0; x < 7; ++x) img.pixels(y, x) = rng.uniform01();
  }
  CHECK(bilinear_resize(img, 5, 7).pixels == img.pixels);
}

TEST_CASE("resize keeps constant images constant") {
  const Image small = bilinear_resize(constant_image(48, 48, 0.37), 24, 24);
  REQUIRE(small.height() == 24);
  REQUIRE(small.width() == 24);
  CHECK((small.pixels.array() - 0.37).abs().maxCoeff() < 1e-15);
}

TEST_CASE("resize is affine in the pixel values") {
  Xoshiro256ss rng(82);
  Image img(9, 12);
  for (Eigen::Index y = 0; y < 9; ++y) {
    for (Eigen::Index x = 0; x < 12; ++x) img.pixels(y, x) = rng.uniform01();
  }
  Image scaled(9, 12);
  scaled.pixels = 2.5 * img.pixels.array() - 0.75;
  const Image a = bilinear_resize(img, 5, 4);
  const Image b = bilinear_resize(scaled, 5, 4);
  CHECK((b.pixels - (2.5 * a.pixels.array() - 0.75).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("upscaling interpolates with clamped half-pixel centers") {
  Image img(1, 2);
  img.pixels << 0.0, 1.0;
  const Image up = bilinear_resize(img, 1, 4);
  CHECK(up.pixels(0, 0) == 0.0);
  CHECK(up.pixels(0, 1) == 0.25);
  CHECK(up.pixels(0, 2) == 0.75);
  CHECK(up.pixels(0, 3) == 1.0);
  CHECK_THROWS_AS(bilinear_resize(img, 0, 4), DimensionError);
}

TEST_CASE("scanning a dataset tree is lexicographic and validated") {
  TempDir tmp("scan");
  make_tree(tmp.path, {"pear", "apple"}, 3, 4);
  // A non-image file must be ignored.
  std::ofstream(tmp.path / "apple" / "set0" / "notes.txt") << "hi";

  const DatasetManifest m = scan_dataset(tmp.path);
  CHECK(m.classes == std::vector<std::string>{"apple", "pear"});
  CHECK(m.total_sets() == 6);
  CHECK(m.min_sets_per_class() == 3);
  const std::vector<SetEntry>& sets = m.sets_per_class.at("apple");
  REQUIRE(sets.size() == 3);
  CHECK(sets[0].set_name == "set0");
  CHECK(sets[2].set_name == "set2");
  REQUIRE(sets[0].images.size() == 4);
  CHECK(sets[0].images.front().filename() == "img0.pgm");
  CHECK(std::is_sorted(sets[0].images.begin(), sets[0].images.end()));

  CHECK_THROWS_AS(scan_dataset(tmp.path / "missing"), IoError);

  fs::create_directories(tmp.path / "apple" / "empty_set");
  CHECK_THROWS_AS(scan_dataset(tmp.path), IoError);
  fs::remove_all(tmp.path / "apple" / "empty_set");

  fs::create_directories(tmp.path / "empty_class");
  CHECK_THROWS_AS(scan_dataset(tmp.path), IoError);
  fs::remove_all(tmp.path / "empty_class");

  const fs::path bad = tmp.path / "bad name";
  fs::create_directories(bad / "set0");
  encode_pgm_file(constant_image(2, 2, 0.5), bad / "set0" / "img0.pgm");
  CHECK_THROWS_AS(scan_dataset(tmp.path), IoError);
}

TEST_CASE("loading resizes every image and derives ids from the tree") {
  TempDir tmp("load");
  make_tree(tmp.path, {"a", "b"}, 2, 3);
  const DatasetManifest m = scan_dataset(tmp.path);
  const std::vector<ImageSet> sets = load_all_sets(m, 4, 4);
  REQUIRE(sets.size() == 4);
  CHECK(sets[0].set_id() == "a/set0");
  CHECK(sets[0].label() == "a");
  CHECK(sets[3].set_id() == "b/set1");
  CHECK(sets[3].label() == "b");
  for (const ImageSet& s : sets) {
    CHECK(s.size() == 3);
    CHECK(s.height() == 4);
    CHECK(s.width() == 4);
  }
  // Constant source images stay constant through decode + resize, up to
  // interpolation round-off, at the 8-bit quantized value.
  const Image raw = decode_pnm_file(m.sets_per_class.at("a")[0].images[0]);
  CHECK_THAT(sets[0].images()[0].pixels(1, 2), WithinAbs(raw.pixels(0, 0), 1e-15));
}

TEST_CASE("split plans partition every class deterministically") {
  TempDir tmp("splits");
  make_tree(tmp.path, {"a", "b", "c"}, 5, 2);
  const DatasetManifest m = scan_dataset(tmp.path);

  const SplitPlan p1 = make_splits(m, 2, 4, 99);
  const SplitPlan p2 = make_splits(m, 2, 4, 99);
  const SplitPlan p3 = make_splits(m, 2, 4, 100);
  REQUIRE(p1.assignments.size() == 4);
  bool any_diff = false;
  for (int f = 0; f < 4; ++f) {
    for (const std::string& cls : m.classes) {
      const auto& s1 = p1.assignments[static_cast<std::size_t>(f)].at(cls);
      const auto& s2 = p2.assignments[static_cast<std::size_t>(f)].at(cls);
      CHECK(s1.train == s2.train);
      CHECK(s1.test == s2.test);
      CHECK(s1.train.size() == 2);
      CHECK(s1.test.size() == 3);
      CHECK(std::is_sorted(s1.train.begin(), s1.train.end()));
      // Union of train and test is the full sorted set list, disjointly.
      std::vector<std::string> all = s1.train;
      all.insert(all.end(), s1.test.begin(), s1.test.end());
      std::sort(all.begin(), all.end());
      CHECK(all == std::vector<std::string>{"set0", "set1", "set2", "set3", "set4"});
      if (s1.train != p3.assignments[static_cast<std::size_t>(f)].at(cls).train) {
        any_diff = true;
      }
    }
  }
  CHECK(any_diff);  // a different seed must change at least one assignment

  const SplitPlan leave_one = make_splits(m, 4, 2, 7);
  for (const auto& [cls, split] : leave_one.assignments[0]) {
    CHECK(split.test.size() == 1);
  }

  CHECK_THROWS_AS(make_splits(m, 5, 2, 7), Error);
  CHECK_THROWS_AS(make_splits(m, 0, 2, 7), Error);
  CHECK_THROWS_AS(make_splits(m, 2, 0, 7), Error);
}

TEST_CASE("split plans round-trip through their audit format") {
  TempDir tmp("splitsio");
  make_tree(tmp.path, {"x", "y"}, 4, 2);
  const DatasetManifest m = scan_dataset(tmp.path);
  const SplitPlan plan = make_splits(m, 2, 3, 123);

  std::stringstream buf;
  write_splits(plan, buf);
  const std::string text = buf.str();
  CHECK(text.rfind("# seed=123 folds=3 train_per_class=2\nfold,class,set_id,role\n", 0) == 0);

  const SplitPlan back = read_splits(buf);
  CHECK(back.seed == plan.seed);
  CHECK(back.folds == plan.folds);
  CHECK(back.train_per_class == plan.train_per_class);
  REQUIRE(back.assignments.size() == plan.assignments.size());
  for (std::size_t f = 0; f < plan.assignments.size(); ++f) {
    for (const auto& [cls, split] : plan.assignments[f]) {
      CHECK(back.assignments[f].at(cls).train == split.train);
      CHECK(back.assignments[f].at(cls).test == split.test);
    }
  }

  std::stringstream no_header("fold,class,set_id,role\n");
  CHECK_THROWS_AS(read_splits(no_header), IoError);
  std::stringstream bad_cols("# seed=1 folds=1 train_per_class=1\nfold,class\n");
  CHECK_THROWS_AS(read_splits(bad_cols), IoError);
  std::stringstream bad_role(
      "# seed=1 folds=1 train_per_class=1\nfold,class,set_id,role\n0,a,s,weird\n");
  CHECK_THROWS_AS(read_splits(bad_role), IoError);
}
