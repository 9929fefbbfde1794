//
// Copyright 2026 The gdpcurve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "../src/io.hpp"
#include "gdpcurve/rng.hpp"

using namespace gdpcurve;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gdpcurve_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int n = 0;
    return n++;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("format_double emits shortest round-trip decimal") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  const double value = 0.123456789012345678;
  CHECK(std::stod(format_double(value)) == value);
}

TEST_CASE("surface CSV round-trip is bitwise") {
  TempDir dir;
  const auto face = template_surface<double>(7, 9);
  const std::string path = dir.file("face.csv");
  write_surface_csv(path, face);
  const auto back = read_surface_csv(path);
  CHECK(back.n_r() == 7);
  CHECK(back.m() == 9);
  CHECK((back.radii - face.radii).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.x - face.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - face.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.z - face.z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("surface CSV parse failures carry line diagnostics") {
  TempDir dir;

  SUBCASE("wrong header") {
    const std::string path = dir.file("bad_header.csv");
    write_text_file(path, "a,b,c\n");
    CHECK_THROWS_WITH_AS(read_surface_csv(path),
                         doctest::Contains("bad_header.csv:1"), DataError);
  }
  SUBCASE("malformed number") {
    const std::string path = dir.file("bad_number.csv");
    write_text_file(path, "r,theta,x,y,z\n0.5,zero,1,2,3\n");
    CHECK_THROWS_WITH_AS(read_surface_csv(path), doctest::Contains(":2"), DataError);
  }
  SUBCASE("wrong field count") {
    const std::string path = dir.file("bad_fields.csv");
    write_text_file(path, "r,theta,x,y,z\n0.5,0,1,2\n");
    CHECK_THROWS_AS(read_surface_csv(path), DataError);
  }
  SUBCASE("theta off the uniform grid") {
    const std::string path = dir.file("bad_theta.csv");
    write_text_file(path,
                    "r,theta,x,y,z\n"
                    "0.5,0,1,0,0\n0.5,0.3,0,1,0\n"
                    "1,0,2,0,0\n1,0.3,0,2,0\n");
    CHECK_THROWS_AS(read_surface_csv(path), DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_surface_csv(dir.file("nope.csv")), DataError);
  }
}

TEST_CASE("point cloud CSV round-trip") {
  TempDir dir;
  Rng rng(71);
  PointCloud<double> cloud;
  cloud.points.resize(13, 3);
  for (Eigen::Index i = 0; i < 13; ++i) {
    for (int w = 0; w < 3; ++w) cloud.points(i, w) = rng.normal();
  }
  cloud.registered = true;
  const std::string path = dir.file("cloud.csv");
  write_point_cloud_csv(path, cloud);
  const auto back = read_point_cloud_csv(path);
  CHECK(back.size() == 13);
  CHECK((back.points - cloud.points).cwiseAbs().maxCoeff() == 0.0);

  write_text_file(dir.file("short.csv"), "x,y,z\n1,2\n");
  CHECK_THROWS_AS(read_point_cloud_csv(dir.file("short.csv")), DataError);
  write_text_file(dir.file("empty.csv"), "x,y,z\n");
  CHECK_THROWS_AS(read_point_cloud_csv(dir.file("empty.csv")), DataError);
}

TEST_CASE("curve set CSV round-trip enforces closure") {
  TempDir dir;
  const auto face = template_surface<double>(10, 8);
  const auto set = extract_radial_curves(face, 4);
  const std::string path = dir.file("curves.csv");
  write_curve_set_csv(path, set);
  const auto back = read_curve_set_csv(path);
  CHECK(back.J == 4);
  CHECK(back.grid.m == 8);
  CHECK((back.radii_selected - set.radii_selected).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.x - set.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - set.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.z - set.z).cwiseAbs().maxCoeff() == 0.0);

  SUBCASE("each written curve block closes on its first row") {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == std::size_t(4 * 9));
    const auto field = [](const std::string& line, int index) {
      std::size_t from = 0;
      for (int k = 0; k < index; ++k) from = line.find(',', from) + 1;
      return line.substr(from, line.find(',', from) - from);
    };
    for (int j = 0; j < 4; ++j) {
      const std::string& first = lines[std::size_t(j * 9)];
      const std::string& closing = lines[std::size_t(j * 9 + 8)];
      CHECK(field(closing, 2) == "1");
      for (int w = 3; w < 6; ++w) {
        // the closing row repeats the first row's coordinates verbatim
        CHECK(field(first, w) == field(closing, w));
      }
    }
  }

  SUBCASE("an unclosed curve is rejected") {
    std::string text = slurp(path);
    const auto cut = text.find_last_of('\n', text.size() - 2);
    write_text_file(dir.file("open.csv"), text.substr(0, cut + 1));
    CHECK_THROWS_AS(read_curve_set_csv(dir.file("open.csv")), DataError);
  }
}

TEST_CASE("eigenbasis CSV bundle round-trips the spectrum") {
  TempDir dir;
  PeriodicKernelParams<double> params;
  const auto basis = build_eigenbasis(make_circle_grid<double>(12), params);
  const std::string prefix = dir.file("basis");
  write_eigenbasis_csv(prefix, basis);
  CHECK(fs::exists(prefix + "_eigenvalues.csv"));
  CHECK(fs::exists(prefix + "_eigenvectors.csv"));
  const auto back = read_eigenbasis_csv(prefix);
  CHECK(back.grid.m == 12);
  CHECK((back.eigenvalues - basis.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.eigenvectors - basis.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.kernel_matrix - basis.kernel_matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("OBJ exports carry vertex, face, and line records") {
  TempDir dir;
  const auto face = template_surface<double>(6, 8);
  write_surface_obj(dir.file("face.obj"), face);
  const std::string obj = slurp(dir.file("face.obj"));
  CHECK(obj.rfind("#", 0) == 0);
  CHECK(obj.find("\nv ") != std::string::npos);
  CHECK(obj.find("\nf ") != std::string::npos);

  const auto set = extract_radial_curves(face, 3);
  write_curves_obj(dir.file("curves.obj"), set);
  const std::string curves = slurp(dir.file("curves.obj"));
  CHECK(curves.rfind("#", 0) == 0);
  CHECK(curves.find("\nv ") != std::string::npos);
  CHECK(curves.find("\nl ") != std::string::npos);
}

TEST_CASE("dataset directory round-trip preserves order and bits") {
  TempDir dir;
  SyntheticConfig<double> config;
  config.n_surfaces = 5;
  config.n_r = 6;
  config.m = 7;
  const auto faces = generate_synthetic_dataset(config, 77);
  const std::string data_dir = (dir.path / "dataset").string();
  write_dataset(data_dir, faces);
  const auto back = read_dataset(data_dir);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK((back[i].x - faces[i].x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back[i].z - faces[i].z).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(read_dataset((dir.path / "missing").string()), DataError);
}
