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

#include "io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gdpcurve {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& message) {
  throw DataError(path + ":" + std::to_string(line) + ": " + message);
}

struct CsvReader {
  std::string path;
  std::ifstream stream;
  std::size_t line_number = 0;

  explicit CsvReader(const std::string& p) : path(p), stream(p) {
    if (!stream) throw DataError("cannot open file: " + p);
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(stream, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      fields.clear();
      std::size_t begin = 0;
      while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
          fields.push_back(line.substr(begin));
          break;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
      }
      return true;
    }
    return false;
  }

  void expect_header(const std::string& header) {
    std::vector<std::string> fields;
    if (!next(fields)) parse_fail(path, line_number, "missing header");
    std::string joined;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) joined += ',';
      joined += fields[i];
    }
    if (joined != header) {
      parse_fail(path, line_number, "expected header '" + header + "', got '" + joined + "'");
    }
  }

  double number(const std::vector<std::string>& fields, std::size_t index) {
    const std::string& token = fields[index];
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
      parse_fail(path, line_number, "malformed number '" + token + "'");
    }
    return value;
  }

  void expect_fields(const std::vector<std::string>& fields, std::size_t count) {
    if (fields.size() != count) {
      parse_fail(path, line_number,
                 "expected " + std::to_string(count) + " fields, got " +
                     std::to_string(fields.size()));
    }
  }
};

void write_or_fail(const std::string& path, const std::string& content) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
  write_or_fail(path, content);
}

void write_surface_csv(const std::string& path, const DiskSurface<double>& surface) {
  validate(surface);
  std::string out = "r,theta,x,y,z\n";
  for (Eigen::Index i = 0; i < surface.n_r(); ++i) {
    const std::string r = format_double(surface.radii[i]);
    for (Eigen::Index j = 0; j < surface.m(); ++j) {
      out += r;
      out += ',';
      out += format_double(surface.angles.points[j]);
      out += ',';
      out += format_double(surface.x(i, j));
      out += ',';
      out += format_double(surface.y(i, j));
      out += ',';
      out += format_double(surface.z(i, j));
      out += '\n';
    }
  }
  write_or_fail(path, out);
}

DiskSurface<double> read_surface_csv(const std::string& path) {
  CsvReader reader(path);
  reader.expect_header("r,theta,x,y,z");
  std::vector<double> radii;
  std::vector<std::array<double, 4>> block;  // theta,x,y,z rows of the current ring
  std::vector<std::vector<std::array<double, 4>>> rings;
  std::vector<std::string> fields;
  double current_r = 0;
  bool have_ring = false;
  while (reader.next(fields)) {
    reader.expect_fields(fields, 5);
    const double r = reader.number(fields, 0);
    const std::array<double, 4> p = {reader.number(fields, 1), reader.number(fields, 2),
                                     reader.number(fields, 3), reader.number(fields, 4)};
    if (!have_ring || r != current_r) {
      if (have_ring) rings.push_back(std::move(block));
      block.clear();
      current_r = r;
      have_ring = true;
      radii.push_back(r);
    }
    const std::size_t m_so_far = rings.empty() ? 0 : rings.front().size();
    if (!rings.empty() && block.size() >= m_so_far) {
      parse_fail(path, reader.line_number, "ring has more angle samples than the first ring");
    }
    block.push_back(p);
  }
  if (have_ring) rings.push_back(std::move(block));
  if (rings.empty()) parse_fail(path, reader.line_number, "file holds no surface rows");
  const std::size_t m = rings.front().size();
  if (m < 1) parse_fail(path, reader.line_number, "empty ring");
  for (std::size_t i = 0; i < rings.size(); ++i) {
    for (std::size_t j = 0; j < rings[i].size(); ++j) {
      const double expected = static_cast<double>(j) / static_cast<double>(m);
      if (std::abs(rings[i][j][0] - expected) > 1e-12) {
        throw DataError(path + ": ring " + std::to_string(i) + " sample " +
                        std::to_string(j) + ": theta " + format_double(rings[i][j][0]) +
                        " does not sit on the uniform grid j/m");
      }
    }
  }
  DiskSurface<double> surface;
  surface.radii.resize(static_cast<Eigen::Index>(rings.size()));
  surface.angles = make_circle_grid<double>(static_cast<Eigen::Index>(m));
  surface.x.resize(static_cast<Eigen::Index>(rings.size()), static_cast<Eigen::Index>(m));
  surface.y.resize(static_cast<Eigen::Index>(rings.size()), static_cast<Eigen::Index>(m));
  surface.z.resize(static_cast<Eigen::Index>(rings.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < rings.size(); ++i) {
    if (rings[i].size() != m) {
      throw DataError(path + ": ring " + std::to_string(i) + " has " +
                      std::to_string(rings[i].size()) + " samples, expected " +
                      std::to_string(m));
    }
    surface.radii[static_cast<Eigen::Index>(i)] = radii[i];
    for (std::size_t j = 0; j < m; ++j) {
      surface.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rings[i][j][1];
      surface.y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rings[i][j][2];
      surface.z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rings[i][j][3];
    }
  }
  validate(surface);
  return surface;
}

void write_point_cloud_csv(const std::string& path, const PointCloud<double>& cloud) {
  validate(cloud);
  std::string out = "x,y,z\n";
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    out += format_double(cloud.points(i, 0));
    out += ',';
    out += format_double(cloud.points(i, 1));
    out += ',';
    out += format_double(cloud.points(i, 2));
    out += '\n';
  }
  write_or_fail(path, out);
}

PointCloud<double> read_point_cloud_csv(const std::string& path) {
  CsvReader reader(path);
  reader.expect_header("x,y,z");
  std::vector<std::array<double, 3>> rows;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    reader.expect_fields(fields, 3);
    rows.push_back({reader.number(fields, 0), reader.number(fields, 1),
                    reader.number(fields, 2)});
  }
  if (rows.empty()) parse_fail(path, reader.line_number, "file holds no points");
  PointCloud<double> cloud;
  cloud.registered = true;
  cloud.points.resize(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      cloud.points(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
    }
  }
  validate(cloud);
  return cloud;
}

void write_curve_set_csv(const std::string& path, const RadialCurveSet<double>& set) {
  if (set.J < 1 || set.x.rows() != set.J || set.x.cols() != set.grid.m) {
    throw DomainError("write_curve_set_csv: invalid curve set");
  }
  const Eigen::Index m = set.grid.m;
  std::string out = "curve,radius,t,x,y,z\n";
  for (Eigen::Index j = 0; j < set.J; ++j) {
    const std::string radius = format_double(set.radii_selected[j]);
    for (Eigen::Index i = 0; i <= m; ++i) {
      const Eigen::Index col = i % m;
      out += std::to_string(j);
      out += ',';
      out += radius;
      out += ',';
      out += (i == m) ? "1" : format_double(set.grid.points[col]);
      out += ',';
      out += format_double(set.x(j, col));
      out += ',';
      out += format_double(set.y(j, col));
      out += ',';
      out += format_double(set.z(j, col));
      out += '\n';
    }
  }
  write_or_fail(path, out);
}

RadialCurveSet<double> read_curve_set_csv(const std::string& path) {
  CsvReader reader(path);
  reader.expect_header("curve,radius,t,x,y,z");
  std::vector<std::string> fields;
  std::vector<double> radii;
  std::vector<std::vector<std::array<double, 3>>> curves;
  while (reader.next(fields)) {
    reader.expect_fields(fields, 6);
    const double index = reader.number(fields, 0);
    const double radius = reader.number(fields, 1);
    const std::array<double, 3> p = {reader.number(fields, 3), reader.number(fields, 4),
                                     reader.number(fields, 5)};
    const auto j = static_cast<std::size_t>(index);
    if (index < 0 || static_cast<double>(j) != index || j > curves.size()) {
      parse_fail(path, reader.line_number, "curve indices must be consecutive from 0");
    }
    if (j == curves.size()) {
      curves.emplace_back();
      radii.push_back(radius);
    } else if (radius != radii[j]) {
      parse_fail(path, reader.line_number, "radius changed within a curve");
    }
    curves[j].push_back(p);
  }
  if (curves.empty()) parse_fail(path, reader.line_number, "file holds no curves");
  const std::size_t rows = curves.front().size();
  if (rows < 2) parse_fail(path, reader.line_number, "curve needs at least two rows");
  const std::size_t m = rows - 1;
  RadialCurveSet<double> set;
  set.J = static_cast<Eigen::Index>(curves.size());
  set.grid = make_circle_grid<double>(static_cast<Eigen::Index>(m));
  set.radii_selected.resize(set.J);
  set.x.resize(set.J, static_cast<Eigen::Index>(m));
  set.y.resize(set.J, static_cast<Eigen::Index>(m));
  set.z.resize(set.J, static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < curves.size(); ++j) {
    if (curves[j].size() != rows) {
      throw DataError(path + ": curve " + std::to_string(j) + " has " +
                      std::to_string(curves[j].size()) + " rows, expected " +
                      std::to_string(rows));
    }
    if (curves[j].back() != curves[j].front()) {
      throw DataError(path + ": curve " + std::to_string(j) +
                      " is not closed: last row differs from first");
    }
    set.radii_selected[static_cast<Eigen::Index>(j)] = radii[j];
    for (std::size_t i = 0; i < m; ++i) {
      set.x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = curves[j][i][0];
      set.y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = curves[j][i][1];
      set.z(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = curves[j][i][2];
    }
  }
  return set;
}

void write_eigenbasis_csv(const std::string& prefix, const KernelEigenbasis<double>& basis) {
  std::string values = "lambda\n";
  for (Eigen::Index j = 0; j < basis.modes(); ++j) {
    values += format_double(basis.eigenvalues[j]);
    values += '\n';
  }
  write_or_fail(prefix + "_eigenvalues.csv", values);
  std::string vectors;
  for (Eigen::Index j = 0; j < basis.modes(); ++j) {
    if (j) vectors += ',';
    vectors += "b" + std::to_string(j);
  }
  vectors += '\n';
  for (Eigen::Index i = 0; i < basis.grid.m; ++i) {
    for (Eigen::Index j = 0; j < basis.modes(); ++j) {
      if (j) vectors += ',';
      vectors += format_double(basis.eigenvectors(i, j));
    }
    vectors += '\n';
  }
  write_or_fail(prefix + "_eigenvectors.csv", vectors);
}

KernelEigenbasis<double> read_eigenbasis_csv(const std::string& prefix) {
  std::vector<double> values;
  {
    CsvReader reader(prefix + "_eigenvalues.csv");
    reader.expect_header("lambda");
    std::vector<std::string> fields;
    while (reader.next(fields)) {
      reader.expect_fields(fields, 1);
      values.push_back(reader.number(fields, 0));
    }
  }
  if (values.empty()) throw DataError(prefix + "_eigenvalues.csv: no eigenvalues");
  std::vector<std::vector<double>> rows;
  {
    CsvReader reader(prefix + "_eigenvectors.csv");
    std::vector<std::string> fields;
    if (!reader.next(fields)) parse_fail(reader.path, 0, "missing header");
    reader.expect_fields(fields, values.size());
    while (reader.next(fields)) {
      reader.expect_fields(fields, values.size());
      std::vector<double> row;
      row.reserve(values.size());
      for (std::size_t j = 0; j < values.size(); ++j) row.push_back(reader.number(fields, j));
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw DataError(prefix + "_eigenvectors.csv: no rows");
  KernelEigenbasis<double> basis;
  basis.grid = make_circle_grid<double>(static_cast<Eigen::Index>(rows.size()));
  basis.eigenvalues.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) {
    basis.eigenvalues[static_cast<Eigen::Index>(j)] = values[j];
  }
  basis.eigenvectors.resize(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      basis.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  basis.kernel_matrix = basis.eigenvectors * basis.eigenvalues.asDiagonal() *
                        basis.eigenvectors.transpose();
  return basis;
}

void write_surface_obj(const std::string& path, const DiskSurface<double>& surface) {
  validate(surface);
  const Eigen::Index nr = surface.n_r();
  const Eigen::Index m = surface.m();
  std::string out = "# disk surface, " + std::to_string(nr) + " rings x " +
                    std::to_string(m) + " angles\n";
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out += "v " + format_double(surface.x(i, j)) + ' ' + format_double(surface.y(i, j)) +
             ' ' + format_double(surface.z(i, j)) + '\n';
    }
  }
  auto vertex = [m](Eigen::Index i, Eigen::Index j) {
    return std::to_string(i * m + (j % m) + 1);
  };
  for (Eigen::Index i = 0; i + 1 < nr; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out += "f " + vertex(i, j) + ' ' + vertex(i, j + 1) + ' ' + vertex(i + 1, j + 1) +
             ' ' + vertex(i + 1, j) + '\n';
    }
  }
  write_or_fail(path, out);
}

void write_curves_obj(const std::string& path, const RadialCurveSet<double>& set) {
  const Eigen::Index m = set.grid.m;
  std::string out = "# radial curves, J=" + std::to_string(set.J) + ", m=" +
                    std::to_string(m) + '\n';
  for (Eigen::Index j = 0; j < set.J; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      out += "v " + format_double(set.x(j, i)) + ' ' + format_double(set.y(j, i)) + ' ' +
             format_double(set.z(j, i)) + '\n';
    }
  }
  for (Eigen::Index j = 0; j < set.J; ++j) {
    out += "l";
    for (Eigen::Index i = 0; i < m; ++i) out += ' ' + std::to_string(j * m + i + 1);
    out += ' ' + std::to_string(j * m + 1);  // close the loop
    out += '\n';
  }
  write_or_fail(path, out);
}

void write_dataset(const std::string& dir, const std::vector<DiskSurface<double>>& surfaces) {
  if (surfaces.empty()) throw DomainError("write_dataset: no surfaces");
  fs::create_directories(dir);
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "surface_%04zu.csv", i);
    write_surface_csv((fs::path(dir) / name).string(), surfaces[i]);
  }
}

std::vector<DiskSurface<double>> read_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("dataset directory not found: " + dir);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("surface_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv") {
      names.push_back(entry.path().string());
    }
  }
  if (names.empty()) throw DataError("dataset directory holds no surface_*.csv files: " + dir);
  std::sort(names.begin(), names.end());
  std::vector<DiskSurface<double>> surfaces;
  surfaces.reserve(names.size());
  for (const std::string& name : names) surfaces.push_back(read_surface_csv(name));
  return surfaces;
}

}  // namespace gdpcurve
