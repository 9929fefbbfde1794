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

#ifndef GDPCURVE_IO_HPP
#define GDPCURVE_IO_HPP

#include <string>
#include <vector>

#include "gdpcurve/circle_kernel.hpp"
#include "gdpcurve/surface.hpp"

// File formats. All floating-point output uses %.17g so values survive a
// round trip bit-exactly and artifacts are byte-stable across runs.
//
//   surface CSV:     header "r,theta,x,y,z", rows row-major over the (r,theta)
//                    grid; theta stored as the wrap parameter t in [0,1).
//   point-cloud CSV: header "x,y,z".
//   curve-set CSV:   header "curve,radius,t,x,y,z"; each curve has m+1 rows,
//                    the closing row repeats the first one exactly.
//   eigenbasis:      <prefix>_eigenvalues.csv + <prefix>_eigenvectors.csv.
//   OBJ:             surfaces as quad meshes, curve sets as closed polylines.

namespace gdpcurve {

std::string format_double(double value);

void write_surface_csv(const std::string& path, const DiskSurface<double>& surface);
DiskSurface<double> read_surface_csv(const std::string& path);

void write_point_cloud_csv(const std::string& path, const PointCloud<double>& cloud);
PointCloud<double> read_point_cloud_csv(const std::string& path);

void write_curve_set_csv(const std::string& path, const RadialCurveSet<double>& set);
RadialCurveSet<double> read_curve_set_csv(const std::string& path);

void write_eigenbasis_csv(const std::string& prefix, const KernelEigenbasis<double>& basis);
KernelEigenbasis<double> read_eigenbasis_csv(const std::string& prefix);

void write_surface_obj(const std::string& path, const DiskSurface<double>& surface);
void write_curves_obj(const std::string& path, const RadialCurveSet<double>& set);

// A dataset directory holds surface_0000.csv, surface_0001.csv, ...
void write_dataset(const std::string& dir, const std::vector<DiskSurface<double>>& surfaces);
std::vector<DiskSurface<double>> read_dataset(const std::string& dir);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gdpcurve

#endif  // GDPCURVE_IO_HPP
