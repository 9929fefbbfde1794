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

#ifndef GDPCURVE_RNG_HPP
#define GDPCURVE_RNG_HPP

#include <cstdint>
#include <random>

#include "gdpcurve/normal.hpp"

// Deterministic random streams. Every consumer derives its own seed from the
// run seed plus integer tags (curve index, coordinate, batch, ...), so draws
// do not depend on evaluation order or thread count. Normal variates go
// through the inverse cdf; one engine value maps to one variate, which keeps
// streams reproducible across standard libraries (std::normal_distribution
// makes no such promise).

namespace gdpcurve {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
  return splitmix64(splitmix64(root) ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL));
}

template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag, Tags... rest) {
  return derive_seed(derive_seed(root, tag), rest...);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gdpcurve

#endif  // GDPCURVE_RNG_HPP
