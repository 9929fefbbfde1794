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

#ifndef GDPCURVE_COMMON_HPP
#define GDPCURVE_COMMON_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gdpcurve {

template <typename Scalar>
using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using MatrixX3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

// Error taxonomy, mapped onto CLI exit codes by the tool:
//   ConfigError    -> 2 (bad run configuration, violated call contracts)
//   DataError      -> 3 (malformed files, inconsistent datasets)
//   NumericalError -> 4 (solver or floating-point failures)
// DomainError marks violated library preconditions; the CLI treats it as a
// configuration problem since every library input derives from the config.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// FNV-1a over raw bytes; used to fingerprint immutable numeric objects so
// that consumers can detect mismatched pairings cheaply.
inline std::uint64_t fnv1a_bytes(const void* data, std::size_t n,
                                 std::uint64_t state = 14695981039346656037ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    state ^= p[i];
    state *= 1099511628211ULL;
  }
  return state;
}

template <typename Scalar>
std::uint64_t fnv1a_append(std::uint64_t state, const VectorX<Scalar>& v) {
  return fnv1a_bytes(v.data(), sizeof(Scalar) * static_cast<std::size_t>(v.size()), state);
}

inline std::uint64_t fnv1a_append(std::uint64_t state, std::uint64_t value) {
  return fnv1a_bytes(&value, sizeof(value), state);
}

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, one per
// worker; every fn(i) must write only to its own output slot, so the result
// is identical for any thread count.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (threads < 1) threads = 1;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gdpcurve

#endif  // GDPCURVE_COMMON_HPP
