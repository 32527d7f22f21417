//
// Copyright 2026 The poisonsep Authors
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

// OpenMP kernels and their serial reference versions.
//
// Every parallel kernel here writes results into slots indexed by the loop
// variable, so its output is bit-identical to the serial reference. The
// serial versions are kept for the equivalence tests and the benchmarks.

#ifndef POISONSEP_PARALLEL_HPP_
#define POISONSEP_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <vector>

#include <Eigen/Dense>

namespace poisonsep {

enum class Execution { kSerial, kParallel };

// Process-wide default used by the experiment drivers; tests flip it to
// compare against the serial path.
Execution default_execution();
void set_default_execution(Execution exec);

// Number of worker threads OpenMP would use (1 when built without OpenMP).
int worker_threads();

// Runs body(i) for i in [0, count). Exceptions thrown by body are captured
// per index and the one with the smallest index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Body&& body,
                    Execution exec = default_execution()) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Maps trial index -> result, preserving index order.
template <class Result, class Body>
std::vector<Result> map_indices(std::size_t count, Body&& body,
                                Execution exec = default_execution()) {
  std::vector<Result> out(count);
  for_each_index(
      count, [&](std::size_t i) { out[i] = body(i); }, exec);
  return out;
}

// Column correlations c = Xᵀr.
Eigen::VectorXd correlate_columns(const Eigen::MatrixXd& x, const Eigen::VectorXd& r);
Eigen::VectorXd correlate_columns_serial(const Eigen::MatrixXd& x,
                                         const Eigen::VectorXd& r);

}  // namespace poisonsep

#endif  // POISONSEP_PARALLEL_HPP_
