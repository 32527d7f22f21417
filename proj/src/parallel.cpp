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

#include "poisonsep/parallel.hpp"

#include <atomic>

#include "poisonsep/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace poisonsep {
namespace {

std::atomic<Execution> g_execution{Execution::kParallel};

void check_dims(const Eigen::MatrixXd& x, const Eigen::VectorXd& r) {
  if (x.rows() != r.size()) {
    throw InputError("correlate_columns: residual length does not match row count");
  }
}

}  // namespace

Execution default_execution() { return g_execution.load(std::memory_order_relaxed); }

void set_default_execution(Execution exec) {
  g_execution.store(exec, std::memory_order_relaxed);
}

int worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Eigen::VectorXd correlate_columns(const Eigen::MatrixXd& x, const Eigen::VectorXd& r) {
  check_dims(x, r);
  Eigen::VectorXd c(x.cols());
  const auto d = static_cast<long long>(x.cols());
#pragma omp parallel for schedule(static) if (d >= 2048)
  for (long long j = 0; j < d; ++j) {
    c[static_cast<Eigen::Index>(j)] = x.col(static_cast<Eigen::Index>(j)).dot(r);
  }
  return c;
}

Eigen::VectorXd correlate_columns_serial(const Eigen::MatrixXd& x,
                                         const Eigen::VectorXd& r) {
  check_dims(x, r);
  Eigen::VectorXd c(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) c[j] = x.col(j).dot(r);
  return c;
}

}  // namespace poisonsep
