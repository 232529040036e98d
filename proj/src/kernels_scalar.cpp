// Copyright 2026 The Oratag Authors
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

#include "oratag/kernels.hpp"

namespace oratag::kern {

namespace {

void add(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}

void add_inplace(double* dst, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a[i];
}

void add_scalar(double* dst, const double* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + s;
}

void vmax_step(double* best, std::int32_t* arg, double base, const double* row,
               std::int32_t index, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double c = base + row[i];
    if (c > best[i]) {
      best[i] = c;
      arg[i] = index;
    }
  }
}

double hmax(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] > m) m = v[i];
  }
  return m;
}

}  // namespace

const Ops kScalarOps = {"scalar", add, add_inplace, add_scalar, vmax_step, hmax};

}  // namespace oratag::kern
