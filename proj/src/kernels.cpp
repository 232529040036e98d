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

#include <cmath>
#include <limits>

namespace oratag::kern {

namespace {

const Ops* detect() {
#if defined(ORATAG_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2")) return &kAvx2Ops;
#endif
#if defined(ORATAG_BUILD_NEON)
  return &kNeonOps;
#endif
  return &kScalarOps;
}

const Ops*& active() {
  static const Ops* table = detect();
  return table;
}

}  // namespace

const Ops& ops() { return *active(); }

Backend active_backend() {
  const char* name = active()->name;
  if (name[0] == 'a') return Backend::Avx2;
  if (name[0] == 'n') return Backend::Neon;
  return Backend::Scalar;
}

bool set_backend(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      active() = &kScalarOps;
      return true;
    case Backend::Avx2:
#if defined(ORATAG_BUILD_AVX2)
      if (__builtin_cpu_supports("avx2")) {
        active() = &kAvx2Ops;
        return true;
      }
#endif
      return false;
    case Backend::Neon:
#if defined(ORATAG_BUILD_NEON)
      active() = &kNeonOps;
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::size_t argmax(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double logsumexp(const double* v, std::size_t n) {
  const double m = ops().hmax(v, n);
  if (std::isinf(m) && m < 0) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(v[i] - m);
  return m + std::log(sum);
}

}  // namespace oratag::kern
