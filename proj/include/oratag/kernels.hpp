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

#ifndef ORATAG_KERNELS_HPP_
#define ORATAG_KERNELS_HPP_

#include <cstddef>
#include <cstdint>

// Dense double-vector primitives behind the sequence tagger's inner loops.
// Each operation has a scalar reference implementation and, where the
// hardware allows, an AVX2 or NEON variant selected once at startup. All
// variants are bit-exact against the reference: they perform the same IEEE
// additions, maxima, and comparisons, only in wider lanes. Reductions that
// would reassociate floating-point sums (the exp accumulation in logsumexp)
// stay scalar in every backend.

namespace oratag::kern {

enum class Backend { Scalar, Avx2, Neon };

struct Ops {
  const char* name;
  // dst[i] = a[i] + b[i]
  void (*add)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] += a[i]
  void (*add_inplace)(double* dst, const double* a, std::size_t n);
  // dst[i] = a[i] + s
  void (*add_scalar)(double* dst, const double* a, double s, std::size_t n);
  // For each i: c = base + row[i]; when c > best[i], set best[i] = c and
  // arg[i] = index. Strict comparison keeps the earliest index on ties.
  void (*vmax_step)(double* best, std::int32_t* arg, double base, const double* row,
                    std::int32_t index, std::size_t n);
  // Maximum of v[0..n). Requires n > 0.
  double (*hmax)(const double* v, std::size_t n);
};

extern const Ops kScalarOps;
#if defined(ORATAG_BUILD_AVX2)
extern const Ops kAvx2Ops;
#endif
#if defined(ORATAG_BUILD_NEON)
extern const Ops kNeonOps;
#endif

// Active table; initialized to the widest backend the CPU supports.
const Ops& ops();

Backend active_backend();

// Forces a backend, mainly so tests can compare variants. Returns false and
// leaves the selection unchanged when the backend is not available.
bool set_backend(Backend backend);

// Index of the maximum, lowest index on ties. Requires n > 0.
std::size_t argmax(const double* v, std::size_t n);

// log(sum(exp(v[i]))) computed as m + log(sum(exp(v[i] - m))) with m the
// hmax of v, so the result is finite whenever any v[i] is. Returns -inf for
// all -inf input. The exp sum runs in index order in every backend.
double logsumexp(const double* v, std::size_t n);

}  // namespace oratag::kern

#endif  // ORATAG_KERNELS_HPP_
