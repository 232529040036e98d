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

// Compiled with -mavx2; only reached after the runtime CPU check.

#include "oratag/kernels.hpp"

#if defined(ORATAG_BUILD_AVX2)

#include <immintrin.h>

namespace oratag::kern {

namespace {

void add(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void add_inplace(double* dst, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) dst[i] += a[i];
}

void add_scalar(double* dst, const double* a, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i), vs));
  }
  for (; i < n; ++i) dst[i] = a[i] + s;
}

void vmax_step(double* best, std::int32_t* arg, double base, const double* row,
               std::int32_t index, std::size_t n) {
  const __m256d vbase = _mm256_set1_pd(base);
  const __m128i vindex = _mm_set1_epi32(index);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cand = _mm256_add_pd(vbase, _mm256_loadu_pd(row + i));
    const __m256d cur = _mm256_loadu_pd(best + i);
    const __m256d gt = _mm256_cmp_pd(cand, cur, _CMP_GT_OQ);
    _mm256_storeu_pd(best + i, _mm256_blendv_pd(cur, cand, gt));
    // Each 64-bit compare lane is all ones or all zeros; taking the high
    // 32-bit word of every lane yields the matching 32-bit mask.
    const __m256i gti = _mm256_castpd_si256(gt);
    const __m128 lo = _mm_castsi128_ps(_mm256_castsi256_si128(gti));
    const __m128 hi = _mm_castsi128_ps(_mm256_extracti128_si256(gti, 1));
    const __m128i mask32 = _mm_castps_si128(_mm_shuffle_ps(lo, hi, _MM_SHUFFLE(3, 1, 3, 1)));
    const __m128i cur_arg = _mm_loadu_si128(reinterpret_cast<const __m128i*>(arg + i));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(arg + i),
                     _mm_blendv_epi8(cur_arg, vindex, mask32));
  }
  for (; i < n; ++i) {
    const double c = base + row[i];
    if (c > best[i]) {
      best[i] = c;
      arg[i] = index;
    }
  }
}

double hmax(const double* v, std::size_t n) {
  std::size_t i = 0;
  double m = v[0];
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(v);
    for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(v + i));
    const __m128d m128 = _mm_max_pd(_mm256_castpd256_pd128(vm), _mm256_extractf128_pd(vm, 1));
    const __m128d m64 = _mm_max_sd(m128, _mm_unpackhi_pd(m128, m128));
    m = _mm_cvtsd_f64(m64);
  }
  for (; i < n; ++i) {
    if (v[i] > m) m = v[i];
  }
  return m;
}

}  // namespace

const Ops kAvx2Ops = {"avx2", add, add_inplace, add_scalar, vmax_step, hmax};

}  // namespace oratag::kern

#endif  // ORATAG_BUILD_AVX2
