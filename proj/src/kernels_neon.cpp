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

// AArch64 NEON variants; double-precision NEON is baseline on aarch64, so
// no runtime CPU check is needed there.

#include "oratag/kernels.hpp"

#if defined(ORATAG_BUILD_NEON)

#include <arm_neon.h>

namespace oratag::kern {

namespace {

void add(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void add_inplace(double* dst, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vld1q_f64(a + i)));
  }
  for (; i < n; ++i) dst[i] += a[i];
}

void add_scalar(double* dst, const double* a, double s, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(a + i), vs));
  }
  for (; i < n; ++i) dst[i] = a[i] + s;
}

void vmax_step(double* best, std::int32_t* arg, double base, const double* row,
               std::int32_t index, std::size_t n) {
  const float64x2_t vbase = vdupq_n_f64(base);
  const int32x2_t vindex = vdup_n_s32(index);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t cand = vaddq_f64(vbase, vld1q_f64(row + i));
    const float64x2_t cur = vld1q_f64(best + i);
    const uint64x2_t gt = vcgtq_f64(cand, cur);
    vst1q_f64(best + i, vbslq_f64(gt, cand, cur));
    const uint32x2_t mask32 = vmovn_u64(gt);
    const int32x2_t cur_arg = vld1_s32(arg + i);
    vst1_s32(arg + i, vbsl_s32(mask32, vindex, cur_arg));
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
  if (n >= 2) {
    float64x2_t vm = vld1q_f64(v);
    for (i = 2; i + 2 <= n; i += 2) vm = vmaxq_f64(vm, vld1q_f64(v + i));
    m = vmaxvq_f64(vm);
  }
  for (; i < n; ++i) {
    if (v[i] > m) m = v[i];
  }
  return m;
}

}  // namespace

const Ops kNeonOps = {"neon", add, add_inplace, add_scalar, vmax_step, hmax};

}  // namespace oratag::kern

#endif  // ORATAG_BUILD_NEON
