// Copyright 2026 The fairbench Authors
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

// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; callers must check CPUID before dispatching here.

#include "fairbench/kernels.hpp"

#if FAIRBENCH_HAVE_AVX2_BUILD

#include <immintrin.h>

namespace fairbench::kernels::avx2 {

namespace {

inline double hadd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hadd(acc) + tail;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return hadd(acc) + tail;
}

double sumsq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * a[i];
  return hadd(acc) + tail;
}

void mf_sgd_update(double* p, double* q, std::size_t k, double err, double lr,
                   double reg) {
  const __m256d verr = _mm256_set1_pd(err);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d vreg = _mm256_set1_pd(-reg);
  std::size_t i = 0;
  for (; i + 4 <= k; i += 4) {
    __m256d po = _mm256_loadu_pd(p + i);
    __m256d qo = _mm256_loadu_pd(q + i);
    // grad_p = err*qo - reg*po ; grad_q = err*po - reg*qo
    __m256d gp = _mm256_fmadd_pd(verr, qo, _mm256_mul_pd(vreg, po));
    __m256d gq = _mm256_fmadd_pd(verr, po, _mm256_mul_pd(vreg, qo));
    _mm256_storeu_pd(p + i, _mm256_fmadd_pd(vlr, gp, po));
    _mm256_storeu_pd(q + i, _mm256_fmadd_pd(vlr, gq, qo));
  }
  for (; i < k; ++i) {
    const double po = p[i];
    const double qo = q[i];
    p[i] = po + lr * (err * qo - reg * po);
    q[i] = qo + lr * (err * po - reg * qo);
  }
}

}  // namespace fairbench::kernels::avx2

#endif  // FAIRBENCH_HAVE_AVX2_BUILD
