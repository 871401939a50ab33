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

#pragma once

#include <cstddef>
#include <string>

namespace fairbench::kernels {

/// Dense double-precision kernels behind the training inner loops.
///
/// Every kernel has a scalar reference implementation and, on x86-64 with
/// AVX2+FMA, a vectorized variant. The variant is picked once at startup from
/// CPUID; set FAIRBENCH_SIMD=scalar (or =avx2) to override. For a fixed
/// backend all kernels are deterministic; the vector variants may differ from
/// scalar in the last ulps because partial sums accumulate in a different
/// order.

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

double sum(const double* a, std::size_t n);

double sumsq(const double* a, std::size_t n);

// One SGD step on a user/item factor pair, both updated from their old
// values:  p[i] += lr*(err*q[i] - reg*p[i]),  q[i] += lr*(err*p_old - reg*q[i])
void mf_sgd_update(double* p, double* q, std::size_t k, double err, double lr,
                   double reg);

// Name of the dispatched backend: "scalar" or "avx2".
const std::string& active_backend();

// Test hook: force a backend by name. Throws std::invalid_argument on an
// unknown name or an unsupported instruction set.
void force_backend(const std::string& name);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
void mf_sgd_update(double* p, double* q, std::size_t k, double err, double lr,
                   double reg);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FAIRBENCH_HAVE_AVX2_BUILD 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
void mf_sgd_update(double* p, double* q, std::size_t k, double err, double lr,
                   double reg);
}  // namespace avx2
#else
#define FAIRBENCH_HAVE_AVX2_BUILD 0
#endif

}  // namespace fairbench::kernels
