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

#include "fairbench/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace fairbench::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sumsq(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void mf_sgd_update(double* p, double* q, std::size_t k, double err, double lr,
                   double reg) {
  for (std::size_t i = 0; i < k; ++i) {
    const double po = p[i];
    const double qo = q[i];
    p[i] = po + lr * (err * qo - reg * po);
    q[i] = qo + lr * (err * po - reg * qo);
  }
}

}  // namespace scalar

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  void (*mf_sgd_update)(double*, double*, std::size_t, double, double, double);
  std::string name;
};

Table scalar_table() {
  return {scalar::dot, scalar::axpy, scalar::sum, scalar::sumsq,
          scalar::mf_sgd_update, "scalar"};
}

#if FAIRBENCH_HAVE_AVX2_BUILD
bool cpu_has_avx2_fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

Table avx2_table() {
  return {avx2::dot, avx2::axpy, avx2::sum, avx2::sumsq, avx2::mf_sgd_update,
          "avx2"};
}
#endif

Table pick_table() {
  const char* env = std::getenv("FAIRBENCH_SIMD");
  std::string want = env ? env : "";
#if FAIRBENCH_HAVE_AVX2_BUILD
  if (want == "avx2") {
    if (!cpu_has_avx2_fma())
      throw std::invalid_argument("FAIRBENCH_SIMD=avx2 but CPU lacks AVX2/FMA");
    return avx2_table();
  }
  if (want.empty() && cpu_has_avx2_fma()) return avx2_table();
#endif
  if (!want.empty() && want != "scalar")
    throw std::invalid_argument("unknown FAIRBENCH_SIMD backend: " + want);
  return scalar_table();
}

Table& table() {
  static Table t = pick_table();
  return t;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}

double sum(const double* a, std::size_t n) { return table().sum(a, n); }

double sumsq(const double* a, std::size_t n) { return table().sumsq(a, n); }

void mf_sgd_update(double* p, double* q, std::size_t k, double err, double lr,
                   double reg) {
  table().mf_sgd_update(p, q, k, err, lr, reg);
}

const std::string& active_backend() { return table().name; }

void force_backend(const std::string& name) {
  if (name == "scalar") {
    table() = scalar_table();
    return;
  }
#if FAIRBENCH_HAVE_AVX2_BUILD
  if (name == "avx2") {
    if (!cpu_has_avx2_fma())
      throw std::invalid_argument("CPU lacks AVX2/FMA");
    table() = avx2_table();
    return;
  }
#endif
  throw std::invalid_argument("unknown kernel backend: " + name);
}

}  // namespace fairbench::kernels
