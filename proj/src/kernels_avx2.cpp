// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/kernels.hpp"

#if defined(CACHEDOF_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace cachedof::kernels::avx2 {

#if defined(CACHEDOF_HAVE_AVX2)

namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d mul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  const __m256d t1 = _mm256_mul_pd(a, b_re);     // ar*br, ai*br
  const __m256d t2 = _mm256_mul_pd(a_sw, b_im);  // ai*bi, ar*bi
  return _mm256_addsub_pd(t1, t2);
}

}  // namespace

void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d r = mul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    _mm256_storeu_pd(po + 2 * i, r);
  }
  if (i < n) scalar::cmul(a + i, b + i, out + i, n - i);
}

void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* pc = reinterpret_cast<double*>(acc);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d p = mul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    _mm256_storeu_pd(pc + 2 * i, _mm256_add_pd(_mm256_loadu_pd(pc + 2 * i), p));
  }
  if (i < n) scalar::cmul_acc(a + i, b + i, acc + i, n - i);
}

#else

void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n) { scalar::cmul(a, b, out, n); }
void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n) {
  scalar::cmul_acc(a, b, acc, n);
}

#endif

}  // namespace cachedof::kernels::avx2
