// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/kernels.hpp"

namespace cachedof::kernels::scalar {

namespace {

inline Complex mul(Complex a, Complex b) {
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  const double re = ar * br - ai * bi;
  const double im = ai * br + ar * bi;
  return {re, im};
}

}  // namespace

void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mul(a[i], b[i]);
}

void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const Complex p = mul(a[i], b[i]);
    acc[i] = {acc[i].real() + p.real(), acc[i].imag() + p.imag()};
  }
}

}  // namespace cachedof::kernels::scalar
