// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace cachedof {

using Complex = std::complex<double>;

/// Elementwise complex products on diagonal channels. Every variant rounds
/// (ar*br - ai*bi, ar*bi + ai*br) term by term without fused multiply-add, so
/// algebraically cancelling sums come out as exact zeros.
namespace kernels {

enum class Backend { Scalar, Avx2 };

std::string to_string(Backend b);

/// out[i] = a[i] * b[i]. `out` may alias `a` or `b`.
void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n);

/// acc[i] += a[i] * b[i]
void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n);

/// Backend chosen at first use: AVX2 when the CPU reports it, else scalar.
/// CACHEDOF_KERNELS=scalar forces the reference path.
Backend active_backend();
bool backend_available(Backend b);

/// Explicit per-backend entry points, used by equivalence tests.
void cmul(Backend be, const Complex* a, const Complex* b, Complex* out, std::size_t n);
void cmul_acc(Backend be, const Complex* a, const Complex* b, Complex* acc, std::size_t n);

namespace scalar {
void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n);
void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n);
}  // namespace scalar

namespace avx2 {
void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n);
void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n);
}  // namespace avx2

}  // namespace kernels
}  // namespace cachedof
