// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cachedof::kernels {

std::string to_string(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
#if defined(CACHEDOF_HAVE_AVX2)
  static const bool has_avx2 = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return has_avx2;
#else
  return false;
#endif
}

namespace {

Backend select_backend() {
  if (const char* env = std::getenv("CACHEDOF_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  }
  return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend chosen = select_backend();
  return chosen;
}

void cmul(Backend be, const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  if (be == Backend::Avx2 && backend_available(Backend::Avx2)) {
    avx2::cmul(a, b, out, n);
  } else {
    scalar::cmul(a, b, out, n);
  }
}

void cmul_acc(Backend be, const Complex* a, const Complex* b, Complex* acc, std::size_t n) {
  if (be == Backend::Avx2 && backend_available(Backend::Avx2)) {
    avx2::cmul_acc(a, b, acc, n);
  } else {
    scalar::cmul_acc(a, b, acc, n);
  }
}

void cmul(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  cmul(active_backend(), a, b, out, n);
}

void cmul_acc(const Complex* a, const Complex* b, Complex* acc, std::size_t n) {
  cmul_acc(active_backend(), a, b, acc, n);
}

}  // namespace cachedof::kernels
