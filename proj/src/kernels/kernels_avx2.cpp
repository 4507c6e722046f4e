// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants of the state-vector kernels. Functions carry a target
// attribute instead of the whole file being built with -mavx2, so no inline
// template instantiation emitted here can leak AVX2 code into callers that
// run on CPUs without it. The table is only handed out after a runtime CPU
// check.
//
// Each 256-bit register holds two complex amplitudes, indices (i, i + 1) with
// i even. For such a pair (i ^ x, (i + 1) ^ x) is again an adjacent pair,
// stored in swapped order when bit 0 of x is set, and the Z-parity of the
// second lane differs from the first by parity(z & 1).
#include "pqe/kernels.hpp"

#if defined(PQE_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

#define PQE_AVX2 __attribute__((target("avx2,fma")))

namespace pqe::kernels {

namespace {

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

PQE_AVX2 inline __m256d lane_signs(int s0, int s1) {
  const double a = s0 ? -1.0 : 1.0;
  const double b = s1 ? -1.0 : 1.0;
  return _mm256_set_pd(b, b, a, a);
}

// (br + i bi) * v for two packed complex numbers.
PQE_AVX2 inline __m256d cmul(__m256d br, __m256d bi, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(br, v), _mm256_mul_pd(bi, swapped));
}

PQE_AVX2 inline __m256d swap_halves(__m256d v) { return _mm256_permute2f128_pd(v, v, 0x01); }

PQE_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PQE_AVX2 void accumulate(const cplx* in_c, cplx* out_c, std::size_t dim, std::uint64_t x,
                         std::uint64_t z, cplx coeff) {
  if (dim < 2) {
    scalar_table().pauli_accumulate(in_c, out_c, dim, x, z, coeff);
    return;
  }
  const double* in = reinterpret_cast<const double*>(in_c);
  double* out = reinterpret_cast<double*>(out_c);
  const __m256d br = _mm256_set1_pd(coeff.real());
  const __m256d bi = _mm256_set1_pd(coeff.imag());
  const int zlow = static_cast<int>(z & 1u);
  const bool swap = x & 1u;
  for (std::size_t i = 0; i < dim; i += 2) {
    const int s0 = parity(i & z);
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(in + 2 * i), lane_signs(s0, s0 ^ zlow));
    __m256d w = cmul(br, bi, v);
    if (swap) w = swap_halves(w);
    double* dst = out + 2 * ((i ^ x) & ~std::size_t{1});
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), w));
  }
}

PQE_AVX2 void rotate(cplx* psi_c, std::size_t dim, std::uint64_t x, std::uint64_t z, double c,
                     cplx beta) {
  if (dim < 2 || x == 1) {
    scalar_table().pauli_rotate(psi_c, dim, x, z, c, beta);
    return;
  }
  double* psi = reinterpret_cast<double*>(psi_c);
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d br = _mm256_set1_pd(beta.real());
  const __m256d bi = _mm256_set1_pd(beta.imag());
  const int zlow = static_cast<int>(z & 1u);
  if (x == 0) {
    for (std::size_t i = 0; i < dim; i += 2) {
      const int s0 = parity(i & z);
      __m256d a = _mm256_loadu_pd(psi + 2 * i);
      const __m256d sa = _mm256_mul_pd(a, lane_signs(s0, s0 ^ zlow));
      a = _mm256_fmadd_pd(cv, a, cmul(br, bi, sa));
      _mm256_storeu_pd(psi + 2 * i, a);
    }
    return;
  }
  const bool swap = x & 1u;
  const std::size_t high = std::bit_floor(x);  // >= 2 here
  for (std::size_t base = 0; base < dim; base += 2 * high) {
    for (std::size_t i = base; i < base + high; i += 2) {
      const std::size_t jb = (i ^ x) & ~std::size_t{1};
      const int si = parity(i & z);
      const int sj = parity((i ^ x) & z);
      const __m256d a = _mm256_loadu_pd(psi + 2 * i);
      __m256d b = _mm256_loadu_pd(psi + 2 * jb);
      if (swap) b = swap_halves(b);
      const __m256d sb = _mm256_mul_pd(b, lane_signs(sj, sj ^ zlow));
      const __m256d sa = _mm256_mul_pd(a, lane_signs(si, si ^ zlow));
      const __m256d na = _mm256_fmadd_pd(cv, a, cmul(br, bi, sb));
      __m256d nb = _mm256_fmadd_pd(cv, b, cmul(br, bi, sa));
      if (swap) nb = swap_halves(nb);
      _mm256_storeu_pd(psi + 2 * i, na);
      _mm256_storeu_pd(psi + 2 * jb, nb);
    }
  }
}

PQE_AVX2 cplx expectation(const cplx* psi_c, std::size_t dim, std::uint64_t x, std::uint64_t z) {
  if (dim < 2) return scalar_table().pauli_expectation(psi_c, dim, x, z);
  const double* psi = reinterpret_cast<const double*>(psi_c);
  const int zlow = static_cast<int>(z & 1u);
  const bool swap = x & 1u;
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  for (std::size_t i = 0; i < dim; i += 2) {
    const int s0 = parity(i & z);
    const __m256d a = _mm256_mul_pd(_mm256_loadu_pd(psi + 2 * i), lane_signs(s0, s0 ^ zlow));
    __m256d b = _mm256_loadu_pd(psi + 2 * ((i ^ x) & ~std::size_t{1}));
    if (swap) b = swap_halves(b);
    // conj(b) a: re = br ar + bi ai, im = br ai - bi ar
    acc_re = _mm256_fmadd_pd(b, a, acc_re);
    acc_im = _mm256_fmadd_pd(b, _mm256_permute_pd(a, 0b0101), acc_im);
  }
  const __m256d alt = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  return {hsum(acc_re), hsum(_mm256_mul_pd(acc_im, alt))};
}

PQE_AVX2 cplx inner_product(const cplx* a_c, const cplx* b_c, std::size_t dim) {
  if (dim < 2) return scalar_table().inner(a_c, b_c, dim);
  const double* a = reinterpret_cast<const double*>(a_c);
  const double* b = reinterpret_cast<const double*>(b_c);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  for (std::size_t i = 0; i < dim; i += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * i);
    const __m256d vb = _mm256_loadu_pd(b + 2 * i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im);
  }
  const __m256d alt = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  return {hsum(acc_re), hsum(_mm256_mul_pd(acc_im, alt))};
}

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{"avx2", &accumulate, &rotate, &expectation, &inner_product};
  return supported ? &table : nullptr;
}

}  // namespace pqe::kernels

#else

namespace pqe::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace pqe::kernels

#endif
