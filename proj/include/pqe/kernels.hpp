// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pqe::kernels {

using cplx = std::complex<double>;

// Inner loops of the state-vector engine. A Pauli string acts on a basis
// index i as X^x Z^z |i> = (-1)^{parity(i & z)} |i ^ x>; the Y phase
// i^{|x & z|} is folded into the complex coefficients by the caller.
//
// Every variant must agree with the scalar reference to rounding; the
// equivalence tests compare them on random states.
struct KernelTable {
  const char* name;

  // out[i ^ x] += coeff * (-1)^{parity(i & z)} * in[i] for all i < dim.
  void (*pauli_accumulate)(const cplx* in, cplx* out, std::size_t dim, std::uint64_t x,
                           std::uint64_t z, cplx coeff);

  // psi <- (c * I + beta * X^x Z^z) psi, in place. With x != 0 the update
  // mixes the amplitude pairs (i, i ^ x).
  void (*pauli_rotate)(cplx* psi, std::size_t dim, std::uint64_t x, std::uint64_t z, double c,
                       cplx beta);

  // sum_i conj(psi[i ^ x]) (-1)^{parity(i & z)} psi[i], i.e. <psi| X^x Z^z |psi>.
  cplx (*pauli_expectation)(const cplx* psi, std::size_t dim, std::uint64_t x, std::uint64_t z);

  // sum_i conj(a[i]) b[i]
  cplx (*inner)(const cplx* a, const cplx* b, std::size_t dim);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table used by the engine. Chosen on first use: the PQE_KERNELS
/// environment variable ("scalar", "avx2", "auto") if set, else the widest
/// supported variant.
const KernelTable& active();

/// Overrides the runtime choice. Returns false if the requested variant is
/// unavailable (the active table is left unchanged).
bool select(std::string_view name);

}  // namespace pqe::kernels
