// SPDX-License-Identifier: Apache-2.0
#include <bit>

#include "pqe/kernels.hpp"

namespace pqe::kernels {

namespace {

inline double sign_of(std::size_t i, std::uint64_t z) {
  return (std::popcount(static_cast<std::uint64_t>(i) & z) & 1) ? -1.0 : 1.0;
}

void accumulate(const cplx* in, cplx* out, std::size_t dim, std::uint64_t x, std::uint64_t z,
                cplx coeff) {
  for (std::size_t i = 0; i < dim; ++i) out[i ^ x] += coeff * (sign_of(i, z) * in[i]);
}

void rotate(cplx* psi, std::size_t dim, std::uint64_t x, std::uint64_t z, double c, cplx beta) {
  if (x == 0) {
    const cplx plus = c + beta, minus = c - beta;
    for (std::size_t i = 0; i < dim; ++i) psi[i] *= sign_of(i, z) > 0 ? plus : minus;
    return;
  }
  const std::size_t high = std::bit_floor(x);
  for (std::size_t base = 0; base < dim; base += 2 * high) {
    for (std::size_t i = base; i < base + high; ++i) {
      const std::size_t j = i ^ x;
      const cplx a = psi[i], b = psi[j];
      psi[i] = c * a + beta * (sign_of(j, z) * b);
      psi[j] = c * b + beta * (sign_of(i, z) * a);
    }
  }
}

cplx expectation(const cplx* psi, std::size_t dim, std::uint64_t x, std::uint64_t z) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) acc += std::conj(psi[i ^ x]) * (sign_of(i, z) * psi[i]);
  return acc;
}

cplx inner_product(const cplx* a, const cplx* b, std::size_t dim) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &accumulate, &rotate, &expectation, &inner_product};
  return table;
}

}  // namespace pqe::kernels
