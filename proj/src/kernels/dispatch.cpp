// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string>

#include "pqe/kernels.hpp"

namespace pqe::kernels {

namespace {

const KernelTable* choose_default() {
  if (const char* env = std::getenv("PQE_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table()) return avx2_table();
  }
  if (const auto* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{choose_default()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  const KernelTable* t = nullptr;
  if (name == "scalar") {
    t = &scalar_table();
  } else if (name == "avx2") {
    t = avx2_table();
  } else if (name == "auto") {
    t = avx2_table() ? avx2_table() : &scalar_table();
  }
  if (!t) return false;
  slot().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace pqe::kernels
