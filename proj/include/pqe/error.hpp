// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pqe {

/// Raised when an iterative method or a numerical precondition fails
/// (vanishing denominators, singular systems, non-convergence that the caller
/// asked to be fatal). Input and usage errors use std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pqe
