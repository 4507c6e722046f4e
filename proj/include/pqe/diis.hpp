// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace pqe {

struct DiisResult {
  std::vector<double> amplitudes;
  std::vector<double> coefficients;  // empty when the fallback was used
  bool fallback = false;
};

/// Pulay extrapolation: minimize |sum c_i e_i| subject to sum c_i = 1 and
/// return sum c_i t_i. When the bordered system is singular (or fewer than two
/// entries are given) the last amplitude vector is returned unchanged and
/// `fallback` is set.
DiisResult diis_extrapolate(const std::vector<std::vector<double>>& amplitudes,
                            const std::vector<std::vector<double>>& errors);

/// Bounded history feeding diis_extrapolate; the oldest entry is dropped once
/// `depth` is reached.
class Diis {
 public:
  explicit Diis(std::size_t depth = 8) : depth_(depth) {}

  void push(std::vector<double> amplitudes, std::vector<double> error);
  std::size_t size() const { return t_.size(); }
  void clear();
  DiisResult extrapolate() const;

 private:
  std::size_t depth_;
  std::vector<std::vector<double>> t_, e_;
};

}  // namespace pqe
