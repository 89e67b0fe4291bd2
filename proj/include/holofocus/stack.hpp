#pragma once

#include <cstddef>
#include <vector>

#include "holofocus/grid.hpp"

namespace holofocus {

/// Reconstructed amplitude slices ordered by increasing distance. Amplitudes
/// are normalized once by the stack-wide maximum.
struct ReconstructionStack {
  std::vector<GrayImage> slices;
  std::vector<double> distances;
  std::vector<int> slice_index;

  std::size_t size() const { return slices.size(); }
  bool empty() const { return slices.empty(); }

  /// 0 at the farthest slice, negative towards the nearest one.
  int reim_index(std::size_t i) const {
    return slice_index[i] - static_cast<int>(slices.size()) + 1;
  }
};

}  // namespace holofocus
