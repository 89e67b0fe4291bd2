#pragma once

#include "holofocus/grid.hpp"

namespace holofocus::detail {

enum class FftDirection { forward, inverse };

/// In-place unitary 2-D DFT (scaled by 1/sqrt(rows * cols)). Plans are cached
/// per shape and direction; execution is safe from several threads.
void fft2_inplace(ComplexGrid& grid, FftDirection direction);

}  // namespace holofocus::detail
