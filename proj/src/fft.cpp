#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace holofocus::detail {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, FftDirection direction) {
    const Key key{rows, cols, direction == FftDirection::forward};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning scribbles over its buffers, so plan on scratch storage and
    // execute later on arbitrary (possibly unaligned) arrays.
    ComplexGrid scratch(rows, cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf,
                                      key.forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  struct Key {
    std::size_t rows;
    std::size_t cols;
    bool forward;
    bool operator<(const Key& o) const {
      return std::tie(rows, cols, forward) < std::tie(o.rows, o.cols, o.forward);
    }
  };
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft2_inplace(ComplexGrid& grid, FftDirection direction) {
  fftw_plan plan = cache().get(grid.rows(), grid.cols(), direction);
  auto* buf = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(plan, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (Complex& v : grid.values()) v *= scale;
}

}  // namespace holofocus::detail
