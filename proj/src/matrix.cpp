#include "modnet/matrix.hpp"

#include <numeric>

namespace modnet {

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

}  // namespace modnet
