#pragma once

#include <string>
#include <vector>

#include "modnet/matrix.hpp"

namespace modnet {

// Paired input/output samples, one row per sample.
struct Dataset {
  Matrix inputs;   // n x M
  Matrix outputs;  // n x N
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;

  std::size_t size() const noexcept { return inputs.rows(); }
  std::size_t input_dim() const noexcept { return inputs.cols(); }
  std::size_t output_dim() const noexcept { return outputs.cols(); }

  // Throws ShapeError if row counts differ, NumericDomainError on NaN/inf.
  void validate() const;
};

enum class RangeMode { kGlobal, kPerDimension };

struct NormalizationOptions {
  double x_min = -3.0;
  double x_max = 3.0;
  double y_min = 0.01;
  double y_max = 0.99;
  RangeMode input_mode = RangeMode::kGlobal;
  RangeMode output_mode = RangeMode::kGlobal;
};

// Affinely rescales inputs to [x_min, x_max] and outputs to [y_min, y_max]
// using the min/max of the whole matrix (kGlobal) or of each column
// (kPerDimension). A zero range throws DegenerateRangeError.
Dataset normalize_data(const Dataset& data, const NormalizationOptions& options);

// Rows [begin, end) of `data`.
Dataset slice_rows(const Dataset& data, std::size_t begin, std::size_t end);

}  // namespace modnet
