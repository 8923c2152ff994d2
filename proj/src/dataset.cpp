#include "modnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modnet/errors.hpp"

namespace modnet {

void Dataset::validate() const {
  if (inputs.rows() != outputs.rows())
    throw ShapeError("dataset has " + std::to_string(inputs.rows()) + " input rows but " +
                     std::to_string(outputs.rows()) + " output rows");
  auto finite = [](const Matrix& m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](double v) { return std::isfinite(v); });
  };
  if (!finite(inputs) || !finite(outputs))
    throw NumericDomainError("dataset contains non-finite values");
}

namespace {

void rescale(Matrix& m, RangeMode mode, double lo, double hi, const char* what) {
  if (m.empty()) return;
  auto apply = [&](double mn, double mx, auto&& each) {
    if (!(mx > mn))
      throw DegenerateRangeError(std::string(what) + " data has zero range");
    const double scale = (hi - lo) / (mx - mn);
    each([&](double v) { return lo + (v - mn) * scale; });
  };
  if (mode == RangeMode::kGlobal) {
    auto [mn, mx] = std::minmax_element(m.data().begin(), m.data().end());
    apply(*mn, *mx, [&](auto&& f) {
      for (double& v : m.data()) v = f(v);
    });
    return;
  }
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      mn = std::min(mn, m(r, c));
      mx = std::max(mx, m(r, c));
    }
    apply(mn, mx, [&](auto&& f) {
      for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = f(m(r, c));
    });
  }
}

}  // namespace

Dataset normalize_data(const Dataset& data, const NormalizationOptions& options) {
  data.validate();
  Dataset out = data;
  rescale(out.inputs, options.input_mode, options.x_min, options.x_max, "input");
  rescale(out.outputs, options.output_mode, options.y_min, options.y_max, "output");
  return out;
}

Dataset slice_rows(const Dataset& data, std::size_t begin, std::size_t end) {
  if (begin > end || end > data.size()) throw ArgumentError("row slice out of range");
  Dataset out;
  out.input_names = data.input_names;
  out.output_names = data.output_names;
  out.inputs = Matrix(end - begin, data.input_dim());
  out.outputs = Matrix(end - begin, data.output_dim());
  for (std::size_t r = begin; r < end; ++r) {
    std::copy_n(data.inputs.row(r).begin(), data.input_dim(), out.inputs.row(r - begin).begin());
    std::copy_n(data.outputs.row(r).begin(), data.output_dim(),
                out.outputs.row(r - begin).begin());
  }
  return out;
}

}  // namespace modnet
