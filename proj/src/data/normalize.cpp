#include <algorithm>

#include "gustcast/data.hpp"
#include "gustcast/error.hpp"

namespace gustcast {

double Normalizer::apply(double v, std::size_t j) const noexcept {
  return (v - min[j]) / (max[j] - min[j]);
}

double Normalizer::inverse(double v, std::size_t j) const noexcept {
  return min[j] + v * (max[j] - min[j]);
}

Matrix Normalizer::apply(const Matrix& m) const {
  if (m.cols() != dim()) {
    throw Error(Errc::dimension_mismatch, "Normalizer: fitted on " + std::to_string(dim()) +
                                              " features, got " + m.shape_string());
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = apply(m(r, c), c);
  return out;
}

Normalizer fit_normalizer(const Matrix& m, std::size_t begin, std::size_t end,
                          std::span<const std::string_view> names) {
  if (begin >= end || end > m.rows())
    throw Error(Errc::insufficient_data, "fit_normalizer: empty training range");
  Normalizer n;
  n.min.assign(m.cols(), 0.0);
  n.max.assign(m.cols(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double lo = m(begin, c), hi = m(begin, c);
    for (std::size_t r = begin + 1; r < end; ++r) {
      lo = std::min(lo, m(r, c));
      hi = std::max(hi, m(r, c));
    }
    if (!(hi > lo)) {
      const std::string name = c < names.size() ? std::string(names[c]) : "#" + std::to_string(c);
      throw Error(Errc::degenerate_feature,
                  "fit_normalizer: feature " + name + " is constant on the training partition");
    }
    n.min[c] = lo;
    n.max[c] = hi;
  }
  return n;
}

Normalizer fit_normalizer(const AlignedDataset& ds, const Split& split) {
  const auto& names = feature_names();
  return fit_normalizer(ds.feature_matrix(), 0, split.train_end,
                        std::span<const std::string_view>(names.data(), names.size()));
}

}  // namespace gustcast
