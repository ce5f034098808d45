#pragma once

#include <optional>
#include <string_view>

#include "gustcast/data.hpp"
#include "gustcast/pca.hpp"

namespace gustcast {

/// Which inputs a model sees besides power.
enum class FeatureMode {
  power_only,  // [power]
  direct,      // [power | 10 forecast features]
  pca,         // [power | first principal component of the forecasts]
};

std::string_view to_string(FeatureMode m) noexcept;
std::size_t input_dim_for(FeatureMode m) noexcept;
std::optional<FeatureMode> mode_for_input_dim(std::size_t dim) noexcept;

/// Normalized model inputs and targets for one aligned dataset.
struct ModelData {
  FeatureMode mode = FeatureMode::direct;
  Matrix inputs;                 // rows x input_dim
  Vector targets;                // next-step power, normalized
  Vector target_mw;
  std::vector<std::int64_t> timestamps;
  Split split;
  Normalizer norm;               // fitted on the training rows, all kFeatureDim features
  std::optional<PCAModel> pca;   // fitted on normalized training forecasts
  double capacity_mw = 0.0;

  std::size_t rows() const noexcept { return inputs.rows(); }
  std::size_t input_dim() const noexcept { return inputs.cols(); }
  double power_to_mw(double normalized) const noexcept { return norm.inverse(normalized, 0); }
};

/// Fits normalization (and PCA when asked) on the training partition only and
/// applies them to every row.
ModelData prepare(const AlignedDataset& ds, FeatureMode mode, const Split& split);

}  // namespace gustcast
