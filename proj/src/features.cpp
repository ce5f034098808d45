#include "gustcast/features.hpp"

#include "gustcast/error.hpp"

namespace gustcast {

std::string_view to_string(FeatureMode m) noexcept {
  switch (m) {
    case FeatureMode::power_only: return "power";
    case FeatureMode::direct: return "direct";
    case FeatureMode::pca: return "pca";
  }
  return "unknown";
}

std::size_t input_dim_for(FeatureMode m) noexcept {
  switch (m) {
    case FeatureMode::power_only: return 1;
    case FeatureMode::direct: return kFeatureDim;
    case FeatureMode::pca: return 2;
  }
  return 0;
}

std::optional<FeatureMode> mode_for_input_dim(std::size_t dim) noexcept {
  for (auto m : {FeatureMode::power_only, FeatureMode::direct, FeatureMode::pca})
    if (input_dim_for(m) == dim) return m;
  return std::nullopt;
}

ModelData prepare(const AlignedDataset& ds, FeatureMode mode, const Split& split) {
  if (split.rows != ds.size()) {
    throw Error(Errc::invalid_argument, "prepare: split covers " + std::to_string(split.rows) +
                                            " rows, dataset has " + std::to_string(ds.size()));
  }
  ModelData md;
  md.mode = mode;
  md.split = split;
  md.capacity_mw = ds.capacity_mw;
  md.timestamps = ds.timestamps;
  md.target_mw = ds.target_mw;
  md.norm = fit_normalizer(ds, split);
  const Matrix normalized = md.norm.apply(ds.feature_matrix());

  md.targets.resize(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) md.targets[r] = md.norm.apply(ds.target_mw[r], 0);

  const std::size_t n = ds.size();
  md.inputs = Matrix(n, input_dim_for(mode));
  switch (mode) {
    case FeatureMode::power_only:
      for (std::size_t r = 0; r < n; ++r) md.inputs(r, 0) = normalized(r, 0);
      break;
    case FeatureMode::direct:
      md.inputs = normalized;
      break;
    case FeatureMode::pca: {
      Matrix train_weather(split.train_end, kWeatherDim);
      for (std::size_t r = 0; r < split.train_end; ++r)
        for (std::size_t c = 0; c < kWeatherDim; ++c) train_weather(r, c) = normalized(r, 1 + c);
      md.pca = pca_fit(train_weather);
      for (std::size_t r = 0; r < n; ++r) {
        md.inputs(r, 0) = normalized(r, 0);
        md.inputs(r, 1) = pca_project(*md.pca, normalized.row(r).subspan(1));
      }
      break;
    }
  }
  return md;
}

}  // namespace gustcast
