#include <algorithm>
#include <unordered_map>

#include "gustcast/data.hpp"
#include "gustcast/error.hpp"

namespace gustcast {

Vector AlignedDataset::features(std::size_t row) const {
  Vector v(kFeatureDim);
  v[0] = power_mw[row];
  const auto w = weather.row(row);
  std::copy(w.begin(), w.end(), v.begin() + 1);
  return v;
}

Matrix AlignedDataset::feature_matrix() const {
  Matrix m(size(), kFeatureDim);
  for (std::size_t r = 0; r < size(); ++r) {
    m(r, 0) = power_mw[r];
    const auto w = weather.row(r);
    std::copy(w.begin(), w.end(), m.row(r).begin() + 1);
  }
  return m;
}

AlignedDataset align(const PowerSeries& power, const WeatherSeries& weather) {
  if (power.size() < 2) throw Error(Errc::insufficient_data, "align: need at least 2 power rows");
  if (weather.size() == 0) throw Error(Errc::coverage_gap, "align: weather series is empty");

  const std::int64_t first_hour = weather.timestamps.front();
  const std::int64_t last_hour = weather.timestamps.back();
  std::unordered_map<std::int64_t, std::size_t> hour_index;
  for (std::size_t k = 0; k < weather.size(); ++k) hour_index.emplace(weather.timestamps[k], k);

  // Intersection, starting on a full hour so every weather block spans 12 rows.
  std::size_t begin = 0;
  while (begin < power.size() && (power.timestamps[begin] < first_hour ||
                                  power.timestamps[begin] % kWeatherStepSeconds != 0)) {
    ++begin;
  }
  std::size_t end = power.size();
  while (end > begin && power.timestamps[end - 1] >= last_hour + kWeatherStepSeconds) --end;
  if (end - begin < 2) {
    throw Error(Errc::coverage_gap, "align: power and weather do not overlap (power " +
                                        format_iso8601(power.timestamps.front()) + " .. " +
                                        format_iso8601(power.timestamps.back()) + ", weather " +
                                        format_iso8601(first_hour) + " .. " +
                                        format_iso8601(last_hour) + ")");
  }

  std::vector<std::int64_t> missing;
  for (std::size_t r = begin; r < end; ++r) {
    const std::int64_t hour = power.timestamps[r] - power.timestamps[r] % kWeatherStepSeconds;
    if (!hour_index.count(hour) && (missing.empty() || missing.back() != hour))
      missing.push_back(hour);
  }
  if (!missing.empty()) {
    std::string msg = "align: weather is missing hour(s)";
    for (auto h : missing) msg += " " + format_iso8601(h);
    throw Error(Errc::coverage_gap, msg);
  }

  AlignedDataset ds;
  ds.capacity_mw = power.capacity_mw;
  const std::size_t n = end - begin - 1;  // last row has no next-step target
  ds.timestamps.reserve(n);
  ds.power_mw.reserve(n);
  ds.target_mw.reserve(n);
  ds.weather = Matrix(n, kWeatherDim);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t src = begin + r;
    const std::int64_t hour = power.timestamps[src] - power.timestamps[src] % kWeatherStepSeconds;
    const auto w = weather.feature_vector(hour_index.at(hour));
    std::copy(w.begin(), w.end(), ds.weather.row(r).begin());
    ds.timestamps.push_back(power.timestamps[src]);
    ds.power_mw.push_back(power.power_mw[src]);
    ds.target_mw.push_back(power.power_mw[src + 1]);
  }
  return ds;
}

Split split(std::size_t rows, double train_frac, std::size_t test_len) {
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw Error(Errc::invalid_argument, "split: train fraction must lie in (0, 1)");
  const auto train_end = static_cast<std::size_t>(static_cast<double>(rows) * train_frac);
  if (test_len == 0 || rows < test_len || rows - test_len <= train_end || train_end < 2) {
    // Smallest n with n - test_len > floor(n * frac).
    std::size_t need = test_len + 1;
    while (need - test_len <= static_cast<std::size_t>(static_cast<double>(need) * train_frac))
      ++need;
    throw Error(Errc::insufficient_data, "split: " + std::to_string(rows) +
                                             " rows leave no validation remainder; need at least " +
                                             std::to_string(need));
  }
  return {train_end, rows - test_len, rows};
}

}  // namespace gustcast
