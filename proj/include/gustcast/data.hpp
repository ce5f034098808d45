#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gustcast/linalg.hpp"

namespace gustcast {

inline constexpr std::int64_t kPowerStepSeconds = 300;
inline constexpr std::int64_t kWeatherStepSeconds = 3600;
inline constexpr std::size_t kStepsPerHour = 12;
inline constexpr std::size_t kWeatherParams = 5;
inline constexpr std::array<int, 2> kForecastLeads = {1, 2};
inline constexpr std::size_t kWeatherDim = kWeatherParams * kForecastLeads.size();
/// [power | 5 parameters at lead 1 | 5 parameters at lead 2]
inline constexpr std::size_t kFeatureDim = 1 + kWeatherDim;

/// Feature names in row order.
const std::array<std::string_view, kFeatureDim>& feature_names() noexcept;

/// Seconds since the Unix epoch <-> "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t epoch_seconds);
std::optional<std::int64_t> parse_iso8601(std::string_view s) noexcept;

struct PowerSeries {
  std::vector<std::int64_t> timestamps;  // 300 s spacing
  Vector power_mw;
  double capacity_mw = 0.0;

  std::size_t size() const noexcept { return timestamps.size(); }
};

/// Forecast of the five tracked parameters for one valid time.
struct WeatherSample {
  double pressure_pa = 0.0;
  double ground_temp_k = 0.0;
  double temp2m_k = 0.0;
  double rel_humidity_pct = 0.0;
  double gust_ms = 0.0;
};

struct WeatherSeries {
  std::vector<std::int64_t> timestamps;  // issue hour, on the hour
  std::vector<std::array<WeatherSample, kForecastLeads.size()>> forecasts;  // by lead

  std::size_t size() const noexcept { return timestamps.size(); }
  std::array<double, kWeatherDim> feature_vector(std::size_t hour_index) const;
};

// power CSV:   timestamp,power_mw
// weather CSV: timestamp,lead_hours,pressure_pa,ground_temp_k,temp2m_k,rel_humidity_pct,gust_ms
inline constexpr const char* kPowerCsvHeader = "timestamp,power_mw";
inline constexpr const char* kWeatherCsvHeader =
    "timestamp,lead_hours,pressure_pa,ground_temp_k,temp2m_k,rel_humidity_pct,gust_ms";

PowerSeries read_power_csv(std::istream& is, double capacity_mw);
WeatherSeries read_weather_csv(std::istream& is);
PowerSeries load_power_csv(const std::filesystem::path& path, double capacity_mw);
WeatherSeries load_weather_csv(const std::filesystem::path& path);

void write_power_csv(std::ostream& os, const PowerSeries& s);
void write_weather_csv(std::ostream& os, const WeatherSeries& s);

/// Power rows joined with the forecast block of the hour containing them.
struct AlignedDataset {
  std::vector<std::int64_t> timestamps;
  Vector power_mw;
  Matrix weather;       // rows x kWeatherDim, block-held per hour
  Vector target_mw;     // power one step later
  double capacity_mw = 0.0;

  std::size_t size() const noexcept { return timestamps.size(); }
  /// [power | weather] for one row.
  Vector features(std::size_t row) const;
  /// rows x kFeatureDim.
  Matrix feature_matrix() const;
};

/// Joins each 5-minute row to its hour's forecasts. Rows outside the weather
/// span (and leading rows before the first full hour) are trimmed; the last
/// row has no target and is dropped. Missing interior hours raise
/// Errc::coverage_gap listing each one.
AlignedDataset align(const PowerSeries& power, const WeatherSeries& weather);

/// Contiguous partition: [0, train_end) train, [train_end, test_begin)
/// validation, [test_begin, rows) test.
struct Split {
  std::size_t train_end = 0;
  std::size_t test_begin = 0;
  std::size_t rows = 0;

  std::size_t validation_size() const noexcept { return test_begin - train_end; }
  std::size_t test_size() const noexcept { return rows - test_begin; }
};

Split split(std::size_t rows, double train_frac = 0.8, std::size_t test_len = 1000);

/// Per-feature min-max scaling to [0, 1] over the training rows. Values
/// outside the training range map outside [0, 1]; nothing is clipped.
struct Normalizer {
  Vector min;
  Vector max;

  std::size_t dim() const noexcept { return min.size(); }
  double apply(double v, std::size_t feature) const noexcept;
  double inverse(double v, std::size_t feature) const noexcept;
  Matrix apply(const Matrix& m) const;
};

/// Fits on rows [begin, end) of `m`. Throws Errc::degenerate_feature naming
/// any feature that is constant there.
Normalizer fit_normalizer(const Matrix& m, std::size_t begin, std::size_t end,
                          std::span<const std::string_view> names = {});
Normalizer fit_normalizer(const AlignedDataset& ds, const Split& split);

struct SynthOptions {
  double capacity_mw = 16.0;
  std::int64_t start_epoch = 1546300800;  // 2019-01-01T00:00:00Z
};

struct SynthData {
  PowerSeries power;
  WeatherSeries weather;
};

/// Deterministic desk-scale stand-in for a farm plus forecasts.
///
///   power(t) = cap * clamp(0.5 + 0.3 sin(2 pi t / 288) + 0.1 w(t) + e_t, 0, 1)
///
/// w is an hourly AR(1) driver (coefficient 0.9, unit stationary variance)
/// interpolated linearly inside each hour, e_t ~ N(0, 0.02^2). Forecast rows
/// carry noisy affine images of w at the lead's valid time, so they hold
/// real information about upcoming power. There is one forecast issue hour
/// per power hour.
SynthData synth_generate(std::uint64_t seed, std::size_t n_points, const SynthOptions& opt = {});

}  // namespace gustcast
