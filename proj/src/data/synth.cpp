#include <algorithm>
#include <cmath>
#include <numbers>

#include "gustcast/data.hpp"
#include "gustcast/error.hpp"
#include "gustcast/rng.hpp"

namespace gustcast {

namespace {

constexpr double kArCoeff = 0.9;
constexpr double kNoiseSd = 0.02;
constexpr std::size_t kStepsPerDay = 288;

// Per-lead forecast error on the driver; grows with lead time.
constexpr std::array<double, 2> kForecastErrorSd = {0.15, 0.3};

}  // namespace

SynthData synth_generate(std::uint64_t seed, std::size_t n_points, const SynthOptions& opt) {
  if (n_points == 0 || n_points % kStepsPerHour != 0) {
    throw Error(Errc::invalid_argument,
                "synth_generate: point count must be a positive multiple of 12, got " +
                    std::to_string(n_points));
  }
  if (!(opt.capacity_mw > 0.0)) throw Error(Errc::invalid_argument, "capacity must be positive");
  Rng rng(seed);
  const std::size_t hours = n_points / kStepsPerHour;

  // Driver knots for every hour plus the lookahead needed by the forecasts.
  const std::size_t knots = hours + kForecastLeads.back() + 1;
  std::vector<double> w(knots);
  const double innovation_sd = std::sqrt(1.0 - kArCoeff * kArCoeff);
  w[0] = rng.normal();
  for (std::size_t k = 1; k < knots; ++k) w[k] = kArCoeff * w[k - 1] + innovation_sd * rng.normal();

  SynthData out;
  out.power.capacity_mw = opt.capacity_mw;
  out.power.timestamps.reserve(n_points);
  out.power.power_mw.reserve(n_points);
  for (std::size_t t = 0; t < n_points; ++t) {
    const std::size_t hour = t / kStepsPerHour;
    const double frac = static_cast<double>(t % kStepsPerHour) / kStepsPerHour;
    const double driver = w[hour] + frac * (w[hour + 1] - w[hour]);
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / kStepsPerDay;
    const double level = 0.5 + 0.3 * std::sin(phase) + 0.1 * driver + rng.normal(0.0, kNoiseSd);
    out.power.timestamps.push_back(opt.start_epoch + static_cast<std::int64_t>(t) * kPowerStepSeconds);
    out.power.power_mw.push_back(opt.capacity_mw * std::clamp(level, 0.0, 1.0));
  }

  // One issue hour per power hour.
  const std::size_t weather_hours = hours;
  out.weather.timestamps.reserve(weather_hours);
  out.weather.forecasts.resize(weather_hours);
  for (std::size_t k = 0; k < weather_hours; ++k) {
    out.weather.timestamps.push_back(opt.start_epoch +
                                     static_cast<std::int64_t>(k) * kWeatherStepSeconds);
    for (std::size_t l = 0; l < kForecastLeads.size(); ++l) {
      const std::size_t valid = std::min(k + kForecastLeads[l], knots - 1);
      const double f = w[valid] + rng.normal(0.0, kForecastErrorSd[l]);
      WeatherSample s;
      s.pressure_pa = 101325.0 - 600.0 * f + rng.normal(0.0, 80.0);
      s.ground_temp_k = 285.0 + 1.5 * f + rng.normal(0.0, 0.6);
      s.temp2m_k = 284.0 + 1.2 * f + rng.normal(0.0, 0.5);
      s.rel_humidity_pct = std::clamp(70.0 - 8.0 * f + rng.normal(0.0, 3.0), 0.0, 100.0);
      s.gust_ms = std::max(0.0, 9.0 + 3.0 * f + rng.normal(0.0, 0.8));
      out.weather.forecasts[k][l] = s;
    }
  }
  return out;
}

}  // namespace gustcast
