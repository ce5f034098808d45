#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "gustcast/data.hpp"
#include "gustcast/error.hpp"
#include "gustcast/metrics.hpp"

namespace gustcast {

namespace {

constexpr std::array<std::string_view, kFeatureDim> kFeatureNames = {
    "power_mw",
    "l1_pressure_pa", "l1_ground_temp_k", "l1_temp2m_k", "l1_rel_humidity_pct", "l1_gust_ms",
    "l2_pressure_pa", "l2_ground_temp_k", "l2_temp2m_k", "l2_rel_humidity_pct", "l2_gust_ms"};

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const char* file, std::size_t line) {
  return std::string(file) + " line " + std::to_string(line) + ": ";
}

double parse_field(const char* file, std::size_t line, std::string_view name, std::string_view s) {
  if (s.empty()) throw Error(Errc::missing_field, where(file, line) + "missing " + std::string(name));
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(Errc::parse_error,
                where(file, line) + "bad " + std::string(name) + " '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_time(const char* file, std::size_t line, std::string_view s) {
  if (s.empty()) throw Error(Errc::missing_field, where(file, line) + "missing timestamp");
  auto t = parse_iso8601(s);
  if (!t) throw Error(Errc::parse_error, where(file, line) + "bad timestamp '" + std::string(s) + "'");
  return *t;
}

bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& is, const char* file, const char* header) {
  std::string line;
  if (!next_line(is, line) || line != header) {
    throw Error(Errc::parse_error, where(file, 1) + "expected header '" + header + "'");
  }
}

}  // namespace

const std::array<std::string_view, kFeatureDim>& feature_names() noexcept { return kFeatureNames; }

std::string format_iso8601(std::int64_t t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss hms{tp - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

std::optional<std::int64_t> parse_iso8601(std::string_view s) noexcept {
  // YYYY-MM-DDTHH:MM:SS with a trailing Z (or nothing)
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len, int& out) {
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc() && ptr == s.data() + pos + len;
  };
  int y, mo, d, h, mi, se;
  if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi) ||
      !num(17, 2, se)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{unsigned(mo)}, day{unsigned(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 59) return std::nullopt;
  const auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
  return tp.time_since_epoch().count();
}

std::array<double, kWeatherDim> WeatherSeries::feature_vector(std::size_t k) const {
  std::array<double, kWeatherDim> v{};
  for (std::size_t l = 0; l < kForecastLeads.size(); ++l) {
    const auto& w = forecasts[k][l];
    const std::size_t o = l * kWeatherParams;
    v[o + 0] = w.pressure_pa;
    v[o + 1] = w.ground_temp_k;
    v[o + 2] = w.temp2m_k;
    v[o + 3] = w.rel_humidity_pct;
    v[o + 4] = w.gust_ms;
  }
  return v;
}

PowerSeries read_power_csv(std::istream& is, double capacity_mw) {
  constexpr const char* file = "power csv";
  if (!(capacity_mw > 0.0)) throw Error(Errc::invalid_argument, "capacity must be positive");
  expect_header(is, file, kPowerCsvHeader);
  PowerSeries s;
  s.capacity_mw = capacity_mw;
  std::vector<std::size_t> line_of;
  std::string line;
  for (std::size_t line_no = 2; next_line(is, line); ++line_no) {
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 2) {
      throw Error(Errc::missing_field, where(file, line_no) + "expected 2 fields, got " +
                                           std::to_string(f.size()));
    }
    const auto t = parse_time(file, line_no, f[0]);
    const double p = parse_field(file, line_no, "power_mw", f[1]);
    if (p < 0.0 || p > capacity_mw) {
      throw Error(Errc::out_of_range, where(file, line_no) + "power " + std::string(f[1]) +
                                          " MW outside [0, " + format_double(capacity_mw) + "]");
    }
    s.timestamps.push_back(t);
    s.power_mw.push_back(p);
    line_of.push_back(line_no);
  }

  // Ordering is checked over the whole file before spacing, so shuffled rows
  // report as out of order rather than as a gap.
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.timestamps[i] <= s.timestamps[i - 1]) {
      throw Error(Errc::non_monotone, where(file, line_of[i]) + "timestamp " +
                                          format_iso8601(s.timestamps[i]) + " does not follow " +
                                          format_iso8601(s.timestamps[i - 1]));
    }
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto gap = s.timestamps[i] - s.timestamps[i - 1];
    if (gap != kPowerStepSeconds) {
      throw Error(Errc::spacing_violation, where(file, line_of[i]) + "gap of " +
                                               std::to_string(gap) + " s, expected 300 s");
    }
  }
  return s;
}

WeatherSeries read_weather_csv(std::istream& is) {
  constexpr const char* file = "weather csv";
  constexpr std::array<std::string_view, 5> names = {"pressure_pa", "ground_temp_k", "temp2m_k",
                                                     "rel_humidity_pct", "gust_ms"};
  expect_header(is, file, kWeatherCsvHeader);
  WeatherSeries s;
  std::size_t expected_lead = 0;  // index into kForecastLeads for the next row
  std::string line;
  std::size_t line_no = 1;
  while (next_line(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 7) {
      throw Error(Errc::missing_field, where(file, line_no) + "expected 7 fields, got " +
                                           std::to_string(f.size()));
    }
    const auto t = parse_time(file, line_no, f[0]);
    const double lead = parse_field(file, line_no, "lead_hours", f[1]);
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) v[k] = parse_field(file, line_no, names[k], f[2 + k]);

    if (t % kWeatherStepSeconds != 0) {
      throw Error(Errc::spacing_violation, where(file, line_no) + "timestamp " +
                                               std::string(f[0]) + " is not on the hour");
    }
    if (v[3] < 0.0 || v[3] > 100.0) {
      throw Error(Errc::out_of_range, where(file, line_no) + "relative humidity " +
                                          std::string(f[5]) + " outside [0, 100]");
    }
    if (expected_lead == 0) {
      if (!s.timestamps.empty() && t <= s.timestamps.back()) {
        throw Error(Errc::non_monotone, where(file, line_no) + "timestamp " + std::string(f[0]) +
                                            " does not follow " +
                                            format_iso8601(s.timestamps.back()));
      }
      s.timestamps.push_back(t);
      s.forecasts.emplace_back();
    } else if (t != s.timestamps.back()) {
      throw Error(Errc::missing_field, where(file, line_no) + "hour " +
                                           format_iso8601(s.timestamps.back()) + " lacks lead " +
                                           std::to_string(kForecastLeads[expected_lead]));
    }
    if (lead != kForecastLeads[expected_lead]) {
      throw Error(Errc::parse_error, where(file, line_no) + "expected lead " +
                                         std::to_string(kForecastLeads[expected_lead]) + ", got " +
                                         std::string(f[1]));
    }
    s.forecasts.back()[expected_lead] = {v[0], v[1], v[2], v[3], v[4]};
    expected_lead = (expected_lead + 1) % kForecastLeads.size();
  }
  if (expected_lead != 0) {
    throw Error(Errc::missing_field, std::string(file) + ": final hour " +
                                         format_iso8601(s.timestamps.back()) + " is incomplete");
  }
  return s;
}

PowerSeries load_power_csv(const std::filesystem::path& path, double capacity_mw) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io_error, "cannot open " + path.string());
  return read_power_csv(is, capacity_mw);
}

WeatherSeries load_weather_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io_error, "cannot open " + path.string());
  return read_weather_csv(is);
}

void write_power_csv(std::ostream& os, const PowerSeries& s) {
  os << kPowerCsvHeader << '\n';
  for (std::size_t i = 0; i < s.size(); ++i)
    os << format_iso8601(s.timestamps[i]) << ',' << format_double(s.power_mw[i]) << '\n';
}

void write_weather_csv(std::ostream& os, const WeatherSeries& s) {
  os << kWeatherCsvHeader << '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto ts = format_iso8601(s.timestamps[k]);
    for (std::size_t l = 0; l < kForecastLeads.size(); ++l) {
      const auto& w = s.forecasts[k][l];
      os << ts << ',' << kForecastLeads[l] << ',' << format_double(w.pressure_pa) << ','
         << format_double(w.ground_temp_k) << ',' << format_double(w.temp2m_k) << ','
         << format_double(w.rel_humidity_pct) << ',' << format_double(w.gust_ms) << '\n';
    }
  }
}

}  // namespace gustcast
