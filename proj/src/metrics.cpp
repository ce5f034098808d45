#include "gustcast/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gustcast/error.hpp"

namespace gustcast {

namespace {

void check_pair(const char* op, std::span<const double> pred, std::span<const double> truth,
                std::size_t min_len) {
  if (pred.size() != truth.size()) {
    throw Error(Errc::dimension_mismatch, std::string(op) + ": prediction has " +
                                              std::to_string(pred.size()) + " points, truth has " +
                                              std::to_string(truth.size()));
  }
  if (pred.size() < min_len) {
    throw Error(Errc::insufficient_data, std::string(op) + ": need at least " +
                                             std::to_string(min_len) + " points");
  }
}

void check_capacity(double capacity) {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw Error(Errc::invalid_argument, "capacity must be positive, got " + format_double(capacity));
  }
}

double shifted_mean_abs(std::span<const double> pred, std::span<const double> truth) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < truth.size(); ++i) s += std::abs(pred[i + 1] - truth[i]);
  return s / static_cast<double>(truth.size() - 1);
}

// Two-sided 95% critical values, df = 1..30.
constexpr std::array<double, 30> kT975 = {
    12.706204736, 4.302652730, 3.182446305, 2.776445105, 2.570581836, 2.446911851,
    2.364624252,  2.306004135, 2.262157163, 2.228138852, 2.200985160, 2.178812830,
    2.160368656,  2.144786688, 2.131449546, 2.119905299, 2.109815578, 2.100922040,
    2.093024054,  2.085963447, 2.079613845, 2.073873068, 2.068657610, 2.063898562,
    2.059538553,  2.055529439, 2.051830516, 2.048407142, 2.045229642, 2.042272456};

}  // namespace

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_pair("mae", pred, truth, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
  return s / static_cast<double>(pred.size());
}

double nmae(std::span<const double> pred, std::span<const double> truth, double capacity) {
  check_capacity(capacity);
  return 100.0 * mae(pred, truth) / capacity;
}

double back_shifted_loss(std::span<const double> pred, std::span<const double> truth,
                         double capacity) {
  check_capacity(capacity);
  check_pair("back_shifted_loss", pred, truth, 2);
  return 100.0 * shifted_mean_abs(pred, truth) / capacity;
}

NaiveRatio naive_ratio(std::span<const double> pred, std::span<const double> truth) {
  check_pair("naive_ratio", pred, truth, 2);
  const double aligned = mae(pred, truth);
  const double shifted = shifted_mean_abs(pred, truth);
  if (aligned == 0.0) return {0.0, shifted == 0.0};
  if (shifted == 0.0) return {std::numeric_limits<double>::infinity(), false};
  return {aligned / shifted, false};
}

EvalReport evaluate(std::span<const double> pred, std::span<const double> truth,
                    double capacity) {
  check_capacity(capacity);
  EvalReport r;
  r.capacity = capacity;
  r.n_points = pred.size();
  r.mae = mae(pred, truth);
  r.nmae = 100.0 * r.mae / capacity;
  r.back_shifted_nmae = back_shifted_loss(pred, truth, capacity);
  const auto nr = naive_ratio(pred, truth);
  r.naive_ratio = nr.value;
  r.naive_ratio_degenerate = nr.degenerate;
  r.has_naive_character = nr.value > 1.0;
  return r;
}

void check_consistency(const EvalReport& r) {
  const double expect = 100.0 * r.mae / r.capacity;
  if (std::abs(r.nmae - expect) > 1e-12 * std::max(1.0, std::abs(expect)))
    throw Error(Errc::invalid_argument, "EvalReport: nmae disagrees with mae/capacity");
  if (r.has_naive_character != (r.naive_ratio > 1.0))
    throw Error(Errc::invalid_argument, "EvalReport: naive flag disagrees with ratio");
  if (!(r.naive_ratio >= 0.0))
    throw Error(Errc::invalid_argument, "EvalReport: negative naive ratio");
}

double student_t_975(std::size_t df) {
  if (df == 0) throw Error(Errc::invalid_argument, "student_t_975: df must be >= 1");
  if (df <= kT975.size()) return kT975[df - 1];
  // Beyond the table, interpolate linearly in 1/df between standard anchors.
  struct Anchor { double inv_df, t; };
  constexpr std::array<Anchor, 5> anchors = {{{1.0 / 30, 2.042272456},
                                              {1.0 / 40, 2.021075390},
                                              {1.0 / 60, 2.000297822},
                                              {1.0 / 120, 1.979930405},
                                              {0.0, 1.959963985}}};
  const double x = 1.0 / static_cast<double>(df);
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    const auto& a = anchors[k];
    const auto& b = anchors[k + 1];
    if (x <= a.inv_df && x >= b.inv_df) {
      const double w = (x - b.inv_df) / (a.inv_df - b.inv_df);
      return b.t + w * (a.t - b.t);
    }
  }
  return anchors.back().t;
}

ReplicateStats margin_of_error_95(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error(Errc::insufficient_data, "margin_of_error_95: need at least 2 values, got " +
                                             std::to_string(n));
  }
  ReplicateStats st;
  st.values.assign(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  st.moe95 = student_t_975(n - 1) * sd / std::sqrt(static_cast<double>(n));
  return st;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

EvalRow to_row(const std::string& model, const EvalReport& r) {
  EvalRow row;
  row.model = model;
  row.nmae_pct = r.nmae;
  row.naive_ratio = r.naive_ratio;
  row.mae_mw = r.mae;
  row.n_points = r.n_points;
  return row;
}

void write_eval_csv(std::ostream& os, std::span<const EvalRow> rows) {
  os << kEvalCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.model << ',' << format_double(r.nmae_pct) << ','
       << (r.has_moe ? format_double(r.moe95_pct) : std::string()) << ','
       << format_double(r.naive_ratio) << ',' << format_double(r.mae_mw) << ',' << r.n_points
       << '\n';
  }
}

std::vector<EvalRow> read_eval_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kEvalCsvHeader)
    throw Error(Errc::parse_error, "eval csv: bad header");
  auto number = [](const std::string& s, std::size_t line_no) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(Errc::parse_error, "eval csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
  };
  std::vector<EvalRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 6)
      throw Error(Errc::parse_error, "eval csv line " + std::to_string(line_no) + ": expected 6 fields");
    EvalRow r;
    r.model = f[0];
    r.nmae_pct = number(f[1], line_no);
    r.has_moe = !f[2].empty();
    if (r.has_moe) r.moe95_pct = number(f[2], line_no);
    r.naive_ratio = number(f[3], line_no);
    r.mae_mw = number(f[4], line_no);
    r.n_points = static_cast<std::size_t>(number(f[5], line_no));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gustcast
