#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gustcast {

/// Mean absolute error, (1/N) sum |pred - truth|.
double mae(std::span<const double> pred, std::span<const double> truth);

/// MAE as a percentage of farm capacity.
double nmae(std::span<const double> pred, std::span<const double> truth, double capacity);

/// One-step back-shifted loss, percent of capacity:
///   100/capacity * 1/(N-1) * sum_{i<N-1} |pred[i+1] - truth[i]|
/// A pure persistence forecast scores exactly zero.
double back_shifted_loss(std::span<const double> pred, std::span<const double> truth,
                         double capacity);

struct NaiveRatio {
  double value = 0.0;  // may be +infinity
  bool degenerate = false;  // both losses were zero; value reported as 0
};

/// Aligned loss over back-shifted loss. Capacity cancels.
///   e_shift == 0, e > 0 -> +inf (pure persistence)
///   e == 0            -> 0 (perfect; flagged degenerate if e_shift is also 0)
NaiveRatio naive_ratio(std::span<const double> pred, std::span<const double> truth);

struct EvalReport {
  double mae = 0.0;        // MW
  double nmae = 0.0;       // % of capacity
  double back_shifted_nmae = 0.0;
  double naive_ratio = 0.0;
  bool naive_ratio_degenerate = false;
  bool has_naive_character = false;
  double capacity = 0.0;   // MW
  std::size_t n_points = 0;
};

EvalReport evaluate(std::span<const double> pred, std::span<const double> truth, double capacity);

/// Throws Errc::invalid_argument if the report's internal relations do not hold.
void check_consistency(const EvalReport& r);

struct ReplicateStats {
  std::vector<double> values;
  double mean = 0.0;
  double moe95 = 0.0;
};

/// Two-sided 97.5% Student-t quantile for `df` degrees of freedom.
double student_t_975(std::size_t df);

/// mean and t(0.975, n-1) * s / sqrt(n), s the sample standard deviation.
ReplicateStats margin_of_error_95(std::span<const double> values);

/// One row of the evaluation CSV.
struct EvalRow {
  std::string model;
  double nmae_pct = 0.0;
  bool has_moe = false;
  double moe95_pct = 0.0;
  double naive_ratio = 0.0;
  double mae_mw = 0.0;
  std::size_t n_points = 0;
};

inline constexpr const char* kEvalCsvHeader = "model,nmae_pct,moe95_pct,naive_ratio,mae_mw,n_points";

EvalRow to_row(const std::string& model, const EvalReport& r);
void write_eval_csv(std::ostream& os, std::span<const EvalRow> rows);
std::vector<EvalRow> read_eval_csv(std::istream& is);

/// Shortest round-trip decimal; "inf" for +infinity.
std::string format_double(double v);

}  // namespace gustcast
