#include "gustcast/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gustcast/error.hpp"
#include "gustcast/metrics.hpp"

namespace gustcast {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_num(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

using Setter = std::function<std::string(RunConfig&, std::string_view)>;  // empty = ok

template <class Get>
Setter count_via(Get get, std::size_t min) {
  return [=](RunConfig& c, std::string_view v) -> std::string {
    std::size_t x = 0;
    if (!parse_num(v, x)) return "expected a non-negative integer";
    if (x < min) return "must be >= " + std::to_string(min);
    get(c) = x;
    return {};
  };
}

template <class Get>
Setter real_via(Get get, double lo, double hi, bool open_lo = false) {
  return [=](RunConfig& c, std::string_view v) -> std::string {
    double x = 0.0;
    if (!parse_num(v, x)) return "expected a number";
    if (x < lo || x > hi || (open_lo && x == lo))
      return "must lie in " + std::string(open_lo ? "(" : "[") + format_double(lo) + ", " +
             format_double(hi) + "]";
    get(c) = x;
    return {};
  };
}

template <class Get>
Setter flag_via(Get get) {
  return [=](RunConfig& c, std::string_view v) -> std::string {
    if (v == "1" || v == "true") get(c) = true;
    else if (v == "0" || v == "false") get(c) = false;
    else return "expected 0 or 1";
    return {};
  };
}

template <class Get>
Setter u64_via(Get get) {
  return [=](RunConfig& c, std::string_view v) -> std::string {
    std::uint64_t x = 0;
    if (!parse_num(v, x)) return "expected an unsigned 64-bit integer";
    get(c) = x;
    return {};
  };
}

const std::vector<std::pair<std::string_view, Setter>>& schema() {
  static const std::vector<std::pair<std::string_view, Setter>> s = {
      {"data.power", [](RunConfig& c, std::string_view v) -> std::string {
         if (v.empty()) return "empty path";
         c.power_csv = std::filesystem::path(std::string(v));
         return {};
       }},
      {"data.weather", [](RunConfig& c, std::string_view v) -> std::string {
         if (v.empty()) return "empty path";
         c.weather_csv = std::filesystem::path(std::string(v));
         return {};
       }},
      {"synth.points", count_via([](RunConfig& c) -> std::size_t& { return c.synth_points; }, 24)},
      {"synth.seed", u64_via([](RunConfig& c) -> std::uint64_t& { return c.synth_seed; })},
      {"capacity_mw", real_via([](RunConfig& c) -> double& { return c.capacity_mw; }, 0.0, 1e9, true)},
      {"train_frac", real_via([](RunConfig& c) -> double& { return c.train_frac; }, 0.0, 1.0, true)},
      {"test_len", count_via([](RunConfig& c) -> std::size_t& { return c.test_len; }, 2)},
      {"family", [](RunConfig& c, std::string_view v) -> std::string {
         auto f = parse_family(v);
         if (!f) return "expected generic or mlstm";
         c.family = *f;
         return {};
       }},
      {"cifg", flag_via([](RunConfig& c) -> bool& { return c.cifg; })},
      {"peephole", flag_via([](RunConfig& c) -> bool& { return c.peephole; })},
      {"compression", flag_via([](RunConfig& c) -> bool& { return c.compression; })},
      {"weather", flag_via([](RunConfig& c) -> bool& { return c.weather; })},
      {"pca", flag_via([](RunConfig& c) -> bool& { return c.pca; })},
      {"learning_rate",
       real_via([](RunConfig& c) -> double& { return c.train.hyper.learning_rate; }, 0.0, 10.0)},
      {"cell_dim", count_via([](RunConfig& c) -> std::size_t& { return c.train.hyper.cell_dim; }, 1)},
      {"block_len", count_via([](RunConfig& c) -> std::size_t& { return c.train.hyper.block_len; }, 2)},
      {"epochs", count_via([](RunConfig& c) -> std::size_t& { return c.train.epochs; }, 1)},
      {"seed", u64_via([](RunConfig& c) -> std::uint64_t& { return c.train.seed; })},
      {"replicates", count_via([](RunConfig& c) -> std::size_t& { return c.train.replicates; }, 1)},
      {"clip_norm", real_via([](RunConfig& c) -> double& { return c.train.clip_norm; }, 0.0, 1e12)},
      {"history_every", count_via([](RunConfig& c) -> std::size_t& { return c.train.history_every; }, 1)},
      {"eval_warmup", count_via([](RunConfig& c) -> std::size_t& { return c.train.eval_warmup; }, 0)},
      {"loss", [](RunConfig&, std::string_view v) -> std::string {
         return v == "mse" ? std::string() : "only 'mse' is supported";
       }},
      {"ga.population", count_via([](RunConfig& c) -> std::size_t& { return c.ga.population; }, 2)},
      {"ga.partial_epochs", count_via([](RunConfig& c) -> std::size_t& { return c.ga.partial_epochs; }, 1)},
      {"ga.elite", count_via([](RunConfig& c) -> std::size_t& { return c.ga.elite; }, 1)},
      {"ga.generations", count_via([](RunConfig& c) -> std::size_t& { return c.ga.generations; }, 1)},
      {"ga.mutation_rate", real_via([](RunConfig& c) -> double& { return c.ga.mutation_rate; }, 0.0, 1.0)},
      {"out", [](RunConfig& c, std::string_view v) -> std::string {
         if (v.empty()) return "empty path";
         c.out_dir = std::filesystem::path(std::string(v));
         return {};
       }},
  };
  return s;
}

const Setter* find_setter(std::string_view key) {
  for (const auto& [k, s] : schema())
    if (k == key) return &s;
  return nullptr;
}

// Cross-key rules; appends messages to `errors`.
void check_combinations(const RunConfig& c, std::vector<std::string>& errors) {
  if (c.power_csv.has_value() != c.weather_csv.has_value())
    errors.push_back("data.power and data.weather must be given together");
  if (c.power_csv && c.synth_points)
    errors.push_back("give either data.* paths or synth.points, not both");
  if (c.synth_points % 12 != 0) errors.push_back("synth.points must be a multiple of 12");
  if (c.family == Family::generic && (c.cifg || c.peephole || c.compression))
    errors.push_back("family=generic does not take cifg, peephole or compression");
  if (!c.weather && (c.pca || c.compression))
    errors.push_back("pca and compression need weather=1");
  if (c.pca && c.compression) errors.push_back("pca and compression are alternatives; pick one");
  if (c.ga.elite >= c.ga.population) errors.push_back("ga.elite must be < ga.population");
}

}  // namespace

FeatureMode RunConfig::feature_mode() const noexcept {
  if (!weather) return FeatureMode::power_only;
  return pca ? FeatureMode::pca : FeatureMode::direct;
}

VariantConfig RunConfig::variant() const {
  VariantConfig v;
  v.family = family;
  v.cifg = cifg;
  v.peephole = peephole;
  v.compression = compression;
  v.input_dim = input_dim_for(feature_mode());
  v.cell_dim = train.hyper.cell_dim;
  v.validate();
  return v;
}

std::string RunConfig::model_name() const {
  return variant().name() + "/" + std::string(to_string(feature_mode()));
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& [name, _] : schema()) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_run_config(std::string_view text, const RunConfig& defaults) {
  RunConfig cfg = defaults;
  std::vector<std::string> errors;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == line.npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const Setter* set = find_setter(key);
    if (!set) {
      errors.push_back(where + "unknown key '" + std::string(key) + "'");
      continue;
    }
    if (auto it = seen.find(key); it != seen.end()) {
      errors.push_back(where + "duplicate key '" + std::string(key) + "' (first on line " +
                       std::to_string(it->second) + ")");
      continue;
    }
    seen.emplace(std::string(key), line_no);
    if (auto msg = (*set)(cfg, value); !msg.empty())
      errors.push_back(where + std::string(key) + ": " + msg);
  }
  check_combinations(cfg, errors);
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(Errc::config_error, msg);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const RunConfig& defaults) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io_error, "cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_run_config(ss.str(), defaults);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == assignment.npos)
    throw Error(Errc::config_error, "override '" + std::string(assignment) + "' is not key=value");
  const auto key = trim(assignment.substr(0, eq));
  const Setter* set = find_setter(key);
  if (!set) throw Error(Errc::config_error, "unknown key '" + std::string(key) + "'");
  RunConfig next = cfg;
  if (auto msg = (*set)(next, trim(assignment.substr(eq + 1))); !msg.empty())
    throw Error(Errc::config_error, std::string(key) + ": " + msg);
  std::vector<std::string> errors;
  check_combinations(next, errors);
  if (!errors.empty()) throw Error(Errc::config_error, errors.front());
  cfg = std::move(next);
}

std::string genome_fragment(const Genome& g) {
  return "learning_rate = " + format_double(g.learning_rate) + "\ncell_dim = " +
         std::to_string(g.cell_dim) + "\nblock_len = " + std::to_string(g.block_len) + "\n";
}

}  // namespace gustcast
