#include "gustcast/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "gustcast/error.hpp"

namespace gustcast {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(Errc::parse_error, "checkpoint line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

void write_double(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  os.write(buf, ptr - buf);
}

struct LineReader {
  std::istream& is;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(is, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
};

}  // namespace

void write_checkpoint(std::ostream& os, const VariantConfig& cfg, const CellParams& params) {
  params.validate(cfg);
  os << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  os << "family=" << to_string(cfg.family) << " cifg=" << int(cfg.cifg)
     << " peephole=" << int(cfg.peephole) << " compression=" << int(cfg.compression)
     << " input_dim=" << cfg.input_dim << " cell_dim=" << cfg.cell_dim << '\n';
  params.for_each([&](Slot s, const Matrix& m) {
    os << "tensor " << slot_name(s) << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c) os << ' ';
        write_double(os, m(r, c));
      }
      os << '\n';
    }
  });
}

Checkpoint read_checkpoint(std::istream& is) {
  LineReader in{is};
  std::string line;
  if (!in.next(line)) parse_fail(1, "empty file");
  const auto head = split_ws(line);
  if (head.size() != 2 || head[0] != kCheckpointMagic) parse_fail(1, "not a gustcast checkpoint");
  if (head[1] != kCheckpointVersion) {
    throw Error(Errc::version_mismatch, "checkpoint version '" + head[1] + "' unsupported (want " +
                                            kCheckpointVersion + ")");
  }

  if (!in.next(line)) parse_fail(2, "missing variant line");
  std::map<std::string, std::string> kv;
  for (const auto& tok : split_ws(line)) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) parse_fail(2, "malformed field '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto field = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) parse_fail(2, std::string("missing field ") + key);
    return it->second;
  };
  auto flag = [&](const char* key) {
    const auto& v = field(key);
    if (v != "0" && v != "1") parse_fail(2, std::string(key) + " must be 0 or 1");
    return v == "1";
  };
  auto count = [&](const char* key) {
    std::size_t v = 0;
    if (!parse_number(field(key), v)) parse_fail(2, std::string(key) + " is not a count");
    return v;
  };

  Checkpoint ck;
  const auto fam = parse_family(field("family"));
  if (!fam) parse_fail(2, "unknown family '" + field("family") + "'");
  ck.cfg.family = *fam;
  ck.cfg.cifg = flag("cifg");
  ck.cfg.peephole = flag("peephole");
  ck.cfg.compression = flag("compression");
  ck.cfg.input_dim = count("input_dim");
  ck.cfg.cell_dim = count("cell_dim");
  try {
    ck.cfg.validate();
  } catch (const Error& e) {
    throw Error(Errc::shape_inconsistency, std::string("checkpoint variant: ") + e.what());
  }

  std::array<bool, kSlotCount> seen{};
  while (in.next(line)) {
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    std::size_t rows = 0, cols = 0;
    if (tok.size() != 4 || tok[0] != "tensor" || !parse_number(tok[2], rows) ||
        !parse_number(tok[3], cols)) {
      parse_fail(in.line_no, "expected 'tensor <name> <rows> <cols>'");
    }
    const auto slot = slot_from_name(tok[1]);
    if (!slot) parse_fail(in.line_no, "unknown tensor '" + tok[1] + "'");
    const auto k = static_cast<std::size_t>(*slot);
    if (seen[k]) parse_fail(in.line_no, "duplicate tensor '" + tok[1] + "'");
    seen[k] = true;
    const auto want = slot_shape(ck.cfg, *slot);
    if (!want || want->first != rows || want->second != cols) {
      throw Error(Errc::shape_inconsistency,
                  "checkpoint line " + std::to_string(in.line_no) + ": tensor " + tok[1] + " is " +
                      std::to_string(rows) + "x" + std::to_string(cols) + ", variant expects " +
                      (want ? std::to_string(want->first) + "x" + std::to_string(want->second)
                            : std::string("none")));
    }

    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!in.next(line)) parse_fail(in.line_no + 1, "truncated tensor " + tok[1]);
      const auto vals = split_ws(line);
      if (vals.size() != cols) {
        parse_fail(in.line_no, "expected " + std::to_string(cols) + " values, got " +
                                   std::to_string(vals.size()));
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (!parse_number(vals[c], m(r, c))) parse_fail(in.line_no, "bad number '" + vals[c] + "'");
      }
    }
    ck.params.tensors[k] = std::move(m);
  }

  for (std::size_t k = 0; k < kSlotCount; ++k) {
    const auto s = static_cast<Slot>(k);
    if (slot_shape(ck.cfg, s) && !seen[k]) {
      throw Error(Errc::shape_inconsistency,
                  "checkpoint is missing tensor " + std::string(slot_name(s)));
    }
  }
  ck.params.validate(ck.cfg);
  return ck;
}

void save_checkpoint(const VariantConfig& cfg, const CellParams& params,
                     const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path.string());
  write_checkpoint(os, cfg, params);
  if (!os) throw Error(Errc::io_error, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io_error, "cannot open " + path.string());
  return read_checkpoint(is);
}

}  // namespace gustcast
