#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "gustcast/checkpoint.hpp"
#include "gustcast/error.hpp"
#include "oracles/instances.hpp"

using namespace gustcast;

TEST_CASE("checkpoint round trip is bit exact") {
  for (const auto& cfg : oracle::all_variants(5, 3)) {
    auto in = oracle::random_instance(cfg, 17, 1e3);
    in.params[cfg.family == Family::mlstm ? Slot::head_b : Slot::head_W].values()[0] = 1e-300;
    std::stringstream ss;
    write_checkpoint(ss, cfg, in.params);
    auto ck = read_checkpoint(ss);
    CHECK(ck.cfg == cfg);
    CHECK(ck.params == in.params);
  }
}

TEST_CASE("checkpoint file round trip") {
  auto cfg = oracle::all_variants(11, 4)[5];
  auto in = oracle::random_instance(cfg, 2);
  const auto path = std::filesystem::temp_directory_path() / "gustcast_ckpt_test.ckpt";
  save_checkpoint(cfg, in.params, path);
  auto ck = load_checkpoint(path);
  CHECK(ck.params == in.params);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), Error);
}

namespace {

std::string sample_text() {
  auto cfg = oracle::all_variants(3, 2)[1];
  auto in = oracle::random_instance(cfg, 8);
  std::stringstream ss;
  write_checkpoint(ss, cfg, in.params);
  return ss.str();
}

Errc read_error(const std::string& text) {
  std::istringstream is(text);
  try {
    read_checkpoint(is);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::io_error;
}

}  // namespace

TEST_CASE("checkpoint header carries the version") {
  const auto text = sample_text();
  CHECK(text.rfind("gustcast-checkpoint v1\n", 0) == 0);
  CHECK(text.find("family=mlstm cifg=0 peephole=0 compression=0 input_dim=3 cell_dim=2") != std::string::npos);
}

TEST_CASE("checkpoint error kinds") {
  auto text = sample_text();
  auto wrong = text;
  wrong.replace(wrong.find("v1"), 2, "999");
  CHECK(read_error(wrong) == Errc::version_mismatch);

  CHECK(read_error(text.substr(0, text.size() / 2)) == Errc::parse_error);
  CHECK(read_error("") == Errc::parse_error);

  auto shape = text;
  const auto pos = shape.find("tensor W_i 2 3");
  REQUIRE(pos != std::string::npos);
  shape.replace(pos, 14, "tensor W_i 2 4");
  CHECK(read_error(shape) == Errc::shape_inconsistency);

  auto junk = text;
  junk.replace(junk.rfind('\n', junk.size() - 2) + 1, 1, "x");
  CHECK(read_error(junk) == Errc::parse_error);
}
