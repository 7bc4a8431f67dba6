// Config and file-format tests: defaults with provenance, strict key
// validation, job/image/kernel text formats and the CSV dialect.

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <scsim/config.hpp>
#include <scsim/job_io.hpp>
#include <scsim/verify.hpp>

using namespace scsim;
using Catch::Matchers::ContainsSubstring;

namespace {
RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}
}  // namespace

TEST_CASE("empty config applies every default and logs it") {
  RunConfig cfg = parse("");
  REQUIRE(cfg.engine.cal.sac_v_min == 0.41);
  REQUIRE(cfg.engine.codec.activation_levels == 11);
  REQUIRE(cfg.engine.codec.extended_length == 44);
  REQUIRE(cfg.engine.adc.bits == 8);
  REQUIRE(cfg.seed == 1144);
  REQUIRE(cfg.trials == 10000);
  REQUIRE_FALSE(cfg.provenance.empty());
  for (const std::string& line : cfg.provenance)
    REQUIRE_THAT(line, ContainsSubstring("# default"));
}

TEST_CASE("sections and qualified keys both work") {
  RunConfig cfg = parse(
      "[analog]\n"
      "sac_v_min = 0.45\n"
      "sac_v_max = 0.95\n"
      "\n"
      "adc.bits = 6  # inline comment\n"
      "[campaign]\n"
      "seed = 7\n"
      "trials = 123\n");
  REQUIRE(cfg.engine.cal.sac_v_min == 0.45);
  REQUIRE(cfg.engine.cal.sac_v_max == 0.95);
  REQUIRE(cfg.engine.adc.bits == 6);
  REQUIRE(cfg.seed == 7);
  REQUIRE(cfg.trials == 123);

  bool found_file_origin = false;
  for (const std::string& line : cfg.provenance)
    if (line.find("adc.bits = 6") != std::string::npos &&
        line.find("test.cfg:5") != std::string::npos)
      found_file_origin = true;
  REQUIRE(found_file_origin);
}

TEST_CASE("extended length follows the level widths unless pinned") {
  RunConfig cfg = parse("codec.activation_levels = 5\ncodec.weight_levels = 3\n");
  REQUIRE(cfg.engine.codec.extended_length == 15);
}

TEST_CASE("invariant violations are rejected by name") {
  REQUIRE_THROWS_WITH(parse("adc.bits = 0\n"), ContainsSubstring("bits"));
  REQUIRE_THROWS_WITH(parse("codec.activation_levels = 6\ncodec.weight_levels = 4\n"),
                      ContainsSubstring("coprime"));
  REQUIRE_THROWS_WITH(parse("campaign.trials = 0\n"), ContainsSubstring("trials"));
  REQUIRE_THROWS_WITH(parse("analog.sac_v_min = 0.2\nanalog.vtc_linear_lo = 0.3\n"),
                      ContainsSubstring("linear"));
}

TEST_CASE("unknown and malformed keys carry the line number") {
  REQUIRE_THROWS_WITH(parse("codec.activation_levls = 11\n"),
                      ContainsSubstring("test.cfg:1: unknown key"));
  REQUIRE_THROWS_WITH(parse("\njust some words\n"), ContainsSubstring("test.cfg:2"));
  REQUIRE_THROWS_WITH(parse("adc.bits = 8\nadc.bits = 9\n"), ContainsSubstring("duplicate"));
  REQUIRE_THROWS_WITH(parse("adc.bits = eight\n"), ContainsSubstring("bad value"));
}

TEST_CASE("nonlinearity coefficient lists parse") {
  RunConfig cfg = parse("analog.vtc_nonlin = 1e-10, 0, 2e-10\n");
  REQUIRE(cfg.engine.cal.vtc_nonlin == std::vector<double>{1e-10, 0.0, 2e-10});
}

TEST_CASE("job lines round-trip through the text format") {
  const EngineConfig cfg{};
  std::mt19937_64 rng(21);
  MacJob job = random_job(rng, cfg);
  std::ostringstream out;
  save_jobs(out, {job});

  std::istringstream in(out.str());
  std::vector<MacJob> loaded = load_jobs(in, cfg);
  REQUIRE(loaded.size() == 1);
  REQUIRE(exact_oracle(loaded[0]) == exact_oracle(job));
  for (int m = 0; m < cfg.feature_map_count; ++m)
    for (int i = 0; i < cfg.inputs_per_map; ++i) {
      REQUIRE(loaded[0].maps[m].activations[i] == job.maps[m].activations[i]);
      REQUIRE(loaded[0].maps[m].weights[i] == job.maps[m].weights[i]);
    }
}

TEST_CASE("job loader rejects bad lines") {
  const EngineConfig cfg{};
  std::istringstream missing_bar("1 2 3\n");
  REQUIRE_THROWS_WITH(load_jobs(missing_bar, cfg), ContainsSubstring("'|'"));

  std::string line;
  for (int i = 0; i < 26; ++i) line += "12 ";
  line += "|";
  for (int i = 0; i < 26; ++i) line += " 1";
  std::istringstream oversized(line + "\n");
  REQUIRE_THROWS_WITH(load_jobs(oversized, cfg), ContainsSubstring("magnitude 12"));

  // five map lines do not form a whole six-map job
  std::ostringstream partial;
  save_jobs(partial, {zero_job(cfg)});
  std::string text = partial.str();
  text.erase(text.rfind('\n', text.size() - 2) + 1);
  std::istringstream in(text);
  REQUIRE_THROWS_WITH(load_jobs(in, cfg), ContainsSubstring("whole job"));
}

TEST_CASE("image files parse with coordinates in error messages") {
  std::istringstream good(
      "2 3 1 11\n"
      "1 -2 3\n"
      "0 11 -11\n");
  SignedImage img = load_image(good);
  REQUIRE(img.height == 2);
  REQUIRE(img.at(0, 0, 1) == -2);
  REQUIRE(img.at(0, 1, 2) == -11);

  std::ostringstream out;
  save_image(out, img);
  std::istringstream back(out.str());
  SignedImage img2 = load_image(back);
  REQUIRE(img2.values == img.values);

  std::istringstream bad(
      "2 3 1 11\n"
      "1 -2 3\n"
      "0 12 -11\n");
  REQUIRE_THROWS_WITH(load_image(bad), ContainsSubstring("row 1 col 1"));

  std::istringstream truncated("2 3 1 11\n1 2\n");
  REQUIRE_THROWS_WITH(load_image(truncated), ContainsSubstring("truncated"));
}

TEST_CASE("kernel sets parse taps and bias") {
  std::istringstream in(
      "2 2 2 4\n"
      "1 -2\n"
      "3 4\n"
      "0\n"
      "-4 0\n"
      "1 1\n"
      "2\n");
  KernelSet ks = load_kernels(in);
  REQUIRE(ks.kernels == 2);
  REQUIRE(ks.tap(0, 0, 1) == -2);
  REQUIRE(ks.bias[0] == 0);
  REQUIRE(ks.tap(1, 0, 0) == -4);
  REQUIRE(ks.bias[1] == 2);

  std::istringstream bad(
      "1 1 1 4\n"
      "5\n"
      "0\n");
  REQUIRE_THROWS_WITH(load_kernels(bad), ContainsSubstring("kernel 0"));
}

TEST_CASE("csv writer emits the documented dialect") {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.comment("seed = 1");
  csv.row({"a", "b"});
  csv.row({"1", fmt_g(0.5)});
  REQUIRE(out.str() == "# seed = 1\na,b\n1,0.5\n");
}
