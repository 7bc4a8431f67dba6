// Codec tests: golden encode/decode patterns, the exhaustive 240-case
// product enumeration against plain integer multiplication, all-pairs
// coverage and stream corruption rejection.

#include <catch2/catch_amalgamated.hpp>

#include <scsim/sc_codec.hpp>

using namespace scsim;

namespace {
const CodecConfig kDefault{};                                   // 11 x 4 -> 44
const CodecConfig kSmall{4, 3, 12, Pairing::repetition};        // 4 x 3 -> 12
const CodecConfig kDivided{11, 4, 44, Pairing::clock_division};
}  // namespace

TEST_CASE("encode produces the extended left-aligned unary pattern") {
  StochasticNumber s = encode(SignedMagnitude{+1, 2, 4}, kSmall);
  REQUIRE(to_ascii(s) == "+110011001100");  // period 1100 repeated three times
  REQUIRE(s.ones_count() == 6);
  REQUIRE(s.native_length == 4);

  SECTION("zero magnitude gives the all-zeros stream with canonical + sign") {
    StochasticNumber z = encode(SignedMagnitude{-1, 0, 11}, kDefault);
    REQUIRE(z.length() == 44);
    REQUIRE(z.ones_count() == 0);
    REQUIRE(z.sign == +1);
  }
  SECTION("full scale gives the all-ones stream") {
    StochasticNumber f = encode(SignedMagnitude{-1, 4, 4}, kDefault);
    REQUIRE(f.length() == 44);
    REQUIRE(f.ones_count() == 44);
    REQUIRE(f.sign == -1);
    REQUIRE(decode(f).value() == -1.0);
  }
}

TEST_CASE("encode rejects invalid operands") {
  REQUIRE_THROWS_AS(encode(SignedMagnitude{+1, 12, 11}, kDefault), std::invalid_argument);
  REQUIRE_THROWS_AS(encode(SignedMagnitude{+1, 1, 7}, kDefault), std::invalid_argument);
  CodecConfig bad = kDefault;
  bad.extended_length = 40;
  REQUIRE_THROWS_AS(encode(SignedMagnitude{+1, 1, 11}, bad), std::invalid_argument);
}

TEST_CASE("decode recovers the ones fraction") {
  StochasticNumber s = from_ascii("+01101010", 8);
  SignedMagnitude v = decode(s);
  REQUIRE(v.sign == +1);
  REQUIRE(v.magnitude == 4);
  REQUIRE(v.levels == 8);
  REQUIRE(v.value() == 0.5);

  StochasticNumber zeros = from_ascii("-0000", 4);
  REQUIRE(decode(zeros).magnitude == 0);
  REQUIRE(decode(zeros).sign == +1);
}

TEST_CASE("decode rejects corrupted streams") {
  // one lonely 1 in a 44-bit stream: window ones-counts differ
  std::string text = "+";
  text += std::string(44, '0');
  text[1] = '1';
  REQUIRE_THROWS_AS(decode(from_ascii(text, 11)), std::invalid_argument);
  // corrupted dilated block
  StochasticNumber d{+1, {1, 0, 1, 1, 0, 0, 0, 0}, 2, StreamScheme::dilated};
  REQUIRE_THROWS_AS(decode(d), std::invalid_argument);
}

TEST_CASE("round-trip is exact over both level sets and both signs") {
  for (const CodecConfig& cfg : {kDefault, kDivided})
    for (int levels : {cfg.activation_levels, cfg.weight_levels})
      for (int sign : {+1, -1})
        for (int m = 0; m <= levels; ++m) {
          SignedMagnitude v{sign, m, levels};
          REQUIRE(decode(encode(v, cfg)) == v);
        }
}

TEST_CASE("encoded streams are periodic in their native window") {
  for (int levels : {11, 4})
    for (int m = 0; m <= levels; ++m) {
      StochasticNumber s = encode(SignedMagnitude{+1, m, levels}, kDefault);
      int first = 0;
      for (int i = 0; i < s.native_length; ++i) first += s.bits[i];
      for (int w = 0; w < s.length(); w += s.native_length) {
        int count = 0;
        for (int i = 0; i < s.native_length; ++i) count += s.bits[w + i];
        REQUIRE(count == first);
      }
    }
}

TEST_CASE("parallel AND multiplication is exact, not statistical") {
  StochasticNumber a = encode(SignedMagnitude{+1, 3, 11}, kDefault);
  StochasticNumber b = encode(SignedMagnitude{+1, 2, 4}, kDefault);
  StochasticNumber p = sc_multiply(a, b);
  REQUIRE(p.ones_count() == 6);
  REQUIRE(decode(p).magnitude == 6);
  REQUIRE(decode(p).levels == 44);

  SECTION("zero annihilates") {
    StochasticNumber z = encode(SignedMagnitude{+1, 0, 4}, kDefault);
    REQUIRE(sc_multiply(a, z).ones_count() == 0);
  }
  SECTION("length mismatch is rejected") {
    StochasticNumber small = encode(SignedMagnitude{+1, 2, 4}, kSmall);
    REQUIRE_THROWS_AS(sc_multiply(a, small), std::invalid_argument);
  }
}

TEST_CASE("exhaustive product enumeration matches integer multiplication") {
  // 12 activation x 5 weight magnitudes x 4 sign pairs = 240 cases
  for (const CodecConfig& cfg : {kDefault, kDivided}) {
    int cases = 0;
    for (int ma = 0; ma <= 11; ++ma)
      for (int mw = 0; mw <= 4; ++mw)
        for (int sa : {+1, -1})
          for (int sw : {+1, -1}) {
            StochasticNumber a = encode(SignedMagnitude{sa, ma, 11}, cfg);
            StochasticNumber w = encode(SignedMagnitude{sw, mw, 4}, cfg);
            StochasticNumber p = sc_multiply(a, w);
            REQUIRE(p.ones_count() == ma * mw);
            if (ma > 0 && mw > 0) REQUIRE(p.sign == sa * sw);
            ++cases;
          }
    REQUIRE(cases == 240);
  }
}

TEST_CASE("coverage holds for coprime repetition and any clock division") {
  StochasticNumber a = encode(SignedMagnitude{+1, 5, 11}, kDefault);
  StochasticNumber w = encode(SignedMagnitude{+1, 2, 4}, kDefault);
  REQUIRE(coverage_check(a, w));

  StochasticNumber a3 = encode(SignedMagnitude{+1, 1, 4}, kSmall);
  StochasticNumber w3 = encode(SignedMagnitude{+1, 1, 3}, kSmall);
  REQUIRE(coverage_check(a3, w3));

  StochasticNumber ad = encode(SignedMagnitude{+1, 5, 11}, kDivided);
  StochasticNumber wd = encode(SignedMagnitude{+1, 2, 4}, kDivided);
  REQUIRE(wd.scheme == StreamScheme::dilated);
  REQUIRE(coverage_check(ad, wd));
}

TEST_CASE("coverage fails for equal periods extended to a single period") {
  StochasticNumber a{+1, {1, 1, 0, 0}, 4, StreamScheme::periodic};
  StochasticNumber b{+1, {1, 0, 1, 0}, 4, StreamScheme::periodic};
  REQUIRE_FALSE(coverage_check(a, b));  // only diagonal pairs meet
}

TEST_CASE("ascii serialization round-trips") {
  for (int m = 0; m <= 4; ++m)
    for (int sign : {+1, -1}) {
      StochasticNumber s = encode(SignedMagnitude{sign, m, 4}, kDefault);
      StochasticNumber back = from_ascii(to_ascii(s), s.native_length, s.scheme);
      REQUIRE(back.bits == s.bits);
      REQUIRE(back.sign == s.sign);
    }
  REQUIRE_THROWS_AS(from_ascii("01", 1), std::invalid_argument);
  REQUIRE_THROWS_AS(from_ascii("+01x", 2), std::invalid_argument);
}
