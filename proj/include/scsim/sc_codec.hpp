// sc_codec.hpp -- deterministic stochastic-number codec.
//
// Values are unary bitstreams: the fraction of 1s in the stream is the
// magnitude, an extra sign bit carries the sign. Operand streams are
// extended to the product of their native lengths so that every bit of
// one operand meets every bit of the other; the AND-gate product is then
// exact (ones count == integer magnitude product), not statistical.

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace scsim {

// How a native unary pattern is stretched to the extended length.
//   periodic: the pattern repeats (period = native_length).
//   dilated:  each native bit is held for length/native_length positions.
enum class StreamScheme { periodic, dilated };

// Operand pairing policy for the extended streams. With both operands
// periodic, all-pairs coverage needs coprime native lengths; with the
// weight stream dilated (clock division) coverage holds for any lengths.
enum class Pairing { repetition, clock_division };

// A sign plus a bounded integer magnitude: value = sign * magnitude / levels.
struct SignedMagnitude {
  int sign = +1;      // +1 or -1
  int magnitude = 0;  // 0..levels
  int levels = 1;

  double value() const { return sign * static_cast<double>(magnitude) / levels; }

  friend bool operator==(const SignedMagnitude& a, const SignedMagnitude& b) {
    if (a.levels != b.levels || a.magnitude != b.magnitude) return false;
    return a.magnitude == 0 || a.sign == b.sign;  // signed zeros compare equal
  }
};

inline void validate(const SignedMagnitude& v) {
  if (v.sign != +1 && v.sign != -1)
    throw std::invalid_argument("SignedMagnitude: sign must be +1 or -1");
  if (v.levels < 1)
    throw std::invalid_argument("SignedMagnitude: levels must be >= 1");
  if (v.magnitude < 0 || v.magnitude > v.levels)
    throw std::invalid_argument("SignedMagnitude: magnitude " + std::to_string(v.magnitude) +
                                " outside [0, " + std::to_string(v.levels) + "]");
}

struct CodecConfig {
  int activation_levels = 11;
  int weight_levels = 4;
  int extended_length = 44;  // activation_levels * weight_levels
  Pairing pairing = Pairing::repetition;

  void validate() const {
    if (activation_levels < 1 || weight_levels < 1)
      throw std::invalid_argument("codec: levels must be >= 1");
    if (std::gcd(activation_levels, weight_levels) != 1)
      throw std::invalid_argument("codec: activation_levels and weight_levels must be coprime");
    if (extended_length != activation_levels * weight_levels)
      throw std::invalid_argument("codec: extended_length must equal activation_levels * weight_levels");
  }
};

// A sign plus an extended unary bitstream. native_length is the effective
// length before extension; scheme records how the extension was done.
struct StochasticNumber {
  int sign = +1;
  std::vector<std::uint8_t> bits;  // position 0 first, each 0 or 1
  int native_length = 1;
  StreamScheme scheme = StreamScheme::periodic;

  int length() const { return static_cast<int>(bits.size()); }

  int ones_count() const {
    int n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
  }

  // Index of the native bit occupying stream position pos.
  int native_index(int pos) const {
    if (scheme == StreamScheme::periodic) return pos % native_length;
    return pos / (length() / native_length);
  }
};

namespace detail {

// Structural validity of an extended stream: length is a multiple of the
// native length and the extension pattern is intact. A violated pattern
// signals a corrupted stream.
inline void check_stream(const StochasticNumber& s) {
  const int len = s.length();
  if (s.native_length < 1 || len < 1)
    throw std::invalid_argument("stream: empty or bad native length");
  if (len % s.native_length != 0)
    throw std::invalid_argument("stream: length not a multiple of native length");
  for (std::uint8_t b : s.bits)
    if (b > 1) throw std::invalid_argument("stream: bits must be 0 or 1");

  if (s.scheme == StreamScheme::periodic) {
    // every native-aligned window must carry the same ones count
    const int period = s.native_length;
    int first = 0;
    for (int i = 0; i < period; ++i) first += s.bits[i];
    for (int w = period; w < len; w += period) {
      int count = 0;
      for (int i = 0; i < period; ++i) count += s.bits[w + i];
      if (count != first)
        throw std::invalid_argument("stream: non-periodic (window ones-counts differ)");
    }
  } else {
    // every dilated block must be constant
    const int hold = len / s.native_length;
    for (int i = 0; i < s.native_length; ++i)
      for (int j = 1; j < hold; ++j)
        if (s.bits[i * hold + j] != s.bits[i * hold])
          throw std::invalid_argument("stream: corrupted dilated block");
  }
}

}  // namespace detail

// Converts a signed magnitude to its extended deterministic stream: the
// left-aligned unary pattern (magnitude ones, then zeros) stretched to
// cfg.extended_length. Zero magnitude canonicalizes to + sign.
inline StochasticNumber encode(const SignedMagnitude& v, const CodecConfig& cfg) {
  cfg.validate();
  validate(v);
  if (v.levels != cfg.activation_levels && v.levels != cfg.weight_levels)
    throw std::invalid_argument("encode: levels " + std::to_string(v.levels) +
                                " matches neither operand width");
  if (cfg.extended_length % v.levels != 0)
    throw std::invalid_argument("encode: extended length not a multiple of native length");

  StochasticNumber s;
  s.sign = (v.magnitude == 0) ? +1 : v.sign;
  s.native_length = v.levels;
  s.scheme = (cfg.pairing == Pairing::clock_division && v.levels == cfg.weight_levels)
                 ? StreamScheme::dilated
                 : StreamScheme::periodic;
  s.bits.resize(cfg.extended_length);
  for (int p = 0; p < cfg.extended_length; ++p)
    s.bits[p] = s.native_index(p) < v.magnitude ? 1 : 0;
  return s;
}

// Recovers the signed magnitude: ones fraction of the stream scaled back to
// the native length. Rejects streams whose extension pattern is corrupted.
inline SignedMagnitude decode(const StochasticNumber& s) {
  detail::check_stream(s);
  const int ones = s.ones_count();
  if ((static_cast<long long>(ones) * s.native_length) % s.length() != 0)
    throw std::invalid_argument("decode: ones count not consistent with native length");
  SignedMagnitude v;
  v.magnitude = static_cast<int>(static_cast<long long>(ones) * s.native_length / s.length());
  v.sign = (v.magnitude == 0) ? +1 : s.sign;
  v.levels = s.native_length;
  return v;
}

// Positionwise AND of two equal-length streams; signs multiply. When the
// operands cover all native-bit pairs the output ones count equals the
// integer magnitude product exactly.
inline StochasticNumber sc_multiply(const StochasticNumber& a, const StochasticNumber& b) {
  if (a.length() != b.length())
    throw std::invalid_argument("sc_multiply: stream length mismatch (" +
                                std::to_string(a.length()) + " vs " + std::to_string(b.length()) + ")");
  StochasticNumber out;
  out.sign = a.sign * b.sign;
  out.native_length = a.length();  // product stream is its own period
  out.scheme = StreamScheme::periodic;
  out.bits.resize(a.bits.size());
  for (std::size_t p = 0; p < a.bits.size(); ++p)
    out.bits[p] = a.bits[p] & b.bits[p];
  return out;
}

// True iff every (i, j) native-bit pair of the two operands meets at some
// stream position. Holds for periodic/periodic operands with coprime native
// lengths extended to their product, and for any dilated pairing.
inline bool coverage_check(const StochasticNumber& a, const StochasticNumber& b) {
  if (a.length() != b.length())
    throw std::invalid_argument("coverage_check: stream length mismatch");
  std::vector<char> seen(static_cast<std::size_t>(a.native_length) * b.native_length, 0);
  for (int p = 0; p < a.length(); ++p)
    seen[static_cast<std::size_t>(a.native_index(p)) * b.native_length + b.native_index(p)] = 1;
  for (char c : seen)
    if (!c) return false;
  return true;
}

// ASCII form: leading '+'/'-' sign, then one '0'/'1' per position,
// position 0 first. Used for golden files and CLI debugging.
inline std::string to_ascii(const StochasticNumber& s) {
  std::string out;
  out.reserve(s.bits.size() + 1);
  out.push_back(s.sign >= 0 ? '+' : '-');
  for (std::uint8_t b : s.bits) out.push_back(b ? '1' : '0');
  return out;
}

inline StochasticNumber from_ascii(const std::string& text, int native_length,
                                   StreamScheme scheme = StreamScheme::periodic) {
  if (text.size() < 2 || (text[0] != '+' && text[0] != '-'))
    throw std::invalid_argument("from_ascii: expected sign character then bits");
  StochasticNumber s;
  s.sign = text[0] == '+' ? +1 : -1;
  s.native_length = native_length;
  s.scheme = scheme;
  s.bits.reserve(text.size() - 1);
  for (std::size_t i = 1; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("from_ascii: invalid character at position " + std::to_string(i));
    s.bits.push_back(text[i] == '1');
  }
  detail::check_stream(s);
  return s;
}

}  // namespace scsim
