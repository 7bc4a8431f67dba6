// analog_chain.hpp -- behavioral models of the four analog stages:
// SAC (charge-sharing summation), VTC (voltage-to-pulse conversion),
// PP (signed pulse combination) and INT (integrating accumulation).
//
// Each stage is a transfer function over plain values plus an optional
// seeded noise source; out-of-range conditions raise flags instead of
// silently clamping.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace scsim {

enum Flag : unsigned {
  flag_out_of_linear_range = 1u << 0,  // VTC input left the linear window
  flag_pp_underflow = 1u << 1,         // negative sum exhausted the baseline pulse
  flag_int_overflow = 1u << 2,         // INT output exceeded the supply rail
  flag_adc_saturated = 1u << 3,        // quantizer input outside its range
};
using Flags = unsigned;

inline std::string flags_to_string(Flags f) {
  std::string out;
  auto add = [&](Flags bit, const char* name) {
    if (f & bit) {
      if (!out.empty()) out += '|';
      out += name;
    }
  };
  add(flag_out_of_linear_range, "out_of_linear_range");
  add(flag_pp_underflow, "pp_underflow");
  add(flag_int_overflow, "int_overflow");
  add(flag_adc_saturated, "adc_saturated");
  return out;
}

struct AnalogLevel {
  double volts = 0.0;
};

struct Pulse {
  double width = 0.0;  // seconds
};

// Explicitly seeded generator for every injected non-ideality. Two runs with
// the same seed draw identical sequences; no global state.
struct NoiseSource {
  explicit NoiseSource(std::uint64_t seed) : rng(seed) {}

  double gaussian(double sigma) {
    return std::normal_distribution<double>(0.0, sigma)(rng);
  }

  double uniform_pm(double bound) {
    return std::uniform_real_distribution<double>(-bound, bound)(rng);
  }

  std::mt19937_64 rng;
};

struct AnalogCalibration {
  double vdd = 1.0;  // supply rail, volts

  // SAC: affine map from ones count to output voltage, anchored at the
  // measured endpoints rather than the ideal charge-share proportionality.
  double sac_v_min = 0.41;   // volts at ones count 0
  double sac_v_max = 1.0;    // volts at ones count sac_count_max
  int sac_count_max = 1144;  // 26 inputs x 44-bit streams

  // VTC: pulse width proportional to input voltage inside the linear window.
  double vtc_gain = 20e-9;      // seconds per volt
  double vtc_linear_lo = 0.35;  // volts
  double vtc_linear_hi = 1.0;   // volts

  // INT: output voltage grows linearly with input pulse width. Default keeps
  // six full-scale 20 ns accumulations at or below vdd.
  double int_gain = 1.0 / (6 * 20e-9);  // volts per second

  // Injected non-idealities (all zero in the ideal chain).
  double noise_sigma_v = 0.0;           // additive Gaussian per SAC/INT stage
  std::vector<double> vtc_nonlin;       // polynomial deviation, seconds: sum c_k v^k
  double int_error_bound_v = 0.0;       // bounded uniform error at the INT output

  double nonlin_at(double v) const {
    double acc = 0.0, pw = 1.0;
    for (double c : vtc_nonlin) {
      acc += c * pw;
      pw *= v;
    }
    return acc;
  }

  void validate() const {
    if (!(vdd > 0)) throw std::invalid_argument("analog: vdd must be > 0");
    if (!(0 < sac_v_min && sac_v_min < sac_v_max && sac_v_max <= vdd))
      throw std::invalid_argument("analog: need 0 < sac_v_min < sac_v_max <= vdd");
    if (sac_count_max < 1) throw std::invalid_argument("analog: sac_count_max must be >= 1");
    if (!(vtc_gain > 0)) throw std::invalid_argument("analog: vtc_gain must be > 0");
    if (!(vtc_linear_lo <= sac_v_min))
      throw std::invalid_argument("analog: vtc_linear_lo must not exceed sac_v_min "
                                  "(valid SAC outputs must sit in the VTC linear window)");
    if (!(vtc_linear_lo < vtc_linear_hi))
      throw std::invalid_argument("analog: vtc linear window is empty");
    if (!(int_gain > 0)) throw std::invalid_argument("analog: int_gain must be > 0");
    if (noise_sigma_v < 0 || int_error_bound_v < 0)
      throw std::invalid_argument("analog: noise bounds must be >= 0");
  }
};

// Copy of a calibration with every injected non-ideality removed.
inline AnalogCalibration ideal_of(const AnalogCalibration& cal) {
  AnalogCalibration out = cal;
  out.noise_sigma_v = 0.0;
  out.vtc_nonlin.clear();
  out.int_error_bound_v = 0.0;
  return out;
}

// Charge-share summation: ones count -> voltage, affine between the
// calibrated endpoints. Called once per POS stage and once per NEG stage;
// the RESET/CHARGE/SHARE phases collapse into this single transfer.
inline AnalogLevel sac_transfer(int ones_count, const AnalogCalibration& cal,
                                NoiseSource* noise = nullptr) {
  if (ones_count < 0 || ones_count > cal.sac_count_max)
    throw std::invalid_argument("sac_transfer: ones_count " + std::to_string(ones_count) +
                                " outside [0, " + std::to_string(cal.sac_count_max) + "]");
  // convex-combination form keeps both calibrated endpoints exact
  const double frac = static_cast<double>(ones_count) / cal.sac_count_max;
  double v = cal.sac_v_min * (1.0 - frac) + cal.sac_v_max * frac;
  if (noise && cal.noise_sigma_v > 0) v += noise->gaussian(cal.noise_sigma_v);
  return AnalogLevel{v};
}

// Voltage-to-pulse conversion: width = vtc_gain * v + nonlin(v). Outside the
// linear window the same formula applies but the result is flagged.
inline Pulse vtc_transfer(AnalogLevel in, const AnalogCalibration& cal, Flags& flags) {
  if (in.volts < 0) throw std::invalid_argument("vtc_transfer: negative input voltage");
  if (in.volts < cal.vtc_linear_lo || in.volts > cal.vtc_linear_hi)
    flags |= flag_out_of_linear_range;
  return Pulse{cal.vtc_gain * in.volts + cal.nonlin_at(in.volts)};
}

// Signed pulse combination: width = t_pos + t_ref - t_neg. With all three
// inputs riding on the zero-reference baseline T0 this computes
// T0 + beta * (pos - neg). A result below zero saturates at zero width and
// raises the underflow flag, matching physical pulse behavior.
inline Pulse pp_combine(Pulse t_pos, Pulse t_neg, Pulse t_ref, Flags& flags) {
  if (t_pos.width < 0 || t_neg.width < 0 || t_ref.width < 0)
    throw std::invalid_argument("pp_combine: negative pulse width");
  double w = t_pos.width + t_ref.width - t_neg.width;
  if (w < 0) {
    flags |= flag_pp_underflow;
    w = 0.0;
  }
  return Pulse{w};
}

// Integrating accumulation: each pulse charges the output by
// int_gain * width. Exceeding the rail is flagged, not clamped, since the
// physical circuit saturates.
inline AnalogLevel int_accumulate(AnalogLevel state, Pulse t, const AnalogCalibration& cal,
                                  Flags& flags, NoiseSource* noise = nullptr) {
  if (state.volts < 0) throw std::invalid_argument("int_accumulate: negative state voltage");
  if (t.width < 0) throw std::invalid_argument("int_accumulate: negative pulse width");
  double v = state.volts + cal.int_gain * t.width;
  if (noise && cal.noise_sigma_v > 0) {
    v += noise->gaussian(cal.noise_sigma_v);
    if (v < 0) v = 0.0;  // the capacitor cannot discharge below ground
  }
  if (v > cal.vdd) flags |= flag_int_overflow;
  return AnalogLevel{v};
}

}  // namespace scsim
