// mac_engine.hpp -- full pipeline orchestration: encode, 26-way parallel
// AND multiplication, sign-split SAC/VTC conversion, PP combination, INT
// accumulation across feature maps, flash-ADC quantization and the digital
// decode that inverts the known affine chain. An exact integer oracle runs
// beside the analog path for verification.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "analog_chain.hpp"
#include "energy_model.hpp"
#include "sc_codec.hpp"

namespace scsim {

struct AdcConfig {
  int bits = 8;
  double v_lo = 0.0;
  double v_hi = 1.0;

  double step() const { return (v_hi - v_lo) / static_cast<double>(1 << bits); }
  int code_max() const { return (1 << bits) - 1; }

  void validate() const {
    if (bits < 1 || bits > 24) throw std::invalid_argument("adc: bits must be in [1, 24]");
    if (!(v_lo < v_hi)) throw std::invalid_argument("adc: v_lo must be < v_hi");
  }
};

struct EngineConfig {
  CodecConfig codec;
  AnalogCalibration cal;
  AdcConfig adc;
  int inputs_per_map = 26;     // 5x5 kernel taps + 1 bias input
  int feature_map_count = 6;
  bool adc_enabled = true;     // when false, decoded_sum comes from the raw voltage
  bool renorm_enabled = false; // optional next-layer rescale of decoded sums
  double renorm_scale = 0.0;

  void validate() const {
    codec.validate();
    cal.validate();
    adc.validate();
    if (inputs_per_map < 1) throw std::invalid_argument("engine: inputs_per_map must be >= 1");
    if (feature_map_count < 1)
      throw std::invalid_argument("engine: feature_map_count must be >= 1");
    if (static_cast<long long>(inputs_per_map) * codec.extended_length > cal.sac_count_max)
      throw std::invalid_argument("engine: sac_count_max smaller than the worst-case ones count "
                                  "(inputs_per_map * extended_length)");
    if (renorm_enabled && !(renorm_scale > 0))
      throw std::invalid_argument("engine: renorm_scale must be > 0 when renormalization is enabled");
  }
};

// One feature map worth of operands: activations (kernel taps + bias) and
// the matching weights.
struct KernelInput {
  std::vector<SignedMagnitude> activations;  // levels = codec.activation_levels
  std::vector<SignedMagnitude> weights;      // levels = codec.weight_levels
};

struct MacJob {
  std::vector<KernelInput> maps;  // one entry per feature map
};

inline void validate_job(const MacJob& job, const EngineConfig& cfg) {
  if (static_cast<int>(job.maps.size()) != cfg.feature_map_count)
    throw std::invalid_argument("job: expected " + std::to_string(cfg.feature_map_count) +
                                " feature maps, got " + std::to_string(job.maps.size()));
  for (std::size_t m = 0; m < job.maps.size(); ++m) {
    const KernelInput& k = job.maps[m];
    if (static_cast<int>(k.activations.size()) != cfg.inputs_per_map ||
        static_cast<int>(k.weights.size()) != cfg.inputs_per_map)
      throw std::invalid_argument("job: map " + std::to_string(m) + " must carry " +
                                  std::to_string(cfg.inputs_per_map) + " activation/weight pairs");
    for (int i = 0; i < cfg.inputs_per_map; ++i) {
      validate(k.activations[i]);
      validate(k.weights[i]);
      if (k.activations[i].levels != cfg.codec.activation_levels)
        throw std::invalid_argument("job: activation levels mismatch at map " + std::to_string(m) +
                                    " input " + std::to_string(i));
      if (k.weights[i].levels != cfg.codec.weight_levels)
        throw std::invalid_argument("job: weight levels mismatch at map " + std::to_string(m) +
                                    " input " + std::to_string(i));
    }
  }
}

// Constants of the composed linear chain, all derivable from calibration.
struct ChainConstants {
  double sac_slope_v_per_count;  // (sac_v_max - sac_v_min) / sac_count_max
  double seconds_per_count;      // vtc_gain * sac_slope (beta)
  double volts_per_count;        // int_gain * beta: INT volts per unit ones count
  double t_ref;                  // zero-input pulse width T0, seconds
  double baseline_volts;         // feature_map_count accumulations of t_ref
};

inline ChainConstants chain_constants(const AnalogCalibration& cal, int feature_map_count) {
  ChainConstants cc;
  cc.sac_slope_v_per_count = (cal.sac_v_max - cal.sac_v_min) / cal.sac_count_max;
  cc.seconds_per_count = cal.vtc_gain * cc.sac_slope_v_per_count;
  cc.volts_per_count = cal.int_gain * cc.seconds_per_count;
  cc.t_ref = cal.vtc_gain * cal.sac_v_min + cal.nonlin_at(cal.sac_v_min);
  cc.baseline_volts = feature_map_count * cal.int_gain * cc.t_ref;
  return cc;
}

struct FeatureMapResult {
  Pulse pulse;               // PP output for this map
  std::int64_t pos = 0;      // summed ones counts of positive products
  std::int64_t neg = 0;      // summed ones counts of negative products
  Flags flags = 0;
};

// SAC -> VTC -> PP for one map given the sign-split ones counts. The POS
// stage converts before the NEG stage; the zero-reference pulse comes from
// the noiseless path since it models a fixed bias, not a conversion.
inline FeatureMapResult feature_map_from_counts(std::int64_t pos, std::int64_t neg,
                                                const AnalogCalibration& cal,
                                                NoiseSource* noise = nullptr) {
  FeatureMapResult r;
  r.pos = pos;
  r.neg = neg;
  AnalogLevel v_pos = sac_transfer(static_cast<int>(pos), cal, noise);
  Pulse t_pos = vtc_transfer(v_pos, cal, r.flags);
  AnalogLevel v_neg = sac_transfer(static_cast<int>(neg), cal, noise);
  Pulse t_neg = vtc_transfer(v_neg, cal, r.flags);
  Flags ref_flags = 0;
  Pulse t_ref = vtc_transfer(sac_transfer(0, cal), cal, ref_flags);
  r.pulse = pp_combine(t_pos, t_neg, t_ref, r.flags);
  return r;
}

// Encodes all pairs, multiplies them on the parallel AND array, partitions
// product ones counts by sign and runs the analog conversion for the map.
inline FeatureMapResult run_feature_map(const KernelInput& k, const EngineConfig& cfg,
                                        NoiseSource* noise = nullptr,
                                        EnergyLedger* ledger = nullptr) {
  std::int64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < k.activations.size(); ++i) {
    StochasticNumber sa = encode(k.activations[i], cfg.codec);
    StochasticNumber sw = encode(k.weights[i], cfg.codec);
    StochasticNumber prod = sc_multiply(sa, sw);
    const int ones = prod.ones_count();
    if (prod.sign > 0)
      pos += ones;
    else
      neg += ones;
  }
  if (ledger) {
    ledger->record(Component::decoder, 2 * static_cast<std::int64_t>(k.activations.size()));
    ledger->record(Component::and_array, 1);
    ledger->record(Component::sac, 2);
    ledger->record(Component::vtc, 2);
    ledger->record(Component::pp, 1);
  }
  return feature_map_from_counts(pos, neg, cfg.cal, noise);
}

// Signed integer dot product over all maps, plain integer arithmetic.
inline std::int64_t exact_oracle(const MacJob& job) {
  std::int64_t sum = 0;
  for (const KernelInput& k : job.maps)
    for (std::size_t i = 0; i < k.activations.size(); ++i)
      sum += static_cast<std::int64_t>(k.activations[i].sign) * k.activations[i].magnitude *
             k.weights[i].sign * k.weights[i].magnitude;
  return sum;
}

// Flash ADC: uniform floor quantization with saturation.
inline int adc_quantize(AnalogLevel v, const AdcConfig& adc, Flags& flags) {
  if (v.volts < adc.v_lo || v.volts > adc.v_hi) flags |= flag_adc_saturated;
  int code = static_cast<int>(std::floor((v.volts - adc.v_lo) / adc.step()));
  if (code < 0) code = 0;
  if (code > adc.code_max()) code = adc.code_max();
  return code;
}

// Inverse of the affine chain: remove the accumulated baseline, divide by
// the end-to-end slope, round to the nearest integer count.
inline std::int64_t decode_sum_from_volts(double volts, const EngineConfig& cfg) {
  const ChainConstants cc = chain_constants(cfg.cal, cfg.feature_map_count);
  return std::llround((volts - cc.baseline_volts) / cc.volts_per_count);
}

// Same inversion from a quantized code; the code is reconstructed at its
// bin center so the decode error stays within half a quantization step.
inline std::int64_t decode_sum_from_code(int code, const EngineConfig& cfg) {
  const double v = cfg.adc.v_lo + (code + 0.5) * cfg.adc.step();
  return decode_sum_from_volts(v, cfg);
}

// Optional next-layer rescale: affine-with-saturation map from a decoded
// sum back to a bounded activation.
inline SignedMagnitude renormalize(std::int64_t sum, double scale, int levels) {
  const long long scaled = std::llround(static_cast<double>(sum) * scale);
  SignedMagnitude v;
  v.sign = scaled < 0 ? -1 : +1;
  v.magnitude = static_cast<int>(std::min<long long>(std::llabs(scaled), levels));
  v.levels = levels;
  if (v.magnitude == 0) v.sign = +1;
  return v;
}

struct MacResult {
  double analog_volts = 0.0;      // final INT output
  int adc_code = 0;
  std::int64_t decoded_sum = 0;   // after baseline removal and rescale
  std::int64_t oracle_sum = 0;
  double abs_error_volts = 0.0;   // |ideal chain - actual chain| at INT
  Flags flags = 0;
};

// Final INT voltage of the noiseless, nonlinearity-free chain for this job,
// computed from exact integer counts. Reference for abs_error_volts.
inline double ideal_analog_volts(const MacJob& job, const EngineConfig& cfg) {
  const AnalogCalibration ideal = ideal_of(cfg.cal);
  Flags scratch = 0;
  AnalogLevel v{0.0};
  for (const KernelInput& k : job.maps) {
    std::int64_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < k.activations.size(); ++i) {
      const std::int64_t p = static_cast<std::int64_t>(k.activations[i].magnitude) *
                             k.weights[i].magnitude;
      if (k.activations[i].sign * k.weights[i].sign > 0)
        pos += p;
      else
        neg += p;
    }
    FeatureMapResult fm = feature_map_from_counts(pos, neg, ideal);
    v = int_accumulate(v, fm.pulse, ideal, scratch);
  }
  return v.volts;
}

// Runs the whole engine on one job: per-map conversion, INT accumulation,
// quantization and digital decode, with the oracle result alongside.
inline MacResult run_mac(const MacJob& job, const EngineConfig& cfg,
                         NoiseSource* noise = nullptr, EnergyLedger* ledger = nullptr) {
  validate_job(job, cfg);
  MacResult r;
  AnalogLevel v{0.0};
  for (const KernelInput& k : job.maps) {
    FeatureMapResult fm = run_feature_map(k, cfg, noise, ledger);
    r.flags |= fm.flags;
    v = int_accumulate(v, fm.pulse, cfg.cal, r.flags, noise);
    if (ledger) ledger->record(Component::integrator, 1);
  }
  if (noise && cfg.cal.int_error_bound_v > 0)
    v.volts += noise->uniform_pm(cfg.cal.int_error_bound_v);

  r.analog_volts = v.volts;
  r.adc_code = adc_quantize(v, cfg.adc, r.flags);
  if (ledger && cfg.adc_enabled) ledger->record(Component::adc, 1);
  r.decoded_sum = cfg.adc_enabled ? decode_sum_from_code(r.adc_code, cfg)
                                  : decode_sum_from_volts(r.analog_volts, cfg);
  r.oracle_sum = exact_oracle(job);
  r.abs_error_volts = std::fabs(r.analog_volts - ideal_analog_volts(job, cfg));
  return r;
}

struct ErrorSummary {
  std::size_t trials = 0;
  double max_abs_error_volts = 0.0;
  std::int64_t max_int_error = 0;   // max |decoded_sum - oracle_sum|
  double rms_error_volts = 0.0;
  std::size_t n_out_of_linear_range = 0;
  std::size_t n_pp_underflow = 0;
  std::size_t n_int_overflow = 0;
  std::size_t n_adc_saturated = 0;
};

inline ErrorSummary error_metrics(const std::vector<MacResult>& results) {
  if (results.empty()) throw std::invalid_argument("error_metrics: empty result set");
  ErrorSummary s;
  s.trials = results.size();
  double sq = 0.0;
  for (const MacResult& r : results) {
    s.max_abs_error_volts = std::max(s.max_abs_error_volts, r.abs_error_volts);
    s.max_int_error = std::max<std::int64_t>(s.max_int_error, std::llabs(r.decoded_sum - r.oracle_sum));
    sq += r.abs_error_volts * r.abs_error_volts;
    if (r.flags & flag_out_of_linear_range) ++s.n_out_of_linear_range;
    if (r.flags & flag_pp_underflow) ++s.n_pp_underflow;
    if (r.flags & flag_int_overflow) ++s.n_int_overflow;
    if (r.flags & flag_adc_saturated) ++s.n_adc_saturated;
  }
  s.rms_error_volts = std::sqrt(sq / static_cast<double>(results.size()));
  return s;
}

}  // namespace scsim
