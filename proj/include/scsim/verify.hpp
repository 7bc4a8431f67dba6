// verify.hpp -- verification campaigns: exhaustive codec and single-tap
// engine suites plus the seeded randomized job campaign, with per-trial
// seeds derived deterministically from (campaign seed, trial index) so
// trials stay reproducible under any execution order.

#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "job_io.hpp"

namespace scsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t trial_index) {
  return splitmix64(campaign_seed ^ splitmix64(trial_index));
}

inline MacJob zero_job(const EngineConfig& cfg) {
  MacJob job;
  job.maps.resize(cfg.feature_map_count);
  for (KernelInput& k : job.maps) {
    k.activations.assign(cfg.inputs_per_map, SignedMagnitude{+1, 0, cfg.codec.activation_levels});
    k.weights.assign(cfg.inputs_per_map, SignedMagnitude{+1, 0, cfg.codec.weight_levels});
  }
  return job;
}

inline MacJob single_tap_job(const EngineConfig& cfg, int map_idx, int tap_idx,
                             const SignedMagnitude& a, const SignedMagnitude& w) {
  MacJob job = zero_job(cfg);
  job.maps[map_idx].activations[tap_idx] = a;
  job.maps[map_idx].weights[tap_idx] = w;
  return job;
}

inline MacJob random_job(std::mt19937_64& rng, const EngineConfig& cfg) {
  std::uniform_int_distribution<int> act(0, cfg.codec.activation_levels);
  std::uniform_int_distribution<int> wgt(0, cfg.codec.weight_levels);
  std::uniform_int_distribution<int> coin(0, 1);
  MacJob job;
  job.maps.resize(cfg.feature_map_count);
  for (KernelInput& k : job.maps) {
    k.activations.resize(cfg.inputs_per_map);
    k.weights.resize(cfg.inputs_per_map);
    for (int i = 0; i < cfg.inputs_per_map; ++i) {
      k.activations[i] = SignedMagnitude{coin(rng) ? +1 : -1, act(rng), cfg.codec.activation_levels};
      k.weights[i] = SignedMagnitude{coin(rng) ? +1 : -1, wgt(rng), cfg.codec.weight_levels};
    }
  }
  return job;
}

// Sign-split integer product counts per map, the oracle-side mirror of what
// the AND array feeds the SAC.
inline void oracle_counts(const KernelInput& k, std::int64_t& pos, std::int64_t& neg) {
  pos = neg = 0;
  for (std::size_t i = 0; i < k.activations.size(); ++i) {
    const std::int64_t p =
        static_cast<std::int64_t>(k.activations[i].magnitude) * k.weights[i].magnitude;
    if (k.activations[i].sign * k.weights[i].sign > 0)
      pos += p;
    else
      neg += p;
  }
}

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::int64_t checked = 0;
  std::int64_t failed = 0;
  std::string detail;
};

namespace verify_detail {

inline SuiteResult codec_round_trip(const CodecConfig& codec) {
  SuiteResult r{"codec round-trip"};
  for (int levels : {codec.activation_levels, codec.weight_levels})
    for (int sign : {+1, -1})
      for (int m = 0; m <= levels; ++m) {
        SignedMagnitude v{sign, m, levels};
        ++r.checked;
        if (!(decode(encode(v, codec)) == v)) ++r.failed;
      }
  r.pass = r.failed == 0;
  return r;
}

inline SuiteResult codec_exact_product(const CodecConfig& codec) {
  SuiteResult r{"codec exact product"};
  for (int ma = 0; ma <= codec.activation_levels; ++ma)
    for (int mw = 0; mw <= codec.weight_levels; ++mw)
      for (int sa : {+1, -1})
        for (int sw : {+1, -1}) {
          StochasticNumber a = encode(SignedMagnitude{sa, ma, codec.activation_levels}, codec);
          StochasticNumber w = encode(SignedMagnitude{sw, mw, codec.weight_levels}, codec);
          StochasticNumber p = sc_multiply(a, w);
          ++r.checked;
          bool ok = p.ones_count() == ma * mw;
          if (ma > 0 && mw > 0) ok = ok && p.sign == sa * sw;
          if (!ok) ++r.failed;
        }
  r.pass = r.failed == 0;
  return r;
}

inline SuiteResult coverage_suite(const CodecConfig& codec) {
  SuiteResult r{"all-pairs coverage"};
  // configured operand pair
  {
    StochasticNumber a = encode(SignedMagnitude{+1, 1, codec.activation_levels}, codec);
    StochasticNumber w = encode(SignedMagnitude{+1, 1, codec.weight_levels}, codec);
    ++r.checked;
    if (!coverage_check(a, w)) ++r.failed;
  }
  // the 4/3 -> 12 reference pair
  {
    CodecConfig small{4, 3, 12, codec.pairing};
    StochasticNumber a = encode(SignedMagnitude{+1, 2, 4}, small);
    StochasticNumber w = encode(SignedMagnitude{+1, 2, 3}, small);
    ++r.checked;
    if (!coverage_check(a, w)) ++r.failed;
  }
  // non-coprime counterexample: equal periods only meet on the diagonal
  {
    StochasticNumber a{+1, {1, 1, 0, 0}, 4, StreamScheme::periodic};
    StochasticNumber b{+1, {1, 0, 1, 0}, 4, StreamScheme::periodic};
    ++r.checked;
    if (coverage_check(a, b)) ++r.failed;
  }
  r.pass = r.failed == 0;
  return r;
}

inline SuiteResult single_tap_suite(const EngineConfig& cfg) {
  SuiteResult r{"single-tap oracle equivalence"};
  const int last_map = cfg.feature_map_count - 1;
  const int last_tap = cfg.inputs_per_map - 1;
  for (int ma = 0; ma <= cfg.codec.activation_levels; ++ma)
    for (int mw = 0; mw <= cfg.codec.weight_levels; ++mw)
      for (int sa : {+1, -1})
        for (int sw : {+1, -1})
          for (auto [map_idx, tap_idx] : {std::pair{0, 0}, std::pair{last_map, last_tap}}) {
            MacJob job = single_tap_job(cfg, map_idx, tap_idx,
                                        SignedMagnitude{sa, ma, cfg.codec.activation_levels},
                                        SignedMagnitude{sw, mw, cfg.codec.weight_levels});
            MacResult res = run_mac(job, cfg);
            ++r.checked;
            if (decode_sum_from_volts(res.analog_volts, cfg) != res.oracle_sum) ++r.failed;
          }
  r.pass = r.failed == 0;
  return r;
}

}  // namespace verify_detail

// Runs every verification suite under the loaded configuration. Invariant
// failures are tallied and reported, never thrown mid-run. When results_csv
// is given, each randomized trial appends one MacResult row.
inline std::vector<SuiteResult> run_verify(const RunConfig& cfg, std::ostream* results_csv = nullptr) {
  std::vector<SuiteResult> suites;
  suites.push_back(verify_detail::codec_round_trip(cfg.engine.codec));
  suites.push_back(verify_detail::codec_exact_product(cfg.engine.codec));
  suites.push_back(verify_detail::coverage_suite(cfg.engine.codec));
  suites.push_back(verify_detail::single_tap_suite(cfg.engine));

  const ChainConstants cc = chain_constants(cfg.engine.cal, cfg.engine.feature_map_count);
  const std::int64_t adc_tolerance = static_cast<std::int64_t>(
      std::ceil(0.5 * cfg.engine.adc.step() / cc.volts_per_count));
  const bool ideal_mode = cfg.engine.cal.noise_sigma_v == 0 &&
                          cfg.engine.cal.int_error_bound_v == 0 &&
                          cfg.engine.cal.vtc_nonlin.empty();

  SuiteResult oracle_eq{"randomized oracle equivalence (pre-ADC)"};
  SuiteResult adc_consistency{"randomized ADC consistency (tolerance " +
                              std::to_string(adc_tolerance) + " counts)"};
  SuiteResult flag_soundness{"pp underflow flag soundness"};

  if (results_csv) {
    CsvWriter header(*results_csv);
    header.comment("scsim verify campaign");
    header.comment("seed = " + std::to_string(cfg.seed));
    header.comment("trials = " + std::to_string(cfg.trials));
    header.row({"job_id", "decoded_sum", "oracle_sum", "analog_volts", "adc_code",
                "abs_error_volts", "flags"});
  }

  for (std::int64_t t = 0; t < cfg.trials; ++t) {
    std::mt19937_64 job_rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(2 * t)));
    NoiseSource noise(trial_seed(cfg.seed, static_cast<std::uint64_t>(2 * t + 1)));
    MacJob job = random_job(job_rng, cfg.engine);
    MacResult res = run_mac(job, cfg.engine, &noise);

    ++oracle_eq.checked;
    if (decode_sum_from_volts(res.analog_volts, cfg.engine) != res.oracle_sum) ++oracle_eq.failed;

    if (cfg.engine.adc_enabled) {
      ++adc_consistency.checked;
      if (std::llabs(res.decoded_sum - res.oracle_sum) > adc_tolerance) ++adc_consistency.failed;
    }

    if (ideal_mode) {
      bool expect_underflow = false;
      for (const KernelInput& k : job.maps) {
        std::int64_t pos, neg;
        oracle_counts(k, pos, neg);
        if (cc.seconds_per_count * static_cast<double>(neg - pos) > cc.t_ref)
          expect_underflow = true;
      }
      ++flag_soundness.checked;
      if (expect_underflow != ((res.flags & flag_pp_underflow) != 0)) ++flag_soundness.failed;
    }

    if (results_csv) {
      CsvWriter w(*results_csv);
      w.row({std::to_string(t), std::to_string(res.decoded_sum), std::to_string(res.oracle_sum),
             fmt_g(res.analog_volts), std::to_string(res.adc_code), fmt_g(res.abs_error_volts),
             flags_to_string(res.flags)});
    }
  }

  // constructed violating jobs must raise the underflow flag
  if (ideal_mode) {
    MacJob heavy = zero_job(cfg.engine);
    for (int i = 0; i < cfg.engine.inputs_per_map; ++i) {
      heavy.maps[0].activations[i] =
          SignedMagnitude{+1, cfg.engine.codec.activation_levels, cfg.engine.codec.activation_levels};
      heavy.maps[0].weights[i] =
          SignedMagnitude{-1, cfg.engine.codec.weight_levels, cfg.engine.codec.weight_levels};
    }
    std::int64_t pos, neg;
    oracle_counts(heavy.maps[0], pos, neg);
    if (cc.seconds_per_count * static_cast<double>(neg - pos) > cc.t_ref) {
      MacResult res = run_mac(heavy, cfg.engine);
      ++flag_soundness.checked;
      if (!(res.flags & flag_pp_underflow)) ++flag_soundness.failed;
    }
  } else {
    flag_soundness.detail = "skipped: non-ideal calibration";
  }

  oracle_eq.pass = oracle_eq.failed == 0;
  adc_consistency.pass = adc_consistency.failed == 0;
  flag_soundness.pass = flag_soundness.failed == 0;
  suites.push_back(oracle_eq);
  suites.push_back(adc_consistency);
  suites.push_back(flag_soundness);
  return suites;
}

}  // namespace scsim
