// sweep.hpp -- transfer-characteristic sweeps over the analog stages and
// the composed engine, emitted as CSV with a monotone input grid and exact
// endpoint rows.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "job_io.hpp"

namespace scsim {

inline void sweep_header(CsvWriter& csv, const RunConfig& cfg, const std::string& target) {
  csv.comment("scsim sweep " + target);
  csv.comment("seed = " + std::to_string(cfg.seed));
}

// Ones count 0..sac_count_max against the SAC output voltage.
inline void write_sweep_sac(std::ostream& out, const RunConfig& cfg) {
  CsvWriter csv(out);
  sweep_header(csv, cfg, "sac");
  csv.row({"ones_count", "v_sac_volts", "flags"});
  NoiseSource noise(cfg.seed);
  for (int c = 0; c <= cfg.engine.cal.sac_count_max; ++c) {
    AnalogLevel v = sac_transfer(c, cfg.engine.cal, &noise);
    csv.row({std::to_string(c), fmt_g(v.volts), ""});
  }
}

// Input voltage 0..vtc_linear_hi in 1 mV steps; rows outside the linear
// window carry the out_of_linear_range flag.
inline void write_sweep_vtc(std::ostream& out, const RunConfig& cfg) {
  CsvWriter csv(out);
  sweep_header(csv, cfg, "vtc");
  csv.row({"v_in_volts", "pulse_width_ns", "flags"});
  const int steps = static_cast<int>(cfg.engine.cal.vtc_linear_hi * 1000.0 + 0.5);
  for (int i = 0; i <= steps; ++i) {
    const double v = static_cast<double>(i) / 1000.0;
    Flags flags = 0;
    Pulse p = vtc_transfer(AnalogLevel{v}, cfg.engine.cal, flags);
    csv.row({fmt_g(v), fmt_g(p.width * 1e9), flags_to_string(flags)});
  }
}

// Pulse width 0..full scale against a single INT charge from 0 V.
inline void write_sweep_int(std::ostream& out, const RunConfig& cfg) {
  CsvWriter csv(out);
  sweep_header(csv, cfg, "int");
  csv.row({"pulse_width_ns", "v_int_volts", "flags"});
  const double full = cfg.engine.cal.vtc_gain * cfg.engine.cal.vtc_linear_hi;
  const int steps = 1000;
  NoiseSource noise(cfg.seed);
  for (int i = 0; i <= steps; ++i) {
    const double w = full * static_cast<double>(i) / steps;
    Flags flags = 0;
    AnalogLevel v = int_accumulate(AnalogLevel{0.0}, Pulse{w}, cfg.engine.cal, flags, &noise);
    csv.row({fmt_g(w * 1e9), fmt_g(v.volts), flags_to_string(flags)});
  }
}

// A single signed product count swept through SAC -> VTC -> PP -> INT for
// one feature map, with the deviation from the ideal chain alongside.
inline void write_sweep_engine(std::ostream& out, const RunConfig& cfg) {
  CsvWriter csv(out);
  sweep_header(csv, cfg, "engine");
  csv.row({"signed_count", "v_int_volts", "v_ideal_volts", "abs_error_volts", "flags"});
  const AnalogCalibration ideal = ideal_of(cfg.engine.cal);
  NoiseSource noise(cfg.seed);
  const int max = cfg.engine.cal.sac_count_max;
  for (int n = -max; n <= max; ++n) {
    const std::int64_t pos = n > 0 ? n : 0;
    const std::int64_t neg = n < 0 ? -n : 0;
    FeatureMapResult fm = feature_map_from_counts(pos, neg, cfg.engine.cal, &noise);
    Flags flags = fm.flags;
    AnalogLevel v = int_accumulate(AnalogLevel{0.0}, fm.pulse, cfg.engine.cal, flags, &noise);

    Flags ideal_flags = 0;
    FeatureMapResult fm_ideal = feature_map_from_counts(pos, neg, ideal);
    AnalogLevel v_ideal = int_accumulate(AnalogLevel{0.0}, fm_ideal.pulse, ideal, ideal_flags);

    csv.row({std::to_string(n), fmt_g(v.volts), fmt_g(v_ideal.volts),
             fmt_g(std::fabs(v.volts - v_ideal.volts)), flags_to_string(flags)});
  }
}

inline void write_sweep(const std::string& target, std::ostream& out, const RunConfig& cfg) {
  if (target == "sac") write_sweep_sac(out, cfg);
  else if (target == "vtc") write_sweep_vtc(out, cfg);
  else if (target == "int") write_sweep_int(out, cfg);
  else if (target == "engine") write_sweep_engine(out, cfg);
  else throw std::invalid_argument("sweep: unknown target '" + target + "'");
}

}  // namespace scsim
