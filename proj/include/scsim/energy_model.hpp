// energy_model.hpp -- per-component energy ledger.
//
// Per-event energies are integer femtojoules so ledger totals are exact
// sums. The default split is a documented assumption calibrated to the
// design targets (5.03 pJ per 26-input MAC, 20.12 uW at a 4 MHz MAC rate,
// 10.14 TOPS/W with 51 ops per MAC); only the totals are measured figures.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace scsim {

enum class Component { decoder, and_array, sac, vtc, pp, integrator, adc };
inline constexpr int component_count = 7;

inline const char* component_name(Component c) {
  switch (c) {
    case Component::decoder: return "decoder";
    case Component::and_array: return "and_array";
    case Component::sac: return "sac";
    case Component::vtc: return "vtc";
    case Component::pp: return "pp";
    case Component::integrator: return "int";
    case Component::adc: return "adc";
  }
  throw std::invalid_argument("unknown energy component");
}

struct EnergyConfig {
  // Per-event energies, femtojoules. One 26-input MAC (one feature map)
  // triggers 52 decoder events, 1 AND-array pass, 2 SAC stages (POS+NEG),
  // 2 VTC conversions, 1 PP pass and 1 INT charge; the ADC converts once
  // per accumulated job and is amortized over its feature maps.
  std::int64_t decoder_per_input_fj = 40;
  std::int64_t and_array_per_map_fj = 150;
  std::int64_t sac_per_stage_fj = 450;
  std::int64_t vtc_per_conversion_fj = 400;
  std::int64_t pp_per_map_fj = 150;
  std::int64_t int_per_map_fj = 650;
  std::int64_t adc_per_conversion_fj = 1800;

  double clock_hz = 25e6;
  double cycles_per_mac = 6.25;  // non-integer; forced by the power/energy ratio
  int ops_per_mac = 51;          // 26 multiplies + 25 additions

  // Published headline figures the report compares against.
  double reference_pj_per_mac = 5.03;
  double reference_power_uw = 20.12;
  double reference_tops_per_watt = 10.14;

  std::int64_t per_event_fj(Component c) const {
    switch (c) {
      case Component::decoder: return decoder_per_input_fj;
      case Component::and_array: return and_array_per_map_fj;
      case Component::sac: return sac_per_stage_fj;
      case Component::vtc: return vtc_per_conversion_fj;
      case Component::pp: return pp_per_map_fj;
      case Component::integrator: return int_per_map_fj;
      case Component::adc: return adc_per_conversion_fj;
    }
    throw std::invalid_argument("unknown energy component");
  }

  double mac_rate_hz() const { return clock_hz / cycles_per_mac; }

  void validate() const {
    for (int i = 0; i < component_count; ++i)
      if (per_event_fj(static_cast<Component>(i)) < 0)
        throw std::invalid_argument("energy: per-event energies must be >= 0");
    if (!(clock_hz > 0)) throw std::invalid_argument("energy: clock_hz must be > 0");
    if (!(cycles_per_mac > 0)) throw std::invalid_argument("energy: cycles_per_mac must be > 0");
    if (ops_per_mac < 1) throw std::invalid_argument("energy: ops_per_mac must be >= 1");
  }
};

// Event tallies plus an exact running total. Plain value; merging two
// ledgers is a commutative tally sum.
class EnergyLedger {
 public:
  explicit EnergyLedger(const EnergyConfig& cfg = EnergyConfig{}) : cfg_(cfg) {}

  void record(Component c, std::int64_t count) {
    const int idx = static_cast<int>(c);
    if (idx < 0 || idx >= component_count)
      throw std::invalid_argument("record: unknown component");
    if (count < 0) throw std::invalid_argument("record: count must be >= 0");
    tallies_[idx] += count;
    total_fj_ += count * cfg_.per_event_fj(c);
  }

  std::int64_t tally(Component c) const { return tallies_[static_cast<int>(c)]; }
  std::int64_t total_fj() const { return total_fj_; }
  double total_joules() const { return static_cast<double>(total_fj_) * 1e-15; }
  const EnergyConfig& config() const { return cfg_; }

  void merge(const EnergyLedger& other) {
    for (int i = 0; i < component_count; ++i) tallies_[i] += other.tallies_[i];
    total_fj_ += other.total_fj_;
  }

 private:
  EnergyConfig cfg_;
  std::array<std::int64_t, component_count> tallies_{};
  std::int64_t total_fj_ = 0;
};

inline double energy_per_mac(const EnergyLedger& ledger, std::int64_t mac_count) {
  if (mac_count < 1) throw std::invalid_argument("energy_per_mac: mac_count must be >= 1");
  return ledger.total_joules() / static_cast<double>(mac_count);
}

inline double power_at_rate(double e_per_mac_joules, double mac_rate_hz) {
  return e_per_mac_joules * mac_rate_hz;
}

// Tera-operations per second per watt.
inline double tops_per_watt(double e_per_mac_joules, int ops_per_mac) {
  if (!(e_per_mac_joules > 0)) throw std::invalid_argument("tops_per_watt: energy must be > 0");
  return static_cast<double>(ops_per_mac) / e_per_mac_joules / 1e12;
}

}  // namespace scsim
