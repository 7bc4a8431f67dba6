// Energy ledger tests: exact femtojoule tallies and the consistency
// triangle across the three headline figures.

#include <catch2/catch_amalgamated.hpp>

#include <scsim/energy_model.hpp>

using namespace scsim;
using Catch::Approx;

namespace {

// Event counts of one default job: 6 feature maps, 26 inputs each, one
// accumulated ADC conversion.
EnergyLedger one_job_ledger(const EnergyConfig& cfg) {
  EnergyLedger ledger(cfg);
  ledger.record(Component::decoder, 6 * 52);
  ledger.record(Component::and_array, 6);
  ledger.record(Component::sac, 12);  // POS + NEG per map
  ledger.record(Component::vtc, 12);
  ledger.record(Component::pp, 6);
  ledger.record(Component::integrator, 6);
  ledger.record(Component::adc, 1);
  return ledger;
}

}  // namespace

TEST_CASE("ledger tallies and totals are exact") {
  EnergyLedger ledger{EnergyConfig{}};
  REQUIRE(ledger.total_fj() == 0);
  REQUIRE(ledger.total_joules() == 0.0);

  ledger.record(Component::and_array, 6);
  REQUIRE(ledger.tally(Component::and_array) == 6);
  ledger.record(Component::sac, 12);
  REQUIRE(ledger.tally(Component::sac) == 12);
  REQUIRE(ledger.total_fj() == 6 * 150 + 12 * 450);

  REQUIRE_THROWS_AS(ledger.record(Component::sac, -1), std::invalid_argument);
  REQUIRE_THROWS_AS(ledger.record(static_cast<Component>(42), 1), std::invalid_argument);
}

TEST_CASE("merging ledgers sums tallies") {
  EnergyLedger a = one_job_ledger(EnergyConfig{});
  EnergyLedger b = one_job_ledger(EnergyConfig{});
  a.merge(b);
  REQUIRE(a.tally(Component::decoder) == 2 * 6 * 52);
  REQUIRE(a.total_fj() == 2 * b.total_fj());
}

TEST_CASE("default configuration reproduces the consistency triangle") {
  const EnergyConfig cfg{};
  EnergyLedger ledger = one_job_ledger(cfg);
  const double e_mac = energy_per_mac(ledger, 6);

  REQUIRE(e_mac * 1e12 == Approx(5.03).epsilon(0.01));
  REQUIRE(cfg.mac_rate_hz() == Approx(4e6).epsilon(1e-12));
  REQUIRE(power_at_rate(e_mac, cfg.mac_rate_hz()) * 1e6 == Approx(20.12).epsilon(0.01));
  REQUIRE(tops_per_watt(e_mac, cfg.ops_per_mac) == Approx(10.14).epsilon(0.01));

  // the ledger total per MAC is exact in femtojoules
  REQUIRE(ledger.total_fj() == 6 * 5030);
}

TEST_CASE("power and efficiency identities") {
  REQUIRE(power_at_rate(5.03e-12, 4e6) * 1e6 == Approx(20.12).epsilon(1e-12));
  REQUIRE(power_at_rate(5.03e-12, 25e6) * 1e6 == Approx(125.75).epsilon(1e-12));
  REQUIRE(power_at_rate(5.03e-12, 0.0) == 0.0);
  REQUIRE(tops_per_watt(1e-12, 1) == Approx(1.0).epsilon(1e-12));
  REQUIRE(tops_per_watt(5.03e-12, 102) == Approx(2 * 10.139165).epsilon(1e-4));
}

TEST_CASE("energy scales linearly with per-event costs") {
  EnergyConfig doubled{};
  doubled.decoder_per_input_fj *= 2;
  doubled.and_array_per_map_fj *= 2;
  doubled.sac_per_stage_fj *= 2;
  doubled.vtc_per_conversion_fj *= 2;
  doubled.pp_per_map_fj *= 2;
  doubled.int_per_map_fj *= 2;
  doubled.adc_per_conversion_fj *= 2;

  const double base = energy_per_mac(one_job_ledger(EnergyConfig{}), 6);
  const double twice = energy_per_mac(one_job_ledger(doubled), 6);
  REQUIRE(twice == Approx(2 * base).epsilon(1e-12));
  REQUIRE(tops_per_watt(twice, 51) == Approx(tops_per_watt(base, 51) / 2).epsilon(1e-12));

  EnergyConfig zero{};
  zero.decoder_per_input_fj = zero.and_array_per_map_fj = zero.sac_per_stage_fj = 0;
  zero.vtc_per_conversion_fj = zero.pp_per_map_fj = zero.int_per_map_fj = 0;
  zero.adc_per_conversion_fj = 0;
  REQUIRE(energy_per_mac(one_job_ledger(zero), 6) == 0.0);
}

TEST_CASE("guards reject degenerate inputs") {
  EnergyLedger ledger = one_job_ledger(EnergyConfig{});
  REQUIRE_THROWS_AS(energy_per_mac(ledger, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(tops_per_watt(0.0, 51), std::invalid_argument);
  EnergyConfig bad{};
  bad.clock_hz = 0;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = EnergyConfig{};
  bad.ops_per_mac = 0;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = EnergyConfig{};
  bad.sac_per_stage_fj = -1;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}
