// scsim.cpp -- command-line front end: transfer-characteristic sweeps,
// verification campaigns, the convolution demo and the energy report.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <scsim/scsim.hpp>

namespace fs = std::filesystem;
using namespace scsim;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t trials = 0;
  bool trials_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file (key = value format)");
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "campaign seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--trials", opts.trials, "trial count override")
      ->each([&opts](const std::string&) { opts.trials_set = true; });
}

RunConfig load(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
  if (opts.seed_set) {
    cfg.seed = opts.seed;
    cfg.provenance.push_back("campaign.seed = " + std::to_string(cfg.seed) + "  # command line");
  }
  if (opts.trials_set) {
    if (opts.trials < 1) throw std::runtime_error("campaign: trials must be >= 1");
    cfg.trials = opts.trials;
    cfg.provenance.push_back("campaign.trials = " + std::to_string(cfg.trials) + "  # command line");
  }
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings on every platform
  if (!out) throw std::runtime_error("cannot write output file: " + path.string());
  return out;
}

// Full key/value/origin echo so a run's effective configuration is auditable.
void write_provenance(const RunConfig& cfg, const fs::path& out_dir) {
  std::ofstream out = open_out(out_dir / "config_used.txt");
  out << "# effective configuration (value and origin per key)\n";
  for (const std::string& line : cfg.provenance) out << line << '\n';
}

int cmd_sweep(const std::string& target, const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  fs::create_directories(opts.out_dir);
  write_provenance(cfg, opts.out_dir);
  const fs::path path = fs::path(opts.out_dir) / ("sweep_" + target + ".csv");
  std::ofstream out = open_out(path);
  write_sweep(target, out, cfg);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_verify(const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  fs::create_directories(opts.out_dir);
  write_provenance(cfg, opts.out_dir);

  std::ofstream results = open_out(fs::path(opts.out_dir) / "verify_results.csv");
  std::vector<SuiteResult> suites = run_verify(cfg, &results);

  std::ostringstream report;
  report << "scsim verify\n";
  report << "seed = " << cfg.seed << "\n";
  report << "trials = " << cfg.trials << "\n";
  int passed = 0;
  for (const SuiteResult& s : suites) {
    report << (s.pass ? "[PASS] " : "[FAIL] ") << s.name << ": "
           << (s.checked - s.failed) << "/" << s.checked << " checks";
    if (!s.detail.empty()) report << " (" << s.detail << ")";
    report << "\n";
    if (s.pass) ++passed;
  }
  const bool all_pass = passed == static_cast<int>(suites.size());
  report << "verify: " << (all_pass ? "PASS" : "FAIL") << " (" << passed << "/" << suites.size()
         << " suites)\n";

  std::ofstream rpt = open_out(fs::path(opts.out_dir) / "verify_report.txt");
  rpt << report.str();
  std::cout << report.str();
  return all_pass ? 0 : 1;
}

int cmd_conv(const std::string& image_path, const std::string& weights_path,
             const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  fs::create_directories(opts.out_dir);
  write_provenance(cfg, opts.out_dir);
  const EngineConfig& eng = cfg.engine;

  std::ifstream img_in(image_path);
  if (!img_in) throw std::runtime_error("cannot open image file: " + image_path);
  SignedImage img = load_image(img_in, image_path);
  std::ifstream w_in(weights_path);
  if (!w_in) throw std::runtime_error("cannot open weights file: " + weights_path);
  KernelSet ks = load_kernels(w_in, weights_path);

  if (img.channels != eng.feature_map_count)
    throw std::runtime_error("conv: image has " + std::to_string(img.channels) +
                             " channels, engine expects " + std::to_string(eng.feature_map_count));
  if (ks.kernels != eng.feature_map_count)
    throw std::runtime_error("conv: weight file has " + std::to_string(ks.kernels) +
                             " kernels, engine expects " + std::to_string(eng.feature_map_count));
  if (ks.kh * ks.kw + 1 != eng.inputs_per_map)
    throw std::runtime_error("conv: kernel size " + std::to_string(ks.kh) + "x" +
                             std::to_string(ks.kw) + " plus bias does not match inputs_per_map " +
                             std::to_string(eng.inputs_per_map));
  if (img.levels != eng.codec.activation_levels)
    throw std::runtime_error("conv: image levels " + std::to_string(img.levels) +
                             " do not match activation levels " +
                             std::to_string(eng.codec.activation_levels));
  if (ks.levels != eng.codec.weight_levels)
    throw std::runtime_error("conv: weight levels " + std::to_string(ks.levels) +
                             " do not match weight levels " +
                             std::to_string(eng.codec.weight_levels));
  if (img.height < ks.kh || img.width < ks.kw)
    throw std::runtime_error("conv: image smaller than the kernel");

  const int oh = img.height - ks.kh + 1;
  const int ow = img.width - ks.kw + 1;
  const SignedMagnitude bias_input{+1, eng.codec.activation_levels, eng.codec.activation_levels};

  EnergyLedger ledger(cfg.energy);
  std::vector<MacResult> results;
  results.reserve(static_cast<std::size_t>(oh) * ow);

  SignedImage decoded_map, oracle_map;
  const int out_levels = eng.renorm_enabled
                             ? eng.codec.activation_levels
                             : eng.feature_map_count * eng.inputs_per_map * eng.codec.extended_length;
  decoded_map.height = oracle_map.height = oh;
  decoded_map.width = oracle_map.width = ow;
  decoded_map.channels = oracle_map.channels = 1;
  decoded_map.levels = oracle_map.levels = out_levels;
  decoded_map.values.resize(static_cast<std::size_t>(oh) * ow);
  oracle_map.values.resize(static_cast<std::size_t>(oh) * ow);

  for (int oy = 0; oy < oh; ++oy)
    for (int ox = 0; ox < ow; ++ox) {
      MacJob job;
      job.maps.resize(eng.feature_map_count);
      for (int c = 0; c < eng.feature_map_count; ++c) {
        KernelInput& k = job.maps[c];
        k.activations.reserve(eng.inputs_per_map);
        k.weights.reserve(eng.inputs_per_map);
        for (int ky = 0; ky < ks.kh; ++ky)
          for (int kx = 0; kx < ks.kw; ++kx) {
            const int px = img.at(c, oy + ky, ox + kx);
            k.activations.push_back(SignedMagnitude{px < 0 ? -1 : +1, px < 0 ? -px : px,
                                                    eng.codec.activation_levels});
            const int wt = ks.tap(c, ky, kx);
            k.weights.push_back(
                SignedMagnitude{wt < 0 ? -1 : +1, wt < 0 ? -wt : wt, eng.codec.weight_levels});
          }
        k.activations.push_back(bias_input);
        const int b = ks.bias[c];
        k.weights.push_back(SignedMagnitude{b < 0 ? -1 : +1, b < 0 ? -b : b, eng.codec.weight_levels});
      }
      const std::uint64_t pixel = static_cast<std::uint64_t>(oy) * ow + ox;
      NoiseSource noise(trial_seed(cfg.seed, pixel));
      MacResult res = run_mac(job, eng, &noise, &ledger);
      results.push_back(res);

      std::int64_t dec = res.decoded_sum, orc = res.oracle_sum;
      if (eng.renorm_enabled) {
        SignedMagnitude rd = renormalize(dec, eng.renorm_scale, eng.codec.activation_levels);
        SignedMagnitude ro = renormalize(orc, eng.renorm_scale, eng.codec.activation_levels);
        dec = static_cast<std::int64_t>(rd.sign) * rd.magnitude;
        orc = static_cast<std::int64_t>(ro.sign) * ro.magnitude;
      }
      decoded_map.values[pixel] = static_cast<int>(dec);
      oracle_map.values[pixel] = static_cast<int>(orc);
    }

  {
    std::ofstream out = open_out(fs::path(opts.out_dir) / "conv_decoded.txt");
    save_image(out, decoded_map);
  }
  {
    std::ofstream out = open_out(fs::path(opts.out_dir) / "conv_oracle.txt");
    save_image(out, oracle_map);
  }

  std::int64_t max_dev = 0;
  double sq_dev = 0.0;
  for (std::size_t i = 0; i < decoded_map.values.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(decoded_map.values[i]) - oracle_map.values[i];
    max_dev = std::max<std::int64_t>(max_dev, std::llabs(d));
    sq_dev += static_cast<double>(d) * d;
  }
  const ErrorSummary es = error_metrics(results);
  const std::int64_t macs = static_cast<std::int64_t>(results.size()) * eng.feature_map_count;
  const double e_mac = energy_per_mac(ledger, macs);
  const double power = power_at_rate(e_mac, cfg.energy.mac_rate_hz());
  const double tops = tops_per_watt(e_mac, cfg.energy.ops_per_mac);

  std::ostringstream report;
  report << "scsim conv\n";
  report << "seed = " << cfg.seed << "\n";
  report << "output map = " << oh << " x " << ow << " pixels, " << macs << " MAC operations\n";
  report << "max |decoded - oracle| = " << max_dev << "\n";
  report << "rms (decoded - oracle) = " << fmt_g(std::sqrt(sq_dev / results.size())) << "\n";
  report << "max analog error = " << fmt_g(es.max_abs_error_volts) << " V\n";
  report << "rms analog error = " << fmt_g(es.rms_error_volts) << " V\n";
  report << "flags: out_of_linear_range=" << es.n_out_of_linear_range
         << " pp_underflow=" << es.n_pp_underflow << " int_overflow=" << es.n_int_overflow
         << " adc_saturated=" << es.n_adc_saturated << "\n";
  report << "energy per MAC = " << fmt_g(e_mac * 1e12) << " pJ\n";
  report << "power at " << fmt_g(cfg.energy.mac_rate_hz() / 1e6) << " MHz MAC rate = "
         << fmt_g(power * 1e6) << " uW\n";
  report << "efficiency = " << fmt_g(tops) << " TOPS/W\n";

  std::ofstream rpt = open_out(fs::path(opts.out_dir) / "conv_report.txt");
  rpt << report.str();
  std::cout << report.str();
  return 0;
}

int cmd_report(const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  fs::create_directories(opts.out_dir);
  write_provenance(cfg, opts.out_dir);

  EnergyLedger ledger(cfg.energy);
  run_mac(zero_job(cfg.engine), cfg.engine, nullptr, &ledger);
  const std::int64_t macs = cfg.engine.feature_map_count;
  const double e_mac = energy_per_mac(ledger, macs);
  const double power = power_at_rate(e_mac, cfg.energy.mac_rate_hz());
  const double tops = tops_per_watt(e_mac, cfg.energy.ops_per_mac);

  auto pct_dev = [](double value, double ref) { return 100.0 * (value - ref) / ref; };

  char line[160];
  std::ostringstream txt;
  txt << "scsim energy report (one " << cfg.engine.inputs_per_map << "-input MAC job, "
      << macs << " feature maps)\n\n";
  txt << "  component    events   fJ/event   subtotal fJ   share\n";
  std::ostringstream csv_body;
  CsvWriter csv(csv_body);
  csv.comment("scsim energy report");
  csv.comment("seed = " + std::to_string(cfg.seed));
  csv.row({"component", "events", "fj_per_event", "subtotal_fj", "share_pct"});
  for (int i = 0; i < component_count; ++i) {
    const Component c = static_cast<Component>(i);
    const std::int64_t events = ledger.tally(c);
    const std::int64_t per = cfg.energy.per_event_fj(c);
    const std::int64_t sub = events * per;
    const double share = 100.0 * static_cast<double>(sub) / static_cast<double>(ledger.total_fj());
    std::snprintf(line, sizeof line, "  %-10s %8lld %10lld %13lld %6.2f%%\n", component_name(c),
                  static_cast<long long>(events), static_cast<long long>(per),
                  static_cast<long long>(sub), share);
    txt << line;
    csv.row({component_name(c), std::to_string(events), std::to_string(per), std::to_string(sub),
             fmt_g(share, 6)});
  }
  std::snprintf(line, sizeof line, "  %-10s %8s %10s %13lld %6.2f%%\n", "total", "", "",
                static_cast<long long>(ledger.total_fj()), 100.0);
  txt << line << "\n";

  std::snprintf(line, sizeof line,
                "  energy per MAC : %10.4f pJ   (reference %.2f pJ, deviation %+.3f%%)\n",
                e_mac * 1e12, cfg.energy.reference_pj_per_mac,
                pct_dev(e_mac * 1e12, cfg.energy.reference_pj_per_mac));
  txt << line;
  std::snprintf(line, sizeof line,
                "  power          : %10.4f uW   (reference %.2f uW at %.3g MHz MAC rate, deviation %+.3f%%)\n",
                power * 1e6, cfg.energy.reference_power_uw, cfg.energy.mac_rate_hz() / 1e6,
                pct_dev(power * 1e6, cfg.energy.reference_power_uw));
  txt << line;
  std::snprintf(line, sizeof line,
                "  efficiency     : %10.4f TOPS/W (reference %.2f TOPS/W, %d ops per MAC, deviation %+.3f%%)\n",
                tops, cfg.energy.reference_tops_per_watt, cfg.energy.ops_per_mac,
                pct_dev(tops, cfg.energy.reference_tops_per_watt));
  txt << line;
  std::snprintf(line, sizeof line,
                "  note: %.6g clock cycles per MAC at %.3g MHz is non-integer\n",
                cfg.energy.cycles_per_mac, cfg.energy.clock_hz / 1e6);
  txt << line;
  csv.row({"energy_per_mac_pj", fmt_g(e_mac * 1e12), "", "", ""});
  csv.row({"power_uw", fmt_g(power * 1e6), "", "", ""});
  csv.row({"tops_per_watt", fmt_g(tops), "", "", ""});

  std::ofstream t = open_out(fs::path(opts.out_dir) / "energy_report.txt");
  t << txt.str();
  std::ofstream c = open_out(fs::path(opts.out_dir) / "energy_report.csv");
  c << csv_body.str();
  std::cout << txt.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"behavioral simulator for a stochastic-computing mixed-signal MAC engine"};
  app.require_subcommand(1);

  CommonOpts sweep_opts, verify_opts, conv_opts, report_opts;
  std::string sweep_target, image_path, weights_path;

  CLI::App* sweep = app.add_subcommand("sweep", "emit a transfer-characteristic CSV");
  sweep->add_option("target", sweep_target, "one of: sac, vtc, int, engine")
      ->required()
      ->check(CLI::IsMember({"sac", "vtc", "int", "engine"}));
  add_common(sweep, sweep_opts);

  CLI::App* verify = app.add_subcommand("verify", "run the verification suites and campaign");
  add_common(verify, verify_opts);

  CLI::App* conv = app.add_subcommand("conv", "convolve an image with a kernel set");
  conv->add_option("image", image_path, "input image file")->required();
  conv->add_option("weights", weights_path, "kernel set file")->required();
  add_common(conv, conv_opts);

  CLI::App* report = app.add_subcommand("report", "emit the per-component energy breakdown");
  add_common(report, report_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return cmd_sweep(sweep_target, sweep_opts);
    if (verify->parsed()) return cmd_verify(verify_opts);
    if (conv->parsed()) return cmd_conv(image_path, weights_path, conv_opts);
    if (report->parsed()) return cmd_report(report_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
