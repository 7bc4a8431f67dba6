// config.hpp -- run configuration: every module's calibration constants and
// campaign parameters, loaded from a flat key = value file with [section]
// headers and # comments. Unknown keys are an error; every applied default
// is echoed into the provenance log.

#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "energy_model.hpp"
#include "mac_engine.hpp"

namespace scsim {

struct RunConfig {
  EngineConfig engine;
  EnergyConfig energy;
  std::uint64_t seed = 1144;
  std::int64_t trials = 10000;
  std::vector<std::string> provenance;  // one line per key: value and its origin

  void validate() const {
    engine.validate();
    energy.validate();
    if (trials < 1) throw std::invalid_argument("campaign: trials must be >= 1");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string fmt_g(double v, int prec = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

template <typename T>
T parse_num(const std::string& text);

template <>
inline double parse_num<double>(const std::string& text) {
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

template <>
inline std::int64_t parse_num<std::int64_t>(const std::string& text) {
  std::size_t pos = 0;
  long long v = std::stoll(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

template <>
inline std::uint64_t parse_num<std::uint64_t>(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = std::stoull(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

inline bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("expected true/false");
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_num<double>(item));
  }
  return out;
}

struct KeySpec {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> show;
};

inline const std::vector<KeySpec>& key_table() {
  auto d = [](auto getter) {  // show a double field
    return [getter](const RunConfig& c) { return fmt_g(getter(c)); };
  };
  auto i = [](auto getter) {  // show an integer field
    return [getter](const RunConfig& c) { return std::to_string(getter(c)); };
  };
  static const std::vector<KeySpec> table = {
      {"codec.activation_levels",
       [](RunConfig& c, const std::string& v) { c.engine.codec.activation_levels = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.codec.activation_levels; })},
      {"codec.weight_levels",
       [](RunConfig& c, const std::string& v) { c.engine.codec.weight_levels = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.codec.weight_levels; })},
      {"codec.extended_length",
       [](RunConfig& c, const std::string& v) { c.engine.codec.extended_length = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.codec.extended_length; })},
      {"codec.pairing",
       [](RunConfig& c, const std::string& v) {
         if (v == "repetition") c.engine.codec.pairing = Pairing::repetition;
         else if (v == "clock_division") c.engine.codec.pairing = Pairing::clock_division;
         else throw std::invalid_argument("expected repetition or clock_division");
       },
       [](const RunConfig& c) {
         return std::string(c.engine.codec.pairing == Pairing::repetition ? "repetition" : "clock_division");
       }},
      {"analog.vdd",
       [](RunConfig& c, const std::string& v) { c.engine.cal.vdd = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.vdd; })},
      {"analog.sac_v_min",
       [](RunConfig& c, const std::string& v) { c.engine.cal.sac_v_min = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.sac_v_min; })},
      {"analog.sac_v_max",
       [](RunConfig& c, const std::string& v) { c.engine.cal.sac_v_max = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.sac_v_max; })},
      {"analog.sac_count_max",
       [](RunConfig& c, const std::string& v) { c.engine.cal.sac_count_max = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.cal.sac_count_max; })},
      {"analog.vtc_gain_s_per_v",
       [](RunConfig& c, const std::string& v) { c.engine.cal.vtc_gain = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.vtc_gain; })},
      {"analog.vtc_linear_lo",
       [](RunConfig& c, const std::string& v) { c.engine.cal.vtc_linear_lo = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.vtc_linear_lo; })},
      {"analog.vtc_linear_hi",
       [](RunConfig& c, const std::string& v) { c.engine.cal.vtc_linear_hi = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.vtc_linear_hi; })},
      {"analog.int_gain_v_per_s",
       [](RunConfig& c, const std::string& v) { c.engine.cal.int_gain = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.int_gain; })},
      {"analog.noise_sigma_v",
       [](RunConfig& c, const std::string& v) { c.engine.cal.noise_sigma_v = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.noise_sigma_v; })},
      {"analog.vtc_nonlin",
       [](RunConfig& c, const std::string& v) { c.engine.cal.vtc_nonlin = parse_double_list(v); },
       [](const RunConfig& c) {
         if (c.engine.cal.vtc_nonlin.empty()) return std::string("0");
         std::string out;
         for (double x : c.engine.cal.vtc_nonlin) {
           if (!out.empty()) out += ",";
           out += fmt_g(x);
         }
         return out;
       }},
      {"analog.int_error_bound_v",
       [](RunConfig& c, const std::string& v) { c.engine.cal.int_error_bound_v = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.cal.int_error_bound_v; })},
      {"adc.bits",
       [](RunConfig& c, const std::string& v) { c.engine.adc.bits = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.adc.bits; })},
      {"adc.v_lo",
       [](RunConfig& c, const std::string& v) { c.engine.adc.v_lo = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.adc.v_lo; })},
      {"adc.v_hi",
       [](RunConfig& c, const std::string& v) { c.engine.adc.v_hi = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.adc.v_hi; })},
      {"engine.inputs_per_map",
       [](RunConfig& c, const std::string& v) { c.engine.inputs_per_map = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.inputs_per_map; })},
      {"engine.feature_map_count",
       [](RunConfig& c, const std::string& v) { c.engine.feature_map_count = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.engine.feature_map_count; })},
      {"engine.adc_enabled",
       [](RunConfig& c, const std::string& v) { c.engine.adc_enabled = parse_bool(v); },
       [](const RunConfig& c) { return std::string(c.engine.adc_enabled ? "true" : "false"); }},
      {"engine.renorm_enabled",
       [](RunConfig& c, const std::string& v) { c.engine.renorm_enabled = parse_bool(v); },
       [](const RunConfig& c) { return std::string(c.engine.renorm_enabled ? "true" : "false"); }},
      {"engine.renorm_scale",
       [](RunConfig& c, const std::string& v) { c.engine.renorm_scale = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.engine.renorm_scale; })},
      {"energy.decoder_per_input_fj",
       [](RunConfig& c, const std::string& v) { c.energy.decoder_per_input_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.decoder_per_input_fj; })},
      {"energy.and_array_per_map_fj",
       [](RunConfig& c, const std::string& v) { c.energy.and_array_per_map_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.and_array_per_map_fj; })},
      {"energy.sac_per_stage_fj",
       [](RunConfig& c, const std::string& v) { c.energy.sac_per_stage_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.sac_per_stage_fj; })},
      {"energy.vtc_per_conversion_fj",
       [](RunConfig& c, const std::string& v) { c.energy.vtc_per_conversion_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.vtc_per_conversion_fj; })},
      {"energy.pp_per_map_fj",
       [](RunConfig& c, const std::string& v) { c.energy.pp_per_map_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.pp_per_map_fj; })},
      {"energy.int_per_map_fj",
       [](RunConfig& c, const std::string& v) { c.energy.int_per_map_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.int_per_map_fj; })},
      {"energy.adc_per_conversion_fj",
       [](RunConfig& c, const std::string& v) { c.energy.adc_per_conversion_fj = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.energy.adc_per_conversion_fj; })},
      {"energy.clock_hz",
       [](RunConfig& c, const std::string& v) { c.energy.clock_hz = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.energy.clock_hz; })},
      {"energy.cycles_per_mac",
       [](RunConfig& c, const std::string& v) { c.energy.cycles_per_mac = parse_num<double>(v); },
       d([](const RunConfig& c) { return c.energy.cycles_per_mac; })},
      {"energy.ops_per_mac",
       [](RunConfig& c, const std::string& v) { c.energy.ops_per_mac = static_cast<int>(parse_num<std::int64_t>(v)); },
       i([](const RunConfig& c) { return c.energy.ops_per_mac; })},
      {"campaign.seed",
       [](RunConfig& c, const std::string& v) { c.seed = parse_num<std::uint64_t>(v); },
       i([](const RunConfig& c) { return static_cast<std::int64_t>(c.seed); })},
      {"campaign.trials",
       [](RunConfig& c, const std::string& v) { c.trials = parse_num<std::int64_t>(v); },
       i([](const RunConfig& c) { return c.trials; })},
  };
  return table;
}

}  // namespace detail

// Parses the key = value format. Defaults fill any absent key; every key's
// final value and origin land in the provenance log. Unknown keys, duplicate
// keys and malformed lines are errors carrying the line number.
inline RunConfig parse_config(std::istream& in, const std::string& source) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> file_values;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(source + ":" + std::to_string(lineno) + ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": empty key");
    if (key.find('.') == std::string::npos && !section.empty()) key = section + "." + key;
    if (file_values.count(key))
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    file_values[key] = Entry{value, lineno};
  }

  const auto& table = detail::key_table();
  for (const auto& [key, entry] : file_values) {
    bool known = false;
    for (const auto& spec : table)
      if (key == spec.name) known = true;
    if (!known)
      throw std::runtime_error(source + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
  }

  RunConfig cfg;
  bool extended_given = false;
  for (const auto& spec : table) {
    auto it = file_values.find(spec.name);
    if (it == file_values.end()) continue;
    if (std::string(spec.name) == "codec.extended_length") extended_given = true;
    try {
      spec.set(cfg, it->second.value);
    } catch (const std::exception& e) {
      throw std::runtime_error(source + ":" + std::to_string(it->second.line) + ": bad value for '" +
                               spec.name + "': " + e.what());
    }
  }
  // extended_length follows the level widths unless pinned explicitly
  if (!extended_given)
    cfg.engine.codec.extended_length =
        cfg.engine.codec.activation_levels * cfg.engine.codec.weight_levels;

  for (const auto& spec : table) {
    auto it = file_values.find(spec.name);
    std::string origin = (it != file_values.end())
                             ? source + ":" + std::to_string(it->second.line)
                             : std::string("default");
    cfg.provenance.push_back(std::string(spec.name) + " = " + spec.show(cfg) + "  # " + origin);
  }

  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, path);
}

inline RunConfig default_config() {
  std::istringstream empty;
  return parse_config(empty, "defaults");
}

}  // namespace scsim
