// job_io.hpp -- text formats for jobs, images, kernel sets and CSV output.
//
// Jobs: one feature map per line, the signed activation magnitudes, a '|',
// then the signed weight magnitudes; feature_map_count consecutive lines
// form one job. Images and kernel sets are plain text matrices with a
// one-line header carrying dimensions and levels.

#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mac_engine.hpp"

namespace scsim {

// Deterministic float formatting shared by every CSV/report writer.
inline std::string fmt_g(double v, int prec = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// Signed decimal token -> sign/magnitude pair with the given level bound.
inline SignedMagnitude parse_signed_value(const std::string& token, int levels,
                                          const std::string& where) {
  std::size_t pos = 0;
  long long raw = 0;
  try {
    raw = std::stoll(token, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": expected signed integer, got '" + token + "'");
  }
  if (pos != token.size())
    throw std::runtime_error(where + ": expected signed integer, got '" + token + "'");
  SignedMagnitude v;
  v.sign = raw < 0 ? -1 : +1;
  v.magnitude = static_cast<int>(raw < 0 ? -raw : raw);
  v.levels = levels;
  if (v.magnitude > levels)
    throw std::runtime_error(where + ": magnitude " + std::to_string(v.magnitude) +
                             " exceeds levels " + std::to_string(levels));
  return v;
}

inline std::string format_signed_value(const SignedMagnitude& v) {
  return std::to_string(static_cast<long long>(v.sign) * v.magnitude);
}

inline KernelInput parse_map_line(const std::string& line, const EngineConfig& cfg,
                                  const std::string& where) {
  const auto bar = line.find('|');
  if (bar == std::string::npos)
    throw std::runtime_error(where + ": expected '|' between activations and weights");
  KernelInput k;
  std::istringstream as(line.substr(0, bar)), ws(line.substr(bar + 1));
  std::string tok;
  while (as >> tok)
    k.activations.push_back(parse_signed_value(tok, cfg.codec.activation_levels, where));
  while (ws >> tok)
    k.weights.push_back(parse_signed_value(tok, cfg.codec.weight_levels, where));
  if (static_cast<int>(k.activations.size()) != cfg.inputs_per_map ||
      static_cast<int>(k.weights.size()) != cfg.inputs_per_map)
    throw std::runtime_error(where + ": expected " + std::to_string(cfg.inputs_per_map) +
                             " activations and weights, got " +
                             std::to_string(k.activations.size()) + "/" +
                             std::to_string(k.weights.size()));
  return k;
}

inline std::string format_map_line(const KernelInput& k) {
  std::string out;
  for (const auto& a : k.activations) {
    if (!out.empty()) out += ' ';
    out += format_signed_value(a);
  }
  out += " |";
  for (const auto& w : k.weights) out += ' ' + format_signed_value(w);
  return out;
}

// Reads whole jobs: every feature_map_count non-comment lines form one job.
inline std::vector<MacJob> load_jobs(std::istream& in, const EngineConfig& cfg,
                                     const std::string& source = "jobs") {
  std::vector<MacJob> jobs;
  MacJob current;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) continue;
    current.maps.push_back(parse_map_line(line, cfg, source + ":" + std::to_string(lineno)));
    if (static_cast<int>(current.maps.size()) == cfg.feature_map_count) {
      validate_job(current, cfg);
      jobs.push_back(std::move(current));
      current = MacJob{};
    }
  }
  if (!current.maps.empty())
    throw std::runtime_error(source + ": trailing lines do not form a whole job (" +
                             std::to_string(current.maps.size()) + " of " +
                             std::to_string(cfg.feature_map_count) + " maps)");
  return jobs;
}

inline void save_jobs(std::ostream& out, const std::vector<MacJob>& jobs) {
  for (const MacJob& job : jobs)
    for (const KernelInput& k : job.maps) out << format_map_line(k) << '\n';
}

// Multi-channel signed integer raster. Header: height width channels levels.
struct SignedImage {
  int height = 0, width = 0, channels = 0, levels = 0;
  std::vector<int> values;  // [channel][row][col]

  int at(int c, int y, int x) const {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  int& at(int c, int y, int x) {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

inline SignedImage load_image(std::istream& in, const std::string& source = "image") {
  SignedImage img;
  if (!(in >> img.height >> img.width >> img.channels >> img.levels))
    throw std::runtime_error(source + ": bad header, expected 'height width channels levels'");
  if (img.height < 1 || img.width < 1 || img.channels < 1 || img.levels < 1)
    throw std::runtime_error(source + ": non-positive dimension in header");
  img.values.resize(static_cast<std::size_t>(img.height) * img.width * img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        long long v;
        if (!(in >> v))
          throw std::runtime_error(source + ": truncated data at channel " + std::to_string(c) +
                                   " row " + std::to_string(y) + " col " + std::to_string(x));
        if (v > img.levels || v < -img.levels)
          throw std::runtime_error(source + ": value " + std::to_string(v) + " at channel " +
                                   std::to_string(c) + " row " + std::to_string(y) + " col " +
                                   std::to_string(x) + " exceeds levels " +
                                   std::to_string(img.levels));
        img.at(c, y, x) = static_cast<int>(v);
      }
  return img;
}

inline void save_image(std::ostream& out, const SignedImage& img) {
  out << img.height << ' ' << img.width << ' ' << img.channels << ' ' << img.levels << '\n';
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) out << (x ? " " : "") << img.at(c, y, x);
      out << '\n';
    }
}

// One kernel per channel: kh x kw signed taps plus a bias value.
// Header: kh kw kernels levels.
struct KernelSet {
  int kh = 0, kw = 0, kernels = 0, levels = 0;
  std::vector<int> taps;  // [kernel][row][col]
  std::vector<int> bias;  // [kernel]

  int tap(int k, int y, int x) const {
    return taps[(static_cast<std::size_t>(k) * kh + y) * kw + x];
  }
};

inline KernelSet load_kernels(std::istream& in, const std::string& source = "weights") {
  KernelSet ks;
  if (!(in >> ks.kh >> ks.kw >> ks.kernels >> ks.levels))
    throw std::runtime_error(source + ": bad header, expected 'kh kw kernels levels'");
  if (ks.kh < 1 || ks.kw < 1 || ks.kernels < 1 || ks.levels < 1)
    throw std::runtime_error(source + ": non-positive dimension in header");
  ks.taps.resize(static_cast<std::size_t>(ks.kernels) * ks.kh * ks.kw);
  ks.bias.resize(ks.kernels);
  for (int k = 0; k < ks.kernels; ++k) {
    for (int y = 0; y < ks.kh; ++y)
      for (int x = 0; x < ks.kw; ++x) {
        long long v;
        if (!(in >> v))
          throw std::runtime_error(source + ": truncated data in kernel " + std::to_string(k));
        if (v > ks.levels || v < -ks.levels)
          throw std::runtime_error(source + ": tap " + std::to_string(v) + " at kernel " +
                                   std::to_string(k) + " row " + std::to_string(y) + " col " +
                                   std::to_string(x) + " exceeds levels " +
                                   std::to_string(ks.levels));
        ks.taps[(static_cast<std::size_t>(k) * ks.kh + y) * ks.kw + x] = static_cast<int>(v);
      }
    long long b;
    if (!(in >> b))
      throw std::runtime_error(source + ": missing bias for kernel " + std::to_string(k));
    if (b > ks.levels || b < -ks.levels)
      throw std::runtime_error(source + ": bias " + std::to_string(b) + " of kernel " +
                               std::to_string(k) + " exceeds levels " + std::to_string(ks.levels));
    ks.bias[k] = static_cast<int>(b);
  }
  return ks;
}

// Minimal CSV emitter: comma separators, LF endings, '.' decimal point,
// '#'-prefixed header comments before the column row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text) { out_ << "# " << text << '\n'; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

}  // namespace scsim
