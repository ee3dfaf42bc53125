#pragma once

// File formats: whitespace-separated "l m value" coefficient files, CSV
// tables, and a small JSON writer.  All floating-point output uses 17
// significant digits so repeated runs of the tools are byte-identical and
// values round-trip exactly.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hawklab/base.hpp"
#include "hawklab/sphharm.hpp"

namespace hawklab::io {

// Reads "l m value" lines; blank lines and lines starting with '#' are
// skipped.  Band limit is max l seen (at least min_band).  Errors carry
// 1-based line numbers.
inline sphharm::SphCoeffs read_coeffs(const std::string& path, int min_band = 0) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open coefficient file: " + path);
  struct Row {
    int l, m;
    double value;
    int line;
  };
  std::vector<Row> rows;
  std::string line;
  int lineno = 0, band = min_band;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long l, m;
    double value;
    if (!(ls >> l >> m >> value)) {
      throw parse_error(path + ":" + std::to_string(lineno) +
                        ": expected \"l m value\"");
    }
    std::string trailing;
    if (ls >> trailing)
      throw parse_error(path + ":" + std::to_string(lineno) + ": trailing content \"" +
                        trailing + "\"");
    if (l < 0 || std::abs(m) > l || l > 1000)
      throw parse_error(path + ":" + std::to_string(lineno) + ": invalid harmonic index");
    if (!std::isfinite(value))
      throw parse_error(path + ":" + std::to_string(lineno) + ": non-finite value");
    rows.push_back({static_cast<int>(l), static_cast<int>(m), value, lineno});
    band = std::max(band, static_cast<int>(l));
  }
  sphharm::SphCoeffs out = sphharm::SphCoeffs::zeros(band);
  std::vector<bool> seen(out.c.size(), false);
  for (const Row& r : rows) {
    const int k = sphharm::lm_index(r.l, r.m);
    if (seen[k])
      throw parse_error(path + ":" + std::to_string(r.line) + ": duplicate (l,m) entry");
    seen[k] = true;
    out.c[k] = r.value;
  }
  return out;
}

inline void write_coeffs(const std::string& path, const sphharm::SphCoeffs& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open for writing: " + path);
  for (int l = 0; l <= c.L; ++l)
    for (int m = -l; m <= l; ++m)
      out << l << ' ' << m << ' ' << fmt17(c.c[sphharm::lm_index(l, m)]) << '\n';
}

inline void write_grid_csv(const std::string& path, const sphharm::SphGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out << "theta,weight\n";
  for (int i = 0; i < g.n_theta; ++i)
    out << fmt17(g.theta[i]) << ',' << fmt17(g.w[i]) << '\n';
}

// Minimal ordered JSON writer.  Keys are emitted in call order; doubles use
// fmt17 (non-finite values are emitted as strings, which keeps output valid).
class JsonWriter {
 public:
  JsonWriter() { first_.push_back(true); }

  JsonWriter& begin_object() {
    sep();
    out_ += '{';
    first_.push_back(true);
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    first_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    sep();
    out_ += '[';
    first_.push_back(true);
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    first_.pop_back();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    quote(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(double x) {
    sep();
    if (std::isfinite(x)) out_ += fmt17(x);
    else quote(x != x ? "nan" : (x > 0 ? "inf" : "-inf"));
    return *this;
  }
  JsonWriter& value(long long x) {
    sep();
    out_ += fmt17(x);
    return *this;
  }
  JsonWriter& value(int x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(unsigned long long x) {
    sep();
    out_ += std::to_string(x);
    return *this;
  }
  JsonWriter& value(bool b) {
    sep();
    out_ += b ? "true" : "false";
    return *this;
  }
  JsonWriter& value(const std::string& s) {
    sep();
    quote(s);
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& null_value() {
    sep();
    out_ += "null";
    return *this;
  }

  const std::string& str() const { return out_; }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open for writing: " + path);
    out << out_ << '\n';
  }

 private:
  void sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
  void quote(const std::string& s) {
    out_ += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x",
                          static_cast<unsigned>(static_cast<unsigned char>(ch)));
            out_ += buf;
          } else {
            out_ += ch;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

}  // namespace hawklab::io
