#pragma once

// Result files: CSV for sampled fields, JSON for scalar results. Numbers
// are written with 17 significant digits so they round-trip exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "qwire/app/config.hpp"
#include "qwire/errors.hpp"

#ifndef QWIRE_GIT_REVISION
#define QWIRE_GIT_REVISION "unknown"
#endif

namespace qwire::app {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header)
      : out_(path), columns_(header.size()), path_(path) {
    if (!out_) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    if (values.size() != columns_) throw std::logic_error("CSV row width mismatch");
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

inline json metadata(const std::string& command, const RunConfig& cfg, std::size_t grid) {
  return {{"command", command},
          {"name", cfg.name},
          {"git_revision", QWIRE_GIT_REVISION},
          {"grid", grid},
          {"units", "hbar = m = 1, unit-radius base circle"},
          {"tolerances",
           {{"min_gap", cfg.tolerances.min_gap},
            {"min_overlap", cfg.tolerances.min_overlap},
            {"norm", cfg.tolerances.norm},
            {"min_population", cfg.tolerances.min_population}}}};
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

}  // namespace qwire::app
