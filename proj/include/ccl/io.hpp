#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ccl::io {

// Shortest decimal that round-trips the exact double value.
std::string fmt_double(double v);
std::string fmt_long(long long v);

// Strict numeric parsers; throw ccl::Error(data_integrity) on garbage.
double parse_double(const std::string& s, const std::string& context);
long long parse_long(const std::string& s, const std::string& context);

// Minimal CSV splitting; the file formats here are numeric and never quote.
std::vector<std::string> split_csv(const std::string& line);
std::string join_csv(const std::vector<std::string>& fields);

struct CsvFile {
  std::vector<std::pair<std::string, std::string>> comments;  // "# key: value"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Reads a CSV with optional leading '#' comment lines and one header row.
CsvFile read_csv(const std::string& path);

// Provenance block written at the top of every output file. The
// generated_at line is wall-clock and excluded from determinism checks.
class Provenance {
 public:
  Provenance(std::string tool, std::string command);
  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, double value);
  void put(const std::string& key, long long value);
  void put_seed(std::uint64_t seed);
  // FNV-1a over the sorted key/value pairs; identifies the resolved config.
  std::string config_hash() const;
  void write(std::ostream& os) const;

 private:
  std::string tool_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ccl::io
