#include "ccl/io.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ccl/error.hpp"

namespace ccl::io {

std::string fmt_double(double v) {
  // Try increasing precision until the value round-trips; keeps files
  // readable for grid prices while staying exact for arbitrary doubles.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_long(long long v) { return std::to_string(v); }

double parse_double(const std::string& s, const std::string& context) {
  if (s.empty()) fail(ErrorKind::data_integrity, context + ": empty number");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    fail(ErrorKind::data_integrity, context + ": bad number '" + s + "'");
  }
  return v;
}

long long parse_long(const std::string& s, const std::string& context) {
  if (s.empty()) fail(ErrorKind::data_integrity, context + ": empty integer");
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    fail(ErrorKind::data_integrity, context + ": bad integer '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::data_integrity, "cannot open file: " + path);
  CsvFile file;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      auto colon = body.find(':');
      if (colon != std::string::npos) {
        std::string key = body.substr(0, colon);
        std::string value = body.substr(colon + 1);
        while (!key.empty() && key.front() == ' ') key.erase(key.begin());
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        file.comments.emplace_back(key, value);
      }
      continue;
    }
    if (!header_seen) {
      file.header = split_csv(line);
      header_seen = true;
    } else {
      file.rows.push_back(split_csv(line));
    }
  }
  return file;
}

Provenance::Provenance(std::string tool, std::string command)
    : tool_(std::move(tool)), command_(std::move(command)) {}

void Provenance::put(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void Provenance::put(const std::string& key, double value) {
  entries_.emplace_back(key, fmt_double(value));
}
void Provenance::put(const std::string& key, long long value) {
  entries_.emplace_back(key, fmt_long(value));
}
void Provenance::put_seed(std::uint64_t seed) {
  entries_.emplace_back("seed", std::to_string(seed));
}

std::string Provenance::config_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(command_);
  for (const auto& [k, v] : entries_) {
    mix(k);
    mix("=");
    mix(v);
    mix(";");
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Provenance::write(std::ostream& os) const {
  os << "# tool: " << tool_ << "\n";
  os << "# command: " << command_ << "\n";
  for (const auto& [k, v] : entries_) os << "# " << k << ": " << v << "\n";
  os << "# config_hash: " << config_hash() << "\n";
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  os << "# generated_at: " << buf << "\n";
}

}  // namespace ccl::io
