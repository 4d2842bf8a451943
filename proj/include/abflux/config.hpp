#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace abf {

// Line-oriented `key = value` pairs; `#` starts a comment; lists are
// comma-separated. Later assignments win.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);
  static ConfigMap load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  // Keys in sorted order, one `key = value` per line.
  std::string serialize() const;
  // Values of `other` override this map.
  void merge(const ConfigMap& other);
  const std::map<std::string, std::string>& entries() const { return kv_; }

  bool operator==(const ConfigMap& o) const { return kv_ == o.kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Comma lists. "lo:hi:step" expands to an inclusive arithmetic progression,
// rounding the count to the nearest integer.
std::vector<double> parse_double_list(const std::string& s);
double parse_double(const std::string& s);
long long parse_integer(const std::string& s);
std::vector<std::string> split_list(const std::string& s);

enum class OutputFormat { Csv, Json };

struct SweepConfig {
  std::string subcommand = "constants";
  std::vector<double> a = {0.0};
  std::vector<double> p = {4.0};
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<double> param;  // ring-opt: lambda (p > 2) or mu (p < 2)
  int resolution = 0;         // 0: subcommand default
  std::uint64_t seed = 0;
  int seeds = 1;              // certify: seeds seed, seed+1, ..., seed+seeds-1
  std::vector<std::string> ids;  // certify, empty: all
  std::string domain = "S2";     // spectrum: S1 | S2 | T2
  int count = 6;                 // spectrum: eigenvalues per point
  double t_end = 1.0;            // flow
  double dt = 1e-3;              // flow
  std::string scheme = "exact";  // flow: exact | implicit | semi-implicit
  std::string task = "constants";  // sweep: subcommand to run over the grid
  double tolerance = 0.0;          // 0: subcommand default
  int workers = 1;
  std::string out = "-";
  OutputFormat format = OutputFormat::Csv;

  static SweepConfig from_map(const ConfigMap& m);
};

}  // namespace abf
