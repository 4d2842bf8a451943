#include "abflux/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "abflux/common.hpp"

namespace abf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k = {
      "subcommand", "a",     "p",       "lambda", "mu",      "param",
      "resolution", "seed",  "seeds",   "ids",    "domain",  "count",
      "t_end",      "dt",    "scheme",  "task",   "tolerance", "workers",
      "out",        "format"};
  return k;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, Status::InvalidArgument,
            "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), Status::InvalidArgument,
            "config line " + std::to_string(lineno) + ": empty key");
    m.set(key, trim(line.substr(eq + 1)));
  }
  return m;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), Status::Io, "cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& ConfigMap::get(const std::string& key) const {
  auto it = kv_.find(key);
  require(it != kv_.end(), Status::InvalidArgument, "missing config key " + key);
  return it->second;
}

std::string ConfigMap::serialize() const {
  std::string s;
  for (const auto& [k, v] : kv_) s += k + " = " + v + "\n";
  return s;
}

void ConfigMap::merge(const ConfigMap& other) {
  for (const auto& [k, v] : other.kv_) kv_[k] = v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  require(!t.empty() && end && *end == '\0' && errno == 0 && std::isfinite(v),
          Status::InvalidArgument, "not a finite number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  require(!t.empty() && end && *end == '\0' && errno == 0,
          Status::InvalidArgument, "not an integer: '" + s + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_list(s)) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    require(c2 != std::string::npos, Status::InvalidArgument,
            "range must read lo:hi:step, got '" + item + "'");
    const double lo = parse_double(item.substr(0, c1));
    const double hi = parse_double(item.substr(c1 + 1, c2 - c1 - 1));
    const double st = parse_double(item.substr(c2 + 1));
    require(st > 0.0 && hi >= lo, Status::InvalidArgument,
            "range needs step > 0 and hi >= lo: '" + item + "'");
    const long long n = std::llround((hi - lo) / st);
    require(n <= 1000000, Status::InvalidArgument, "range too long: '" + item + "'");
    for (long long i = 0; i <= n; ++i) out.push_back(lo + st * static_cast<double>(i));
  }
  return out;
}

SweepConfig SweepConfig::from_map(const ConfigMap& m) {
  for (const auto& [k, v] : m.entries())
    require(known_keys().count(k) > 0, Status::InvalidArgument, "unknown config key " + k);
  SweepConfig c;
  auto list = [&](const char* key, std::vector<double>& dst) {
    if (m.has(key)) dst = parse_double_list(m.get(key));
  };
  if (m.has("subcommand")) c.subcommand = m.get("subcommand");
  list("a", c.a);
  list("p", c.p);
  list("lambda", c.lambda);
  list("mu", c.mu);
  list("param", c.param);
  if (m.has("resolution")) c.resolution = static_cast<int>(parse_integer(m.get("resolution")));
  if (m.has("seed")) {
    const long long s = parse_integer(m.get("seed"));
    require(s >= 0, Status::InvalidArgument, "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (m.has("seeds")) c.seeds = static_cast<int>(parse_integer(m.get("seeds")));
  if (m.has("ids")) c.ids = split_list(m.get("ids"));
  if (m.has("domain")) c.domain = m.get("domain");
  if (m.has("count")) c.count = static_cast<int>(parse_integer(m.get("count")));
  if (m.has("t_end")) c.t_end = parse_double(m.get("t_end"));
  if (m.has("dt")) c.dt = parse_double(m.get("dt"));
  if (m.has("scheme")) c.scheme = m.get("scheme");
  if (m.has("task")) c.task = m.get("task");
  if (m.has("tolerance")) c.tolerance = parse_double(m.get("tolerance"));
  if (m.has("workers")) c.workers = static_cast<int>(parse_integer(m.get("workers")));
  if (m.has("out")) c.out = m.get("out");
  if (m.has("format")) {
    const std::string f = m.get("format");
    if (f == "csv")
      c.format = OutputFormat::Csv;
    else if (f == "json")
      c.format = OutputFormat::Json;
    else
      fail(Status::InvalidArgument, "format must be csv or json, got " + f);
  }
  require(!c.a.empty() && !c.p.empty(), Status::InvalidArgument,
          "parameter grids must be non-empty");
  require(c.seeds >= 1, Status::InvalidArgument, "seeds must be >= 1");
  require(c.workers >= 1 && c.workers <= 256, Status::InvalidArgument,
          "workers must be in [1, 256]");
  require(c.resolution >= 0, Status::InvalidArgument, "resolution must be >= 0");
  require(c.tolerance >= 0.0, Status::InvalidArgument, "tolerance must be >= 0");
  require(c.count >= 1, Status::InvalidArgument, "count must be >= 1");
  return c;
}

}  // namespace abf
