// abflux command-line front end. Links only the C interface.
//
// Exit codes: 0 success, 1 usage error, 2 Violated certificate or solver
// failure.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abflux/abflux.h"

namespace {

struct Flag {
  const char* name;  // long flag without dashes
  const char* key;   // config key
  const char* help;
};

const std::vector<Flag>& flags() {
  static const std::vector<Flag> f = {
      {"out", "out", "output path, - for stdout"},
      {"format", "format", "csv or json"},
      {"seed", "seed", "master seed"},
      {"workers", "workers", "worker threads"},
      {"resolution", "resolution", "grid resolution, 0 for the default"},
      {"tolerance", "tolerance", "solver tolerance, 0 for the default"},
      {"a", "a", "flux list, e.g. 0,0.25 or 0:0.5:0.1"},
      {"p", "p", "exponent list"},
      {"lambda", "lambda", "lambda list"},
      {"mu", "mu", "mu list"},
      {"param", "param", "ring-opt parameter list (lambda or mu)"},
      {"seeds", "seeds", "certify: number of consecutive seeds"},
      {"ids", "ids", "certify: inequality ids, comma separated"},
      {"domain", "domain", "spectrum: S1, S2 or T2"},
      {"count", "count", "spectrum: eigenvalues per point"},
      {"t-end", "t_end", "flow: final time"},
      {"dt", "dt", "flow: time step"},
      {"scheme", "scheme", "flow: exact, implicit or semi-implicit"},
      {"task", "task", "sweep: subcommand to run over the grid"},
  };
  return f;
}

const char* const kSubcommands[][2] = {
    {"constants", "closed-form thresholds and ground states"},
    {"spectrum", "magnetic eigenvalues on S1, T2 or S2"},
    {"ring-opt", "optimal ring constant and symmetry"},
    {"torus-opt", "torus minimizer against the ring"},
    {"planar-opt", "planar Hardy-Sobolev extremal and k = 1 mode"},
    {"flow", "nonlinear flow history on T2"},
    {"certify", "randomized inequality certificates"},
    {"sweep", "run another subcommand over the grid"}};

int report(abf_status s, const char* what) {
  std::fprintf(stderr, "abflux: %s: %s (%s)\n", what, abf_last_error(), abf_status_name(s));
  return s == ABF_INVALID_ARGUMENT || s == ABF_IO ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aharonov-Bohm interpolation, Keller-Lieb-Thirring and Hardy inequalities"};
  app.require_subcommand(1, 1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::map<std::string, std::string> values;
  for (const Flag& f : flags())
    app.add_option(std::string("--") + f.name, values[f.key], f.help);
  for (const auto& sc : kSubcommands) app.add_subcommand(sc[0], sc[1])->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  abf_config* cfg = nullptr;
  abf_status s = abf_config_new(&cfg);
  if (s != ABF_OK) return report(s, "config");
  if (!config_path.empty() && (s = abf_config_load(cfg, config_path.c_str())) != ABF_OK) {
    const int rc = report(s, config_path.c_str());
    abf_config_free(cfg);
    return rc;
  }
  // Flags override the file.
  for (const Flag& f : flags()) {
    if (app.count(std::string("--") + f.name) == 0) continue;
    if ((s = abf_config_set(cfg, f.key, values[f.key].c_str())) != ABF_OK) {
      abf_config_free(cfg);
      return report(s, f.name);
    }
  }
  abf_config_set(cfg, "subcommand", app.get_subcommands().front()->get_name().c_str());

  abf_table* table = nullptr;
  s = abf_run(cfg, &table);
  if (s != ABF_OK) {
    abf_config_free(cfg);
    return report(s, "run");
  }

  std::string format = "csv", out = "-";
  {
    // Read back the effective output settings through the serialized config.
    size_t need = 0;
    abf_config_serialize(cfg, nullptr, 0, &need);
    std::string text(need, '\0');
    abf_config_serialize(cfg, text.data(), need, &need);
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      const std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      const std::string k = line.substr(0, eq), v = line.substr(eq + 3);
      if (k == "format") format = v;
      if (k == "out") out = v;
    }
  }
  abf_config_free(cfg);

  for (size_t i = 0; i < abf_table_diagnostic_count(table); ++i)
    std::fprintf(stderr, "abflux: %s\n", abf_table_diagnostic(table, i));
  s = abf_table_write(table, format.c_str(), out.c_str());
  if (s != ABF_OK) {
    abf_table_free(table);
    return report(s, "write");
  }
  const bool failed = abf_table_error_rows(table) > 0 || abf_table_violated(table) > 0;
  if (abf_table_violated(table) > 0)
    std::fprintf(stderr, "abflux: %d Violated certificate(s)\n", abf_table_violated(table));
  abf_table_free(table);
  return failed ? 2 : 0;
}
