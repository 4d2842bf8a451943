#include "abflux/abflux.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "abflux/certify.hpp"
#include "abflux/config.hpp"
#include "abflux/constants.hpp"
#include "abflux/ring.hpp"
#include "abflux/sweep.hpp"

struct abf_config {
  abf::ConfigMap map;
};

struct abf_table {
  abf::SweepResult result;
  std::vector<std::vector<std::string>> text;
};

namespace {

thread_local std::string g_last_error;

template <class F>
abf_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return ABF_OK;
  } catch (const abf::Error& e) {
    g_last_error = e.what();
    return static_cast<abf_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ABF_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ABF_INTERNAL;
  }
}

void need(const void* ptr, const char* what) {
  abf::require(ptr != nullptr, abf::Status::InvalidArgument, std::string(what) + " is null");
}

abf::InequalityId parse_id(const char* id) {
  need(id, "id");
  const auto parsed = abf::parse_inequality(id);
  abf::require(parsed.has_value(), abf::Status::InvalidArgument,
               std::string("unknown inequality id ") + id);
  return *parsed;
}

void fill(const abf::CertificateReport& r, abf_certificate* out) {
  abf::require(r.ok, abf::Status::Internal, r.error);
  out->a = r.a;
  out->p = r.p;
  out->q = r.q;
  out->lhs = r.lhs;
  out->rhs = r.rhs;
  out->margin = r.margin;
  out->quad_error = r.quad_error;
  out->verdict = static_cast<abf_verdict>(r.verdict);
  std::memset(out->constant_source, 0, sizeof out->constant_source);
  std::strncpy(out->constant_source, r.constant_source.c_str(),
               sizeof out->constant_source - 1);
}

}  // namespace

extern "C" {

const char* abf_version(void) { return "1.0.0"; }

const char* abf_status_name(abf_status s) {
  return abf::status_name(static_cast<abf::Status>(s));
}

const char* abf_last_error(void) { return g_last_error.c_str(); }

abf_status abf_config_new(abf_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new abf_config();
  });
}

void abf_config_free(abf_config* cfg) { delete cfg; }

abf_status abf_config_parse(abf_config* cfg, const char* text) {
  return guarded([&] {
    need(cfg, "config");
    need(text, "text");
    cfg->map.merge(abf::ConfigMap::parse(text));
  });
}

abf_status abf_config_load(abf_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "config");
    need(path, "path");
    cfg->map.merge(abf::ConfigMap::load(path));
  });
}

abf_status abf_config_set(abf_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    cfg->map.set(key, value);
  });
}

abf_status abf_config_serialize(const abf_config* cfg, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    need(cfg, "config");
    const std::string s = cfg->map.serialize();
    if (needed) *needed = s.size() + 1;
    if (cap == 0) return;
    need(buf, "buffer");
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  });
}

abf_status abf_run(const abf_config* cfg, abf_table** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = nullptr;
    auto t = std::make_unique<abf_table>();
    t->result = abf::run_sweep(abf::SweepConfig::from_map(cfg->map));
    for (const auto& row : t->result.table.rows) {
      std::vector<std::string> r;
      for (const auto& c : row) r.push_back(abf::format_cell(c));
      t->text.push_back(std::move(r));
    }
    *out = t.release();
  });
}

void abf_table_free(abf_table* t) { delete t; }

size_t abf_table_rows(const abf_table* t) { return t ? t->text.size() : 0; }

size_t abf_table_columns(const abf_table* t) {
  return t ? t->result.table.columns.size() : 0;
}

const char* abf_table_column_name(const abf_table* t, size_t j) {
  if (!t || j >= t->result.table.columns.size()) return nullptr;
  return t->result.table.columns[j].c_str();
}

const char* abf_table_cell(const abf_table* t, size_t i, size_t j) {
  if (!t || i >= t->text.size() || j >= t->text[i].size()) return nullptr;
  return t->text[i][j].c_str();
}

int abf_table_error_rows(const abf_table* t) { return t ? t->result.error_rows : 0; }

int abf_table_violated(const abf_table* t) { return t ? t->result.violated : 0; }

size_t abf_table_diagnostic_count(const abf_table* t) {
  return t ? t->result.table.diagnostics.size() : 0;
}

const char* abf_table_diagnostic(const abf_table* t, size_t i) {
  if (!t || i >= t->result.table.diagnostics.size()) return nullptr;
  return t->result.table.diagnostics[i].c_str();
}

abf_status abf_table_write(const abf_table* t, const char* format, const char* path) {
  return guarded([&] {
    need(t, "table");
    need(format, "format");
    need(path, "path");
    const std::string f = format;
    abf::require(f == "csv" || f == "json", abf::Status::InvalidArgument,
                 "format must be csv or json, got " + f);
    abf::write_table(t->result.table,
                     f == "csv" ? abf::OutputFormat::Csv : abf::OutputFormat::Json, path);
  });
}

abf_status abf_normalize_flux(double a_raw, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = abf::normalize_flux(a_raw);
  });
}

abf_status abf_ring_threshold(double a_raw, double p, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = abf::ring_rigidity_threshold(abf::FluxParams::make(a_raw, p));
  });
}

abf_status abf_sphere2_ground(double a_raw, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = abf::sphere2_ground(abf::normalize_flux(a_raw));
  });
}

abf_status abf_planar_thresholds(double a_raw, double p, double* lambda_star,
                                 double* lambda_bullet) {
  return guarded([&] {
    need(lambda_star, "lambda_star");
    need(lambda_bullet, "lambda_bullet");
    const auto t = abf::planar_symmetry_thresholds(abf::normalize_flux(a_raw), p);
    *lambda_star = t.lambda_star;
    *lambda_bullet = t.lambda_bullet;
  });
}

abf_status abf_planar_mu(double a_raw, double p, double lambda, double* value,
                         double* printed_value) {
  return guarded([&] {
    need(value, "value");
    const auto m = abf::planar_mu_closed(abf::normalize_flux(a_raw), p, lambda);
    *value = m.value;
    if (printed_value) *printed_value = m.printed_value;
  });
}

abf_status abf_ring_optimum(double a_raw, double p, double param, int n, double* value,
                            int* symmetric) {
  return guarded([&] {
    need(value, "value");
    abf::RingProblem rp;
    rp.fp = abf::FluxParams::make(a_raw, p);
    rp.param = param;
    if (n > 0) rp.opts.n = n;
    const auto r = abf::optimal_constant_ring(rp);
    *value = r.value;
    if (symmetric) *symmetric = r.symmetric ? 1 : 0;
  });
}

abf_status abf_certify_case(const char* id, uint64_t seed, abf_certificate* out) {
  return guarded([&] {
    need(out, "out");
    fill(abf::evaluate_certificate(abf::make_certificate_case(parse_id(id), seed)), out);
  });
}

abf_status abf_certify_saturation(const char* id, double a_raw, double p, double param,
                                  abf_certificate* out) {
  return guarded([&] {
    need(out, "out");
    const auto in =
        abf::make_saturation_case(parse_id(id), abf::normalize_flux(a_raw), p, param);
    fill(abf::evaluate_certificate(in), out);
  });
}

}  // extern "C"
