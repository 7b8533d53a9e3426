#include "aclqr.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "aclqr/config.hpp"
#include "aclqr/controller.hpp"
#include "aclqr/dare.hpp"
#include "aclqr/error.hpp"
#include "aclqr/experiments.hpp"
#include "aclqr/log_io.hpp"

struct aclqr_experiment {
  aclqr::ExperimentConfig cfg;
};

struct aclqr_log {
  aclqr::TrajectoryLog log;
};

struct aclqr_report {
  aclqr::CertificateReport report;
  aclqr::Provenance prov;
};

namespace {

thread_local std::string g_last_error;

aclqr_status status_for(aclqr::ErrorKind kind) {
  switch (kind) {
    case aclqr::ErrorKind::kInvalidArgument: return ACLQR_INVALID_ARGUMENT;
    case aclqr::ErrorKind::kConfig: return ACLQR_CONFIG_ERROR;
    case aclqr::ErrorKind::kNumerical: return ACLQR_NUMERICAL_ERROR;
    case aclqr::ErrorKind::kIo: return ACLQR_IO_ERROR;
  }
  return ACLQR_NUMERICAL_ERROR;
}

aclqr_status fail(aclqr_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <class F>
aclqr_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const aclqr::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ACLQR_NUMERICAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(ACLQR_NUMERICAL_ERROR, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define ACLQR_REQUIRE(cond, msg) \
  if (!(cond)) return fail(ACLQR_INVALID_ARGUMENT, msg)

aclqr_status vector_out(const aclqr_log* log, const std::vector<aclqr::Vector>& series, size_t k,
                        double* out) {
  ACLQR_REQUIRE(log && out, "null argument");
  ACLQR_REQUIRE(k < series.size(), "index out of range");
  const aclqr::Vector& v = series[k];
  std::copy(v.data(), v.data() + v.size(), out);
  return ACLQR_OK;
}

}  // namespace

extern "C" {

const char* aclqr_version(void) { return "0.1.0"; }

const char* aclqr_last_error(void) { return g_last_error.c_str(); }

void aclqr_string_free(char* s) { std::free(s); }

aclqr_status aclqr_experiment_load_file(const char* path, aclqr_experiment** out) {
  ACLQR_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    aclqr::ExperimentConfig cfg;
    try {
      cfg = aclqr::load_experiment(path);
    } catch (const aclqr::Error& e) {
      // An unreadable experiment file is a configuration problem for callers.
      if (e.kind() == aclqr::ErrorKind::kIo) return fail(ACLQR_CONFIG_ERROR, e.what());
      throw;
    }
    *out = new aclqr_experiment{std::move(cfg)};
    return ACLQR_OK;
  });
}

aclqr_status aclqr_experiment_load_string(const char* text, const char* source_name,
                                          aclqr_experiment** out) {
  ACLQR_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new aclqr_experiment{aclqr::parse_experiment(text, source_name ? source_name : "<string>")};
    return ACLQR_OK;
  });
}

aclqr_status aclqr_experiment_load_preset(const char* name, aclqr_experiment** out) {
  ACLQR_REQUIRE(name && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new aclqr_experiment{
        aclqr::parse_experiment(aclqr::preset_text(name), std::string("preset:") + name)};
    return ACLQR_OK;
  });
}

void aclqr_experiment_free(aclqr_experiment* exp) { delete exp; }

aclqr_status aclqr_experiment_set_seed(aclqr_experiment* exp, uint64_t seed) {
  ACLQR_REQUIRE(exp, "null experiment");
  exp->cfg.sim.seed = seed;
  auto& notes = exp->cfg.non_paper_defaults;
  notes.erase(std::remove_if(notes.begin(), notes.end(),
                             [](const std::string& s) { return s.rfind("sim.seed ", 0) == 0; }),
              notes.end());
  return ACLQR_OK;
}

aclqr_status aclqr_experiment_dims(const aclqr_experiment* exp, size_t* n, size_t* m, size_t* p) {
  ACLQR_REQUIRE(exp, "null experiment");
  if (n) *n = static_cast<size_t>(exp->cfg.sim.par.n());
  if (m) *m = static_cast<size_t>(exp->cfg.sim.par.m());
  if (p) *p = static_cast<size_t>(exp->cfg.sim.par.p());
  return ACLQR_OK;
}

aclqr_status aclqr_experiment_hash(const aclqr_experiment* exp, char** out) {
  ACLQR_REQUIRE(exp && out, "null argument");
  return guarded([&] {
    *out = copy_string(exp->cfg.sha256);
    return ACLQR_OK;
  });
}

aclqr_status aclqr_experiment_run(const aclqr_experiment* exp, aclqr_log** out) {
  ACLQR_REQUIRE(exp && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new aclqr_log{aclqr::run(exp->cfg.sim)};
    return ACLQR_OK;
  });
}

aclqr_status aclqr_experiment_write_outputs(const aclqr_experiment* exp, const aclqr_log* log,
                                            const aclqr_report* report, const char* out_dir) {
  ACLQR_REQUIRE(exp && log && report && out_dir, "null argument");
  return guarded([&] {
    aclqr::write_run_outputs(out_dir, exp->cfg, log->log, report->report);
    return ACLQR_OK;
  });
}

void aclqr_log_free(aclqr_log* log) { delete log; }

aclqr_status aclqr_log_read_csv(const char* path, aclqr_log** out) {
  ACLQR_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    aclqr::TrajectoryLog log = aclqr::read_log_csv_file(path);
    *out = new aclqr_log{std::move(log)};
    return ACLQR_OK;
  });
}

aclqr_status aclqr_log_write_csv(const aclqr_log* log, const aclqr_experiment* exp,
                                 const char* path) {
  ACLQR_REQUIRE(log && path, "null argument");
  return guarded([&] {
    aclqr::Provenance prov;
    if (exp) prov = {exp->cfg.sha256, exp->cfg.sim.seed};
    std::ostringstream os;
    aclqr::write_log_csv(os, log->log, prov);
    aclqr::write_file_atomic(path, os.str());
    return ACLQR_OK;
  });
}

size_t aclqr_log_steps(const aclqr_log* log) { return log ? log->log.steps() : 0; }

int aclqr_log_diverged(const aclqr_log* log) { return log && log->log.diverged ? 1 : 0; }

aclqr_status aclqr_log_dims(const aclqr_log* log, size_t* n, size_t* m, size_t* p) {
  ACLQR_REQUIRE(log, "null log");
  if (n) *n = static_cast<size_t>(log->log.n);
  if (m) *m = static_cast<size_t>(log->log.m);
  if (p) *p = static_cast<size_t>(log->log.p);
  return ACLQR_OK;
}

aclqr_status aclqr_log_state(const aclqr_log* log, size_t k, double* x) {
  ACLQR_REQUIRE(log, "null log");
  return vector_out(log, log->log.x, k, x);
}

aclqr_status aclqr_log_input(const aclqr_log* log, size_t k, double* u) {
  ACLQR_REQUIRE(log, "null log");
  return vector_out(log, log->log.u, k, u);
}

aclqr_status aclqr_log_parameter(const aclqr_log* log, size_t k, double* theta) {
  ACLQR_REQUIRE(log, "null log");
  return vector_out(log, log->log.theta, k, theta);
}

aclqr_status aclqr_log_estimate(const aclqr_log* log, size_t k, double* theta_hat) {
  ACLQR_REQUIRE(log, "null log");
  return vector_out(log, log->log.theta_hat, k, theta_hat);
}

aclqr_status aclqr_certify(const aclqr_experiment* exp, const aclqr_log* log, double tolerance,
                           aclqr_report** out) {
  ACLQR_REQUIRE(exp && log && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new aclqr_report{aclqr::certify(exp->cfg, log->log, tolerance),
                               {exp->cfg.sha256, exp->cfg.sim.seed}};
    *out = r;
    if (r->report.any_violation()) {
      return fail(ACLQR_CERTIFICATE_VIOLATION, "certificate violated beyond tolerance");
    }
    return ACLQR_OK;
  });
}

void aclqr_report_free(aclqr_report* report) { delete report; }

int aclqr_report_violated(const aclqr_report* report) {
  return report && report->report.any_violation() ? 1 : 0;
}

int aclqr_report_bounded(const aclqr_report* report) {
  return report && report->report.bounded ? 1 : 0;
}

aclqr_status aclqr_report_format(const aclqr_report* report, char** out) {
  ACLQR_REQUIRE(report && out, "null argument");
  return guarded([&] {
    *out = copy_string(aclqr::format_report(report->report, report->prov));
    return ACLQR_OK;
  });
}

aclqr_status aclqr_report_write(const aclqr_report* report, const char* path) {
  ACLQR_REQUIRE(report && path, "null argument");
  return guarded([&] {
    aclqr::write_file_atomic(path, aclqr::format_report(report->report, report->prov));
    return ACLQR_OK;
  });
}

aclqr_status aclqr_dare_solve(const double* A, const double* B, const double* Q, const double* R,
                              size_t n, size_t m, double* P, double* K, double* residual) {
  ACLQR_REQUIRE(A && B && Q && R, "null matrix");
  ACLQR_REQUIRE(n > 0 && m > 0 && n <= 4096 && m <= 4096, "dimensions must be positive");
  return guarded([&] {
    using Map = Eigen::Map<const aclqr::Matrix>;
    const auto ni = static_cast<aclqr::Index>(n), mi = static_cast<aclqr::Index>(m);
    const aclqr::RiccatiSolution s =
        aclqr::solve_dare(Map(A, ni, ni), Map(B, ni, mi), Map(Q, ni, ni), Map(R, mi, mi));
    if (P) std::copy(s.P.data(), s.P.data() + s.P.size(), P);
    if (K) std::copy(s.K.data(), s.K.data() + s.K.size(), K);
    if (residual) *residual = s.residual;
    return ACLQR_OK;
  });
}

aclqr_status aclqr_dare_self_check(char** out) {
  return guarded([&] {
    std::ostringstream os;
    bool all = true;
    for (const auto& line : aclqr::dare_self_check()) {
      os << (line.pass ? "PASS " : "FAIL ") << line.name << ": " << line.detail << "\n";
      all = all && line.pass;
    }
    if (out) *out = copy_string(os.str());
    return all ? ACLQR_OK : fail(ACLQR_NUMERICAL_ERROR, "DARE self-check failed");
  });
}

aclqr_status aclqr_gain_lipschitz(const aclqr_experiment* exp, int grid_per_dim, unsigned threads,
                                  double* out) {
  ACLQR_REQUIRE(exp && out, "null argument");
  return guarded([&] {
    const auto& sim = exp->cfg.sim;
    *out = aclqr::estimate_gain_lipschitz(sim.par, sim.box, sim.Q, sim.R, grid_per_dim, threads);
    return ACLQR_OK;
  });
}

aclqr_status aclqr_paper_experiments(const char* out_dir, uint64_t seed, int horizon,
                                     double tolerance, unsigned threads, char** summary) {
  return guarded([&] {
    const auto runs =
        aclqr::paper_experiments(out_dir ? out_dir : "", seed, horizon, tolerance, threads);
    if (summary) *summary = copy_string(aclqr::format_summary(runs));
    for (const auto& r : runs) {
      if (!r.error.empty()) return fail(status_for(r.error_kind), r.name + ": " + r.error);
    }
    for (const auto& r : runs) {
      if (r.report && r.report->any_violation()) {
        return fail(ACLQR_CERTIFICATE_VIOLATION, r.name + ": certificate violated");
      }
    }
    return ACLQR_OK;
  });
}

}  // extern "C"
