#include "aclqr/log_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aclqr/error.hpp"

namespace aclqr {
namespace {

[[noreturn]] void io_fail(const std::string& msg) { throw Error(ErrorKind::kIo, msg); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> column_names(Index n, Index m, Index p) {
  std::vector<std::string> cols{"k"};
  auto add = [&](const std::string& prefix, Index count) {
    for (Index i = 0; i < count; ++i) cols.push_back(prefix + std::to_string(i));
  };
  add("x", n);
  add("u", m);
  add("theta", p);
  add("theta_hat", p);
  add("w", n);
  add("e1_", n);
  cols.insert(cols.end(), {"V", "stepsize_ok", "diverged"});
  return cols;
}

Index count_prefix(const std::vector<std::string>& cols, const std::string& prefix) {
  Index count = 0;
  while (std::find(cols.begin(), cols.end(), prefix + std::to_string(count)) != cols.end()) {
    ++count;
  }
  return count;
}

void write_header(std::ostream& out, const Provenance& prov) {
  out << "# config_sha256=" << prov.config_sha256 << "\n";
  out << "# seed=" << prov.seed << "\n";
}

void append(std::string& row, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    row += ',';
    row += format_double(v(i));
  }
}

void append_empty(std::string& row, Index count) { row.append(static_cast<std::size_t>(count), ','); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_log_csv(std::ostream& out, const TrajectoryLog& log, const Provenance& prov) {
  log.validate_shape();
  write_header(out, prov);
  const auto cols = column_names(log.n, log.m, log.p);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  const std::size_t T = log.steps();
  std::string row;
  for (std::size_t k = 0; k <= T; ++k) {
    row = std::to_string(k);
    append(row, log.x[k]);
    if (k < T) {
      append(row, log.u[k]);
    } else {
      append_empty(row, log.m);
    }
    append(row, log.theta[k]);
    append(row, log.theta_hat[k]);
    if (k < T) {
      append(row, log.w[k]);
      append(row, log.e1[k]);
    } else {
      append_empty(row, 2 * log.n);
    }
    row += ',';
    row += format_double(log.V[k]);
    row += ',';
    if (k < T) row += log.stepsize_ok[k] ? '1' : '0';
    row += ',';
    row += (k == T && log.diverged) ? '1' : '0';
    out << row << '\n';
  }
  if (!out) io_fail("failed while writing trajectory CSV");
}

TrajectoryLog read_log_csv(std::istream& in, Provenance* prov) {
  std::string line;
  std::size_t line_no = 0;
  auto fail_at = [&](const std::string& msg) -> void {
    io_fail("trajectory CSV line " + std::to_string(line_no) + ": " + msg);
  };
  Provenance local;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(line.find_first_not_of("# "), eq - line.find_first_not_of("# "));
      const std::string value = line.substr(eq + 1);
      if (key == "config_sha256") local.config_sha256 = value;
      if (key == "seed") {
        const auto res = std::from_chars(value.data(), value.data() + value.size(), local.seed);
        if (res.ec != std::errc() || res.ptr != value.data() + value.size()) fail_at("bad seed");
      }
      continue;
    }
    header = split(line, ',');
    break;
  }
  if (header.empty()) io_fail("trajectory CSV has no header row");

  TrajectoryLog log;
  log.n = count_prefix(header, "x");
  log.m = count_prefix(header, "u");
  log.p = count_prefix(header, "theta");
  if (header != column_names(log.n, log.m, log.p)) fail_at("unexpected column layout");

  auto parse_number = [&](const std::string& field) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      fail_at("bad number '" + field + "'");
    }
    return v;
  };
  auto parse_flag = [&](const std::string& field) {
    if (field != "0" && field != "1") fail_at("bad flag '" + field + "'");
    return field == "1";
  };

  bool terminal_seen = false;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (terminal_seen) fail_at("rows after the terminal row");
    const auto f = split(line, ',');
    if (f.size() != header.size()) fail_at("wrong number of fields");
    if (f[0] != std::to_string(k)) fail_at("expected k = " + std::to_string(k));
    std::size_t c = 1;
    auto vec = [&](Index count) {
      Vector v(count);
      for (Index i = 0; i < count; ++i) v(i) = parse_number(f[c++]);
      return v;
    };
    auto blank = [&](Index count) {
      for (Index i = 0; i < count; ++i) {
        if (!f[c + static_cast<std::size_t>(i)].empty()) return false;
      }
      return true;
    };
    log.x.push_back(vec(log.n));
    terminal_seen = blank(log.m);
    if (terminal_seen) {
      c += static_cast<std::size_t>(log.m);
    } else {
      log.u.push_back(vec(log.m));
    }
    log.theta.push_back(vec(log.p));
    log.theta_hat.push_back(vec(log.p));
    if (terminal_seen) {
      if (!blank(2 * log.n)) fail_at("terminal row must leave w and e1 empty");
      c += static_cast<std::size_t>(2 * log.n);
    } else {
      log.w.push_back(vec(log.n));
      log.e1.push_back(vec(log.n));
    }
    log.V.push_back(parse_number(f[c++]));
    if (terminal_seen) {
      if (!f[c++].empty()) fail_at("terminal row must leave stepsize_ok empty");
    } else {
      log.stepsize_ok.push_back(parse_flag(f[c++]));
    }
    const bool diverged = parse_flag(f[c++]);
    if (diverged && !terminal_seen) fail_at("diverged flag set before the terminal row");
    log.diverged = diverged;
    ++k;
  }
  if (!terminal_seen) io_fail("trajectory CSV is truncated (no terminal row)");
  if (prov) *prov = local;
  return log;
}

TrajectoryLog read_log_csv_file(const std::string& path, Provenance* prov) {
  std::ifstream in(path);
  if (!in) io_fail("cannot read trajectory CSV '" + path + "'");
  try {
    return read_log_csv(in, prov);
  } catch (const Error& e) {
    io_fail(path + ": " + e.what());
  }
}

std::string format_report(const CertificateReport& r, const Provenance& prov) {
  std::ostringstream os;
  os << "# config_sha256=" << prov.config_sha256 << "\n";
  os << "# seed=" << prov.seed << "\n";
  auto flag = [](bool b) { return b ? "1" : "0"; };
  os << "steps=" << r.steps << "\n"
     << "diverged=" << flag(r.diverged) << "\n"
     << "bounded=" << flag(r.bounded) << "\n"
     << "converging=" << flag(r.converging) << "\n"
     << "disturbance_square_summable=" << flag(r.w_l2) << "\n"
     << "parameter_variation_summable=" << flag(r.dtheta_l1) << "\n"
     << "tail_threshold=" << format_double(r.tail_threshold) << "\n"
     << "x2_tail_fraction=" << format_double(r.x2_tail_fraction) << "\n"
     << "w2_tail_fraction=" << format_double(r.w2_tail_fraction) << "\n"
     << "dtheta_tail_fraction=" << format_double(r.dtheta_tail_fraction) << "\n"
     << "max_state_norm=" << format_double(r.max_state_norm) << "\n"
     << "sum_x2=" << format_double(r.sums.x2) << "\n"
     << "sum_w2=" << format_double(r.sums.w2) << "\n"
     << "sum_dtheta=" << format_double(r.sums.dtheta) << "\n"
     << "sum_e2=" << format_double(r.sums.e2) << "\n"
     << "empirical_gain=" << format_double(r.empirical_gain) << "\n";
  for (const auto& s : r.inequalities) {
    const std::string key = "certificate." + s.name + ".";
    os << key << "min_slack=" << format_double(s.min_slack) << "\n";
    os << key << "first_violation="
       << (s.first_violation ? std::to_string(*s.first_violation) : std::string("none")) << "\n";
    os << key << "precondition_fraction=" << format_double(s.precondition_fraction) << "\n";
    if (!s.note.empty()) os << key << "note=" << s.note << "\n";
  }
  os << "violation=" << flag(r.any_violation()) << "\n";
  return os.str();
}

std::string format_meta(const ExperimentConfig& cfg, const TrajectoryLog& log) {
  std::ostringstream os;
  os << "# config_sha256=" << cfg.sha256 << "\n";
  os << "# seed=" << cfg.sim.seed << "\n";
  os << "config_source=" << cfg.source_name << "\n"
     << "plant=" << to_string(cfg.sim.plant) << "\n"
     << "mode=" << to_string(cfg.sim.mode) << "\n"
     << "horizon=" << cfg.sim.horizon << "\n"
     << "steps=" << log.steps() << "\n"
     << "diverged=" << (log.diverged ? 1 : 0) << "\n"
     << "mu=" << format_double(cfg.sim.mu) << "\n"
     << "exploration=" << (cfg.sim.exploration_std ? 1 : 0) << "\n";
  for (const auto& d : cfg.non_paper_defaults) os << "non-paper: " << d << "\n";
  return os.str();
}

void write_plot_data(std::ostream& out, const TrajectoryLog& log, const Provenance& prov,
                     int stride) {
  require(stride >= 1, "plot stride must be >= 1");
  write_header(out, prov);
  out << "# k";
  for (Index i = 0; i < log.n; ++i) out << " x" << i;
  for (Index i = 0; i < log.p; ++i) out << " theta" << i;
  for (Index i = 0; i < log.p; ++i) out << " theta_hat" << i;
  out << " V\n";
  const std::size_t last = log.x.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    if (k % static_cast<std::size_t>(stride) != 0 && k != last) continue;
    out << k;
    for (Index i = 0; i < log.n; ++i) out << ' ' << format_double(log.x[k](i));
    for (Index i = 0; i < log.p; ++i) out << ' ' << format_double(log.theta[k](i));
    for (Index i = 0; i < log.p; ++i) out << ' ' << format_double(log.theta_hat[k](i));
    out << ' ' << format_double(log.V[k]) << '\n';
  }
}

OutputPaths output_paths(const std::string& out_dir, const std::string& stem) {
  const std::filesystem::path dir(out_dir);
  return {(dir / (stem + ".csv")).string(), (dir / (stem + ".report")).string(),
          (dir / (stem + ".meta")).string(), (dir / (stem + ".plot.dat")).string()};
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_fail("cannot open '" + tmp + "' for writing");
    out << contents;
    out.flush();
    if (!out) io_fail("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    io_fail("cannot move '" + tmp + "' to '" + path + "'");
  }
}

OutputPaths write_run_outputs(const std::string& out_dir, const ExperimentConfig& cfg,
                              const TrajectoryLog& log, const CertificateReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) io_fail("cannot create output directory '" + out_dir + "': " + ec.message());
  const OutputPaths paths = output_paths(out_dir, cfg.stem);
  const Provenance prov{cfg.sha256, cfg.sim.seed};

  std::ostringstream csv;
  write_log_csv(csv, log, prov);
  std::ostringstream plot;
  write_plot_data(plot, log, prov, cfg.plot_stride);

  write_file_atomic(paths.csv, csv.str());
  write_file_atomic(paths.report, format_report(report, prov));
  write_file_atomic(paths.meta, format_meta(cfg, log));
  write_file_atomic(paths.plot, plot.str());
  return paths;
}

}  // namespace aclqr
