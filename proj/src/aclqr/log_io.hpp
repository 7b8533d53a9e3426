#pragma once

// Flat-file outputs. Trajectory CSVs use shortest round-trip decimal
// formatting (std::to_chars), so reading a file back reproduces every double
// bit for bit. Every file starts with '#' lines carrying the config hash and
// seed.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "aclqr/config.hpp"
#include "aclqr/diagnostics.hpp"
#include "aclqr/sim.hpp"

namespace aclqr {

struct Provenance {
  std::string config_sha256;
  std::uint64_t seed = 0;
};

std::string format_double(double v);

/// Columns: k, x0.., u0.., theta0.., theta_hat0.., w0.., e1_0.., V, stepsize_ok,
/// diverged. The terminal row (k = T) leaves u, w, e1 and stepsize_ok empty.
void write_log_csv(std::ostream& out, const TrajectoryLog& log, const Provenance& prov);

/// Throws Error(kIo) naming the offending line when the file is malformed.
TrajectoryLog read_log_csv(std::istream& in, Provenance* prov = nullptr);
TrajectoryLog read_log_csv_file(const std::string& path, Provenance* prov = nullptr);

/// key=value lines.
std::string format_report(const CertificateReport& report, const Provenance& prov);

/// Run metadata, including every default that is an artifact choice.
std::string format_meta(const ExperimentConfig& cfg, const TrajectoryLog& log);

/// Whitespace-separated columns k, x.., theta.., theta_hat.., V for every
/// stride-th row and the last row.
void write_plot_data(std::ostream& out, const TrajectoryLog& log, const Provenance& prov,
                     int stride);

struct OutputPaths {
  std::string csv;
  std::string report;
  std::string meta;
  std::string plot;
};

OutputPaths output_paths(const std::string& out_dir, const std::string& stem);

/// Writes stem.{csv,report,meta,plot.dat} into out_dir (created if missing).
/// Each file is written to a temporary name and renamed into place.
OutputPaths write_run_outputs(const std::string& out_dir, const ExperimentConfig& cfg,
                              const TrajectoryLog& log, const CertificateReport& report);

/// Writes `contents` to path via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace aclqr
