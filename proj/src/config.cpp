#include "aclqr/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "aclqr/error.hpp"
#include "aclqr/log_io.hpp"

namespace aclqr {
namespace {

class ConfigReader {
 public:
  explicit ConfigReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (mark.line >= 0) os << ":" << mark.line + 1 << ":" << mark.column + 1;
    os << ": " << msg;
    throw Error(ErrorKind::kConfig, os.str());
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    fail(node.Mark(), msg);
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + ": expected a number");
    double v = 0.0;
    if (!YAML::convert<double>::decode(node, v) || !std::isfinite(v)) {
      fail(node, what + ": expected a finite number, got '" + node.Scalar() + "'");
    }
    return v;
  }

  long long integer(const YAML::Node& node, const std::string& what) const {
    const double v = number(node, what);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) fail(node, what + ": expected an integer");
    return static_cast<long long>(v);
  }

  std::uint64_t unsigned_integer(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + ": expected a nonnegative integer");
    std::uint64_t v = 0;
    if (!YAML::convert<std::uint64_t>::decode(node, v) || node.Scalar().starts_with("-")) {
      fail(node, what + ": expected a nonnegative integer, got '" + node.Scalar() + "'");
    }
    return v;
  }

  std::string text(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + ": expected a string");
    return node.Scalar();
  }

  Vector vector(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, what + ": expected a nonempty list");
    Vector v(static_cast<Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i) {
      v(static_cast<Index>(i)) = number(node[i], what + "[" + std::to_string(i) + "]");
    }
    return v;
  }

  Matrix matrix(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() == 0) {
      fail(node, what + ": expected a nonempty list of rows");
    }
    const auto rows = static_cast<Index>(node.size());
    Index cols = -1;
    Matrix M;
    for (std::size_t i = 0; i < node.size(); ++i) {
      const Vector row = vector(node[i], what + " row " + std::to_string(i));
      if (cols < 0) {
        cols = row.size();
        M.resize(rows, cols);
      } else if (row.size() != cols) {
        fail(node[i], what + ": rows have different lengths");
      }
      M.row(static_cast<Index>(i)) = row.transpose();
    }
    return M;
  }

  /// Either a list (diagonal) or a list of rows (full matrix).
  Matrix weight(const YAML::Node& node, const std::string& what) const {
    if (node.IsSequence() && node.size() > 0 && node[0].IsSequence()) return matrix(node, what);
    const Vector d = vector(node, what);
    return d.asDiagonal();
  }

  std::vector<Vector> vector_list(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, what + ": expected a nonempty list");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(vector(node[i], what + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::vector<Matrix> matrix_list(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, what + ": expected a nonempty list");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(matrix(node[i], what + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

 private:
  std::string source_;
};

/// A mapping whose keys must all be consumed.
class Section {
 public:
  Section(const ConfigReader& reader, YAML::Node node, std::string name,
          std::set<std::string> allowed)
      : reader_(reader), node_(node.IsDefined() ? std::move(node) : YAML::Node()),
        name_(std::move(name)), allowed_(std::move(allowed)) {
    if (!node_.IsNull() && !node_.IsMap()) {
      reader_.fail(node_, "section '" + name_ + "' must be a mapping");
    }
    if (node_.IsMap()) {
      for (const auto& kv : node_) {
        const std::string key = kv.first.as<std::string>();
        if (!allowed_.contains(key)) {
          reader_.fail(kv.first, "unknown key '" + key + "' in section '" + name_ + "'");
        }
      }
    }
  }

  bool has(const std::string& key) const {
    return node_.IsMap() && node_[key] && !node_[key].IsNull();
  }
  YAML::Node get(const std::string& key) const { return node_[key]; }
  const YAML::Node& node() const { return node_; }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  YAML::Node require_key(const std::string& key) const {
    if (!has(key)) reader_.fail(node_.Mark(), "missing required key '" + path(key) + "'");
    return node_[key];
  }

 private:
  const ConfigReader& reader_;
  YAML::Node node_;
  std::string name_;
  std::set<std::string> allowed_;
};

struct Defaults {
  std::vector<std::string>& notes;
  void note(const std::string& key, const std::string& value) {
    notes.push_back(key + " = " + value);
  }
};

TrajectoryKind parse_trajectory_kind(const ConfigReader& r, const YAML::Node& node) {
  const std::string s = r.text(node, "theta.trajectory.kind");
  if (s == "constant") return TrajectoryKind::kConstant;
  if (s == "decaying") return TrajectoryKind::kDecaying;
  if (s == "square_wave") return TrajectoryKind::kSquareWave;
  if (s == "custom") return TrajectoryKind::kCustom;
  r.fail(node, "theta.trajectory.kind: expected constant|decaying|square_wave|custom, got '" + s + "'");
}

DisturbanceKind parse_disturbance_kind(const ConfigReader& r, const YAML::Node& node) {
  const std::string s = r.text(node, "disturbance.kind");
  if (s == "none") return DisturbanceKind::kNone;
  if (s == "uniform_decaying") return DisturbanceKind::kUniformDecaying;
  if (s == "uniform_constant") return DisturbanceKind::kUniformConstant;
  if (s == "custom") return DisturbanceKind::kCustom;
  r.fail(node, "disturbance.kind: expected none|uniform_decaying|uniform_constant|custom, got '" + s + "'");
}

PolicyMode parse_mode(const ConfigReader& r, const YAML::Node& node) {
  const std::string s = r.text(node, "controller.mode");
  if (s == "adaptive") return PolicyMode::kAdaptive;
  if (s == "frozen") return PolicyMode::kFrozen;
  if (s == "oracle") return PolicyMode::kOracle;
  r.fail(node, "controller.mode: expected adaptive|frozen|oracle, got '" + s + "'");
}

void parse_system(const ConfigReader& r, const YAML::Node& root, ExperimentConfig& cfg) {
  const Section sec(r, root["system"], "system",
                    {"preset", "plant", "quadrotor", "A0", "A_incr", "B0", "B_incr"});
  if (!sec.has("preset")) r.fail(root.Mark(), "missing required key 'system.preset'");
  const std::string preset = r.text(sec.get("preset"), "system.preset");
  SimConfig& sim = cfg.sim;
  if (preset == "quadrotor") {
    for (const char* key : {"A0", "A_incr", "B0", "B_incr"}) {
      if (sec.has(key)) r.fail(sec.get(key), std::string("system.") + key + " is only valid with preset 'custom'");
    }
    std::string plant = "nonlinear";
    if (sec.has("plant")) plant = r.text(sec.get("plant"), "system.plant");
    if (plant == "nonlinear") {
      sim.plant = PlantKind::kQuadrotorNonlinear;
    } else if (plant == "linear") {
      sim.plant = PlantKind::kQuadrotorLinear;
    } else {
      r.fail(sec.get("plant"), "system.plant: expected nonlinear|linear, got '" + plant + "'");
    }
    if (sec.has("quadrotor")) {
      const Section q(r, sec.get("quadrotor"), "system.quadrotor", {"g", "mass", "arm", "Ts"});
      if (q.has("g")) sim.quadrotor.g = r.number(q.get("g"), q.path("g"));
      if (q.has("mass")) sim.quadrotor.mass = r.number(q.get("mass"), q.path("mass"));
      if (q.has("arm")) sim.quadrotor.arm = r.number(q.get("arm"), q.path("arm"));
      if (q.has("Ts")) sim.quadrotor.Ts = r.number(q.get("Ts"), q.path("Ts"));
    }
    try {
      sim.par = quadrotor_parametrization(sim.quadrotor);
    } catch (const Error& e) {
      r.fail(sec.node(), e.what());
    }
  } else if (preset == "custom") {
    if (sec.has("plant") && r.text(sec.get("plant"), "system.plant") != "linear") {
      r.fail(sec.get("plant"), "system.plant: custom systems are simulated as linear plants");
    }
    if (sec.has("quadrotor")) r.fail(sec.get("quadrotor"), "system.quadrotor requires preset 'quadrotor'");
    sim.plant = PlantKind::kGenericLinear;
    try {
      sim.par = AffineParametrization(r.matrix(sec.require_key("A0"), "system.A0"),
                                      r.matrix_list(sec.require_key("A_incr"), "system.A_incr"),
                                      r.matrix(sec.require_key("B0"), "system.B0"),
                                      r.matrix_list(sec.require_key("B_incr"), "system.B_incr"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConfig) throw;
      r.fail(sec.node(), e.what());
    }
  } else {
    r.fail(sec.get("preset"), "system.preset: expected quadrotor|custom, got '" + preset + "'");
  }
}

void parse_theta(const ConfigReader& r, const YAML::Node& root, ExperimentConfig& cfg,
                 Defaults& defaults) {
  SimConfig& sim = cfg.sim;
  const bool quad = sim.plant != PlantKind::kGenericLinear;
  const Section sec(r, root["theta"], "theta", {"lower", "upper", "trajectory"});
  const Index p = sim.par.p();

  Vector lower(p), upper(p);
  if (quad) {
    lower << -10.0, 50.0;
    upper << 10.0, 500.0;
  }
  if (sec.has("lower") || !quad) lower = r.vector(sec.require_key("lower"), "theta.lower");
  if (sec.has("upper") || !quad) upper = r.vector(sec.require_key("upper"), "theta.upper");
  if (lower.size() != p) r.fail(sec.get("lower"), "theta.lower must have p entries");
  if (upper.size() != p) r.fail(sec.get("upper"), "theta.upper must have p entries");
  try {
    sim.box = ParamBox(lower, upper);
  } catch (const Error& e) {
    r.fail(sec.node(), std::string("theta: ") + e.what());
  }

  const Section tr(r, sec.get("trajectory"), "theta.trajectory",
                   {"kind", "base", "component", "amplitude", "decay", "period", "sequence"});
  ParamTrajectory& t = sim.theta_traj;
  if (quad) {
    t.kind = TrajectoryKind::kDecaying;
    t.base = Vector(2);
    t.base << 0.0, 250.0;
  } else {
    t.kind = TrajectoryKind::kConstant;
  }
  if (tr.has("kind")) t.kind = parse_trajectory_kind(r, tr.get("kind"));
  if (tr.has("base")) {
    t.base = r.vector(tr.get("base"), "theta.trajectory.base");
    if (t.base.size() != p) r.fail(tr.get("base"), "theta.trajectory.base must have p entries");
  } else if (!quad && t.kind != TrajectoryKind::kCustom) {
    tr.require_key("base");
  }
  if (tr.has("component")) {
    const long long c = r.integer(tr.get("component"), "theta.trajectory.component");
    if (c < 0 || c >= p) r.fail(tr.get("component"), "theta.trajectory.component out of range");
    t.component = static_cast<Index>(c);
  }
  const bool waveform = t.kind == TrajectoryKind::kDecaying || t.kind == TrajectoryKind::kSquareWave;
  t.amplitude = 5.0;
  t.decay = 0.002;
  t.period = 200;
  if (tr.has("amplitude")) {
    t.amplitude = r.number(tr.get("amplitude"), "theta.trajectory.amplitude");
  } else if (waveform) {
    defaults.note("theta.trajectory.amplitude", format_double(t.amplitude));
  }
  if (tr.has("decay")) {
    t.decay = r.number(tr.get("decay"), "theta.trajectory.decay");
    if (t.decay < 0.0) r.fail(tr.get("decay"), "theta.trajectory.decay must be >= 0");
  } else if (t.kind == TrajectoryKind::kDecaying) {
    defaults.note("theta.trajectory.decay", format_double(t.decay));
  }
  if (tr.has("period")) {
    const long long per = r.integer(tr.get("period"), "theta.trajectory.period");
    if (per < 2 || per > 1000000000) r.fail(tr.get("period"), "theta.trajectory.period must be >= 2");
    t.period = static_cast<int>(per);
  } else if (waveform) {
    defaults.note("theta.trajectory.period", std::to_string(t.period));
  }
  if (t.kind == TrajectoryKind::kCustom) {
    t.sequence = r.vector_list(tr.require_key("sequence"), "theta.trajectory.sequence");
    for (std::size_t i = 0; i < t.sequence.size(); ++i) {
      if (t.sequence[i].size() != p) {
        r.fail(tr.get("sequence")[i], "theta.trajectory.sequence entries must have p values");
      }
    }
  } else if (tr.has("sequence")) {
    r.fail(tr.get("sequence"), "theta.trajectory.sequence requires kind 'custom'");
  }
}

void parse_disturbance(const ConfigReader& r, const YAML::Node& root, ExperimentConfig& cfg) {
  SimConfig& sim = cfg.sim;
  const bool quad = sim.plant != PlantKind::kGenericLinear;
  const Section sec(r, root["disturbance"], "disturbance", {"kind", "amplitude", "decay", "sequence"});
  DisturbanceModel& d = sim.disturbance;
  d.dim = quad ? 2 : sim.par.n();
  d.kind = quad ? DisturbanceKind::kUniformDecaying : DisturbanceKind::kNone;
  d.amplitude = 1.0;
  d.decay = 0.001;
  if (sec.has("kind")) d.kind = parse_disturbance_kind(r, sec.get("kind"));
  if (sec.has("amplitude")) {
    d.amplitude = r.number(sec.get("amplitude"), "disturbance.amplitude");
    if (d.amplitude < 0.0) r.fail(sec.get("amplitude"), "disturbance.amplitude must be >= 0");
  }
  if (sec.has("decay")) {
    d.decay = r.number(sec.get("decay"), "disturbance.decay");
    if (d.decay < 0.0) r.fail(sec.get("decay"), "disturbance.decay must be >= 0");
  }
  if (d.kind == DisturbanceKind::kCustom) {
    d.sequence = r.vector_list(sec.require_key("sequence"), "disturbance.sequence");
    for (std::size_t i = 0; i < d.sequence.size(); ++i) {
      if (d.sequence[i].size() != d.dim) {
        r.fail(sec.get("sequence")[i], "disturbance.sequence entries must have " +
                                           std::to_string(d.dim) + " values");
      }
    }
  } else if (sec.has("sequence")) {
    r.fail(sec.get("sequence"), "disturbance.sequence requires kind 'custom'");
  }
}

void parse_controller(const ConfigReader& r, const YAML::Node& root, ExperimentConfig& cfg) {
  SimConfig& sim = cfg.sim;
  const bool quad = sim.plant != PlantKind::kGenericLinear;
  const Section sec(r, root["controller"], "controller",
                    {"Q", "R", "mu", "theta_hat0", "mode", "recompute_tolerance", "exploration_std"});
  const Index n = sim.par.n(), m = sim.par.m(), p = sim.par.p();
  if (quad) {
    sim.Q = Matrix::Identity(6, 6);
    sim.R = 10.0 * Matrix::Identity(2, 2);
    sim.mu = 50.0;
    sim.theta_hat0 = Vector(2);
    sim.theta_hat0 << 0.0, 100.0;
  }
  if (sec.has("Q") || !quad) sim.Q = r.weight(sec.require_key("Q"), "controller.Q");
  if (sec.has("R") || !quad) sim.R = r.weight(sec.require_key("R"), "controller.R");
  if (sec.has("mu") || !quad) sim.mu = r.number(sec.require_key("mu"), "controller.mu");
  if (sec.has("theta_hat0") || !quad) {
    sim.theta_hat0 = r.vector(sec.require_key("theta_hat0"), "controller.theta_hat0");
  }
  if (sim.Q.rows() != n || sim.Q.cols() != n) r.fail(sec.get("Q"), "controller.Q must be n x n");
  if (!is_positive_definite(sim.Q)) r.fail(sec.get("Q"), "controller.Q must be symmetric positive definite");
  if (sim.R.rows() != m || sim.R.cols() != m) r.fail(sec.get("R"), "controller.R must be m x m");
  if (!is_positive_definite(sim.R)) r.fail(sec.get("R"), "controller.R must be symmetric positive definite");
  if (!(sim.mu > 0.0)) r.fail(sec.get("mu"), "controller.mu must be positive");
  if (sim.theta_hat0.size() != p) r.fail(sec.get("theta_hat0"), "controller.theta_hat0 must have p entries");
  if (!sim.box.contains(sim.theta_hat0)) {
    r.fail(sec.has("theta_hat0") ? sec.get("theta_hat0").Mark() : root.Mark(),
           "controller.theta_hat0 must lie inside the theta box");
  }
  if (sec.has("mode")) sim.mode = parse_mode(r, sec.get("mode"));
  if (sec.has("recompute_tolerance")) {
    sim.recompute_tolerance = r.number(sec.get("recompute_tolerance"), "controller.recompute_tolerance");
    if (sim.recompute_tolerance < 0.0) {
      r.fail(sec.get("recompute_tolerance"), "controller.recompute_tolerance must be >= 0");
    }
  }
  if (sec.has("exploration_std")) {
    const Vector s = r.vector(sec.get("exploration_std"), "controller.exploration_std");
    if (s.size() != m || (s.array() < 0.0).any()) {
      r.fail(sec.get("exploration_std"), "controller.exploration_std must be m nonnegative values");
    }
    sim.exploration_std = s;
  }
}

void parse_sim(const ConfigReader& r, const YAML::Node& root, ExperimentConfig& cfg,
               Defaults& defaults) {
  SimConfig& sim = cfg.sim;
  const bool quad = sim.plant != PlantKind::kGenericLinear;
  const Section sec(r, root["sim"], "sim", {"T", "x0", "seed", "divergence_threshold"});
  sim.horizon = 2000;
  if (sec.has("T")) {
    const long long T = r.integer(sec.get("T"), "sim.T");
    if (T < 1 || T > 100000000) r.fail(sec.get("T"), "sim.T must be between 1 and 1e8");
    sim.horizon = static_cast<int>(T);
  } else {
    defaults.note("sim.T", std::to_string(sim.horizon));
  }
  if (quad) {
    sim.x0 = Vector::Zero(6);
    sim.x0(0) = -2.0;
    sim.x0(1) = -2.0;
  }
  if (sec.has("x0") || !quad) {
    sim.x0 = r.vector(sec.require_key("x0"), "sim.x0");
    if (sim.x0.size() != sim.par.n()) r.fail(sec.get("x0"), "sim.x0 must have n entries");
  } else {
    defaults.note("sim.x0[2..5]", "0 (only the two positions are given as -2)");
  }
  sim.seed = 0;
  if (sec.has("seed")) {
    sim.seed = r.unsigned_integer(sec.get("seed"), "sim.seed");
  } else {
    defaults.note("sim.seed", "0");
  }
  sim.divergence_threshold = 1e6;
  if (sec.has("divergence_threshold")) {
    sim.divergence_threshold = r.number(sec.get("divergence_threshold"), "sim.divergence_threshold");
    if (!(sim.divergence_threshold > 0.0)) {
      r.fail(sec.get("divergence_threshold"), "sim.divergence_threshold must be positive");
    }
  } else {
    defaults.note("sim.divergence_threshold", "1e6");
  }
}

void parse_output(const ConfigReader& r, const YAML::Node& root, ExperimentConfig& cfg) {
  const Section sec(r, root["output"], "output", {"stem", "plot_stride"});
  if (sec.has("stem")) {
    cfg.stem = r.text(sec.get("stem"), "output.stem");
    if (cfg.stem.empty() || cfg.stem.find_first_of("/\\") != std::string::npos) {
      r.fail(sec.get("stem"), "output.stem must be a plain file name");
    }
  }
  if (sec.has("plot_stride")) {
    const long long s = r.integer(sec.get("plot_stride"), "output.plot_stride");
    if (s < 1 || s > 1000000) r.fail(sec.get("plot_stride"), "output.plot_stride must be >= 1");
    cfg.plot_stride = static_cast<int>(s);
  }
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& text, const std::string& source_name) {
  const ConfigReader r(source_name);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    r.fail(e.mark, "YAML syntax error: " + e.msg);
  }
  if (!root.IsMap()) r.fail(root.Mark(), "top level must be a mapping of sections");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    static const std::set<std::string> kSections = {"system", "theta", "disturbance",
                                                    "controller", "sim", "output"};
    if (!kSections.contains(key)) r.fail(kv.first, "unknown section '" + key + "'");
  }

  ExperimentConfig cfg;
  cfg.source_name = source_name;
  cfg.source_text = text;
  cfg.sha256 = sha256_hex(text);
  Defaults defaults{cfg.non_paper_defaults};
  try {
    parse_system(r, root, cfg);
    parse_theta(r, root, cfg, defaults);
    parse_disturbance(r, root, cfg);
    parse_controller(r, root, cfg);
    parse_sim(r, root, cfg, defaults);
    parse_output(r, root, cfg);
  } catch (const YAML::Exception& e) {
    r.fail(e.mark, e.msg);
  }
  try {
    cfg.sim.validate();
  } catch (const Error& e) {
    r.fail(root.Mark(), e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), path);
}

std::vector<std::string> preset_names() {
  return {"case-a-nonlinear", "case-b-nonlinear", "case-a-linear", "case-b-linear"};
}

std::string preset_text(const std::string& name) {
  static const std::map<std::string, std::pair<std::string, std::string>> kPresets = {
      {"case-a-nonlinear", {"nonlinear", "decaying"}},
      {"case-b-nonlinear", {"nonlinear", "square_wave"}},
      {"case-a-linear", {"linear", "decaying"}},
      {"case-b-linear", {"linear", "square_wave"}},
  };
  const auto it = kPresets.find(name);
  if (it == kPresets.end()) throw_invalid("unknown preset '" + name + "'");
  const auto& [plant, kind] = it->second;
  std::ostringstream os;
  os << "system:\n"
     << "  preset: quadrotor\n"
     << "  plant: " << plant << "\n"
     << "theta:\n"
     << "  lower: [-10, 50]\n"
     << "  upper: [10, 500]\n"
     << "  trajectory:\n"
     << "    kind: " << kind << "\n"
     << "    base: [0, 250]\n"
     << "    component: 0\n"
     << "disturbance:\n"
     << "  kind: uniform_decaying\n"
     << "  amplitude: 1.0\n"
     << "  decay: 0.001\n"
     << "controller:\n"
     << "  Q: [1, 1, 1, 1, 1, 1]\n"
     << "  R: [10, 10]\n"
     << "  mu: 50\n"
     << "  theta_hat0: [0, 100]\n"
     << "  mode: adaptive\n"
     << "sim:\n"
     << "  T: 10000\n"
     << "output:\n"
     << "  stem: " << name << "\n";
  return os.str();
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 computation failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace aclqr
