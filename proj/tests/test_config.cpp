#include <doctest.h>

#include <fstream>
#include <random>

#include "aclqr/config.hpp"
#include "aclqr/error.hpp"
#include "aclqr/plant.hpp"
#include "oracles.hpp"

using namespace aclqr;
using oracle::vec2;

namespace {

std::string config_dir() { return ACLQR_CONFIG_DIR; }

// Parses `text` expecting a config error; returns the message.
std::string config_error(const std::string& text) {
  try {
    parse_experiment(text, "t.yaml");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    return e.what();
  }
  FAIL("expected a config error for:\n" << text);
  return {};
}

const char* kMinimal =
    "system:\n"
    "  preset: quadrotor\n";

}  // namespace

TEST_CASE("minimal quadrotor file takes the reference defaults") {
  const ExperimentConfig c = parse_experiment(kMinimal, "min.yaml");
  const SimConfig& s = c.sim;
  CHECK(s.plant == PlantKind::kQuadrotorNonlinear);
  CHECK(s.box.lower() == vec2(-10, 50));
  CHECK(s.box.upper() == vec2(10, 500));
  CHECK(s.Q == Matrix::Identity(6, 6));
  CHECK(s.R == 10 * Matrix::Identity(2, 2));
  CHECK(s.mu == 50);
  CHECK(s.theta_hat0 == vec2(0, 100));
  CHECK(s.x0(0) == -2);
  CHECK(s.x0(1) == -2);
  CHECK(s.x0.tail(4).isZero(0.0));
  CHECK(s.theta_traj.kind == TrajectoryKind::kDecaying);
  CHECK(s.theta_traj.base == vec2(0, 250));
  CHECK(s.theta_traj.amplitude == 5.0);
  CHECK(s.disturbance.kind == DisturbanceKind::kUniformDecaying);
  CHECK(s.disturbance.amplitude == 1.0);
  CHECK(s.disturbance.decay == 0.001);
  CHECK(s.mode == PolicyMode::kAdaptive);
  CHECK(c.stem == "run");
  CHECK(c.source_name == "min.yaml");
  CHECK(c.sha256 == sha256_hex(kMinimal));

  // every unstated artifact default is recorded
  auto noted = [&](const std::string& key) {
    for (const auto& e : c.non_paper_defaults) {
      if (e.rfind(key, 0) == 0) return true;
    }
    return false;
  };
  CHECK(noted("theta.trajectory.amplitude"));
  CHECK(noted("sim.T"));
  CHECK(noted("sim.seed"));
}

TEST_CASE("explicit values replace the artifact defaults and their notes") {
  const ExperimentConfig c = parse_experiment(
      "system: {preset: quadrotor, plant: linear}\n"
      "theta: {trajectory: {kind: square_wave, amplitude: 3, period: 40}}\n"
      "sim: {T: 77, seed: 12, x0: [1, 2, 3, 4, 5, 6]}\n",
      "x.yaml");
  CHECK(c.sim.plant == PlantKind::kQuadrotorLinear);
  CHECK(c.sim.theta_traj.amplitude == 3.0);
  CHECK(c.sim.theta_traj.period == 40);
  CHECK(c.sim.horizon == 77);
  CHECK(c.sim.seed == 12);
  CHECK(c.sim.x0(5) == 6.0);
  for (const auto& e : c.non_paper_defaults) {
    CHECK(e.rfind("sim.T", 0) != 0);
    CHECK(e.rfind("sim.seed", 0) != 0);
    CHECK(e.rfind("theta.trajectory.amplitude", 0) != 0);
  }
}

TEST_CASE("quadrotor constants feed the parametrization") {
  const ExperimentConfig c = parse_experiment(
      "system:\n"
      "  preset: quadrotor\n"
      "  quadrotor: {g: 9.0, mass: 2.0, arm: 0.5, Ts: 0.05}\n",
      "q.yaml");
  QuadrotorParams qp;
  qp.g = 9.0;
  qp.mass = 2.0;
  qp.arm = 0.5;
  qp.Ts = 0.05;
  const AffineParametrization ref = quadrotor_parametrization(qp);
  const Vector th = vec2(3, 120);
  CHECK(eval_system(c.sim.par, th).A == eval_system(ref, th).A);
  CHECK(eval_system(c.sim.par, th).B == eval_system(ref, th).B);
}

TEST_CASE("custom systems") {
  const ExperimentConfig c = load_experiment(config_dir() + "/custom-2d.yaml");
  CHECK(c.sim.plant == PlantKind::kGenericLinear);
  const AffineParametrization toy = oracle::toy_parametrization();
  for (const Vector& th : {vec2(0.1, 0.5), vec2(-0.3, 0.9)}) {
    CHECK(eval_system(c.sim.par, th).A == eval_system(toy, th).A);
    CHECK(eval_system(c.sim.par, th).B == eval_system(toy, th).B);
  }
  CHECK(c.sim.disturbance.dim == 2);
  CHECK(c.sim.seed == 7);
  CHECK(c.stem == "custom-2d");
}

TEST_CASE("every shipped config and preset parses") {
  for (const char* f : {"case-a-nonlinear", "case-a-frozen", "case-b-nonlinear", "case-a-linear",
                        "case-a-linear-noise", "oracle-hover", "custom-2d"}) {
    CAPTURE(f);
    const ExperimentConfig c = load_experiment(config_dir() + "/" + f + ".yaml");
    CHECK_NOTHROW(c.sim.validate());
  }
  CHECK(preset_names().size() == 4);
  for (const auto& name : preset_names()) {
    const ExperimentConfig c = parse_experiment(preset_text(name), name);
    CHECK(c.stem == name);
    CHECK(c.sim.horizon == 10000);
    CHECK(c.linear_plant() == (name.find("linear") != std::string::npos &&
                               name.find("nonlinear") == std::string::npos));
    CHECK(c.sim.theta_traj.kind ==
          (name.find("case-a") == 0 ? TrajectoryKind::kDecaying : TrajectoryKind::kSquareWave));
  }
  CHECK_THROWS_AS(preset_text("case-c"), Error);
}

TEST_CASE("errors name the offending line and column") {
  CHECK(config_error("system:\n  preset: quadrotor\n  plnt: linear\n") ==
        "t.yaml:3:3: unknown key 'plnt' in section 'system'");
  CHECK(config_error("system:\n  preset: quadrotor\nsimulation:\n  T: 3\n") ==
        "t.yaml:3:1: unknown section 'simulation'");
  CHECK(config_error("system:\n  preset: quadrotor\ncontroller:\n  mu: -1\n").rfind("t.yaml:4:7:", 0) == 0);
  CHECK(config_error("system:\n  preset: quadrotor\nsim:\n  T: 2.5\n").rfind("t.yaml:4:6:", 0) == 0);
  CHECK(config_error("system:\n  preset: helicopter\n").find("expected quadrotor|custom") !=
        std::string::npos);
  CHECK(config_error("system: [1, 2\n").find("YAML syntax error") != std::string::npos);
  CHECK(config_error("- a\n- b\n").find("top level") != std::string::npos);
  CHECK(config_error("theta: {}\n").find("system.preset") != std::string::npos);
}

TEST_CASE("semantic validation") {
  const std::string sys = "system: {preset: quadrotor}\n";
  CHECK(config_error(sys + "controller: {theta_hat0: [0, 20]}\n").find("theta_hat0") != std::string::npos);
  CHECK(config_error(sys + "controller: {Q: [1, 1, 1]}\n").find("controller.Q") != std::string::npos);
  CHECK(config_error(sys + "controller: {R: [[1, 2], [3, 1]]}\n").find("controller.R") != std::string::npos);
  CHECK(config_error(sys + "controller: {mode: greedy}\n").find("controller.mode") != std::string::npos);
  CHECK(config_error(sys + "theta: {lower: [0, 100], upper: [1, 50]}\n").find("theta") != std::string::npos);
  CHECK(config_error(sys + "theta: {trajectory: {kind: decaying, sequence: [[0, 100]]}}\n")
            .find("requires kind 'custom'") != std::string::npos);
  CHECK(config_error(sys + "disturbance: {kind: custom, sequence: [[1, 2, 3]]}\n")
            .find("disturbance.sequence") != std::string::npos);
  CHECK(config_error(sys + "sim: {x0: [1, 2]}\n").find("sim.x0") != std::string::npos);
  CHECK(config_error(sys + "sim: {T: 0}\n").find("sim.T") != std::string::npos);
  CHECK(config_error(sys + "sim: {seed: -3}\n").find("sim.seed") != std::string::npos);
  CHECK(config_error(sys + "sim: {T: .nan}\n").find("sim.T") != std::string::npos);
  CHECK(config_error(sys + "controller: {mu: .inf}\n").find("finite") != std::string::npos);
  CHECK(config_error(sys + "output: {stem: ../escape}\n").find("output.stem") != std::string::npos);
  CHECK(config_error("system: {preset: custom, A0: [[1]], A_incr: [[[1]]], B0: [[1]], B_incr: [[[0]]], plant: nonlinear}\n")
            .find("linear plants") != std::string::npos);
  CHECK(config_error("system: {preset: quadrotor, A0: [[1]]}\n").find("preset 'custom'") != std::string::npos);
}

TEST_CASE("unreadable files are IO errors") {
  try {
    load_experiment("/nonexistent/dir/x.yaml");
    FAIL("expected an IO error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

TEST_CASE("SHA-256 matches the standard test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("mutated files either parse to a valid run or fail with a config error") {
  std::mt19937_64 gen(2024);
  const std::string alphabet = " :-[]{},.\n#0123456789abcdefxyzTQR\"'";
  std::vector<std::string> seeds;
  for (const auto& name : preset_names()) seeds.push_back(preset_text(name));
  {
    std::ifstream in(config_dir() + "/custom-2d.yaml");
    seeds.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  int parsed = 0, rejected = 0;
  for (int t = 0; t < 4000; ++t) {
    std::string text = seeds[gen() % seeds.size()];
    const int edits = 1 + static_cast<int>(gen() % 4);
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = gen() % text.size();
      switch (gen() % 4) {
        case 0: text[pos] = alphabet[gen() % alphabet.size()]; break;
        case 1: text.erase(pos, 1 + gen() % 8); break;
        case 2: {
          // drop whole lines, which removes keys and sections
          const std::size_t begin = text.rfind('\n', pos) == std::string::npos ? 0 : text.rfind('\n', pos);
          const std::size_t end = text.find('\n', pos + 1 + gen() % 40);
          text.erase(begin, end == std::string::npos ? std::string::npos : end - begin);
          break;
        }
        default: text.insert(pos, 1, alphabet[gen() % alphabet.size()]); break;
      }
      if (text.empty()) text = "x";
    }
    try {
      const ExperimentConfig c = parse_experiment(text, "fuzz.yaml");
      c.sim.validate();
      ++parsed;
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::kConfig);
      REQUIRE(std::string(e.what()).rfind("fuzz.yaml", 0) == 0);
      ++rejected;
    }
  }
  CHECK(parsed > 0);
  CHECK(rejected > 0);
}
