#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "asbq/presets.hpp"
#include "asbq/runner.hpp"
#include "asbq/snapshot.hpp"
#include "oracles.hpp"

using namespace asbq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("asbq_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_line_config(const fs::path& dir) {
  ExperimentConfig c;
  c.grid = {2, 256, 8, 5.0, 1.0};
  c.initial = GaussianPerturbationSpec{2.0, Field::eta, 0.1, 1.0};
  c.time = {0.5, 50};
  c.diagnostics = {5, true};
  c.tracking.enabled = true;
  c.tracking.stride = 10;
  c.output.directory = dir.string();
  c.output.snapshot_times = {0.0, 0.2};
  c.output.slice_axes = {Axis::x, Axis::y};
  c.output.slice_stride = 25;
  return c;
}

}  // namespace

TEST_SUITE("experiment_runner") {

TEST_CASE("presets reproduce the published setups") {
  const auto plus = preset("c2_gauss_plus");
  CHECK(plus.grid.dims == 2);
  CHECK(plus.grid.nx == 4096);
  CHECK(plus.grid.ny == 128);
  CHECK(plus.grid.lx == 10.0);
  CHECK(plus.grid.ly == 3.0);
  CHECK(plus.time.t_end == 20.0);
  CHECK(plus.time.steps == 10000);
  const auto& g = std::get<GaussianPerturbationSpec>(plus.initial);
  CHECK(g.c == 2.0);
  CHECK(g.field == Field::eta);
  CHECK(g.amplitude == 0.3);

  const auto cos11 = preset("c11_cos");
  CHECK(cos11.grid.nx == 16384);
  CHECK(cos11.grid.ny == 128);
  CHECK(cos11.grid.lx == 40.0);
  CHECK(cos11.time.t_end == 100.0);
  CHECK(cos11.time.steps == 20000);
  CHECK(std::get<CosDeformationSpec>(cos11.initial).c == 1.1);
  CHECK(std::get<CosDeformationSpec>(cos11.initial).a == 0.4);

  const auto k10 = preset("localized_k10");
  CHECK(k10.output.snapshot_times == std::vector<double>{0.0, 2.0, 4.0, 6.92, 8.0});

  const auto cav = preset("cavitation_k-1_a1");
  CHECK(cav.grid.nx == 4096);
  CHECK(cav.grid.ny == 4096);
  CHECK(cav.tracking.enabled);
  CHECK(cav.tracking.stop_fields == std::vector<Field>{Field::eta});

  const auto dsw = preset("dsw_eps1e-2");
  CHECK(dsw.model.eps_nl == 1.0);
  CHECK(dsw.model.eps_disp == 0.01);

  CHECK_THROWS_AS(preset("no_such_preset"), ConfigError);
}

TEST_CASE("every preset validates and survives a JSON round trip") {
  const auto names = preset_names();
  CHECK(names.size() >= 30);
  for (const auto& n : names) {
    CAPTURE(n);
    const ExperimentConfig c = preset(n);
    const std::string text = to_json(c);
    const ExperimentConfig back = parse_config(text);
    REQUIRE(to_json(back) == text);
  }
}

TEST_CASE("config errors are reported with their path") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{}").find("initial_data") != std::string::npos);
  CHECK(message("not json").size() > 0);
  CHECK(message(R"({"initial_data": {"kind": "line_wave", "c": 2}, "grid": {"nx": 100}})").find("grid.nx") !=
        std::string::npos);
  CHECK(message(R"({"initial_data": {"kind": "line_wave", "c": 2}, "grid": {"nz": 64}})").find("grid.nz") !=
        std::string::npos);
  CHECK(message(R"({"initial_data": {"kind": "line_wave", "c": "fast"}})").find("initial_data.c") !=
        std::string::npos);
  CHECK(message(R"({"initial_data": {"kind": "wobble"}})").find("initial_data.kind") != std::string::npos);
  CHECK(message(R"({"initial_data": {"kind": "cavitation", "kappa": 0.5}})").find("kappa") !=
        std::string::npos);
  CHECK(message(R"({"initial_data": {"kind": "line_wave", "c": 2}, "time": {"t_end": 1, "steps": 10},
                    "output": {"snapshot_times": [2.0]}})")
            .find("snapshot_times") != std::string::npos);
}

TEST_CASE("defaults for strides follow the step count") {
  const auto c = parse_config(R"({"initial_data": {"kind": "localized", "kappa": 1},
                                  "time": {"t_end": 1, "steps": 4000}})");
  CHECK(c.diagnostics.stride == 20);
  CHECK(c.tracking.stride == 200);
}

TEST_CASE("snapshot round trip, 2D and 1D") {
  const TorusGrid g = make_grid_2d(32, 16, 1.5, 0.5);
  WaveState s = WaveState::rest(g, 3.25);
  const auto a = oracle::band_limited(32, 16, 1.5, 0.5, 4, 1);
  for (std::size_t n = 0; n < g.size(); ++n) {
    s.eta[n] = a[n];
    s.vx[n] = -a[n];
    s.vy[n] = 2.0 * a[n];
  }
  std::stringstream ss;
  write_snapshot(ss, s, ModelParams::rescaled(0.01));
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 4 + 4 + 1 + 8 * 2 + 8 * 5 + 3 * g.size() * 8);
  std::istringstream in(bytes);
  const Snapshot back = read_snapshot(in);
  CHECK(back.state.grid.same_as(g));
  CHECK(back.state.t == 3.25);
  CHECK(back.state.eta == s.eta);
  CHECK(back.state.vx == s.vx);
  CHECK(back.state.vy == s.vy);
  CHECK(back.params.eps_nl == 1.0);
  CHECK(back.params.eps_disp == 0.01);

  const TorusGrid g1 = make_grid_1d(16, 2.0);
  WaveState s1 = WaveState::rest(g1, 1.0);
  s1.eta[3] = 1.0;
  std::stringstream s1s;
  write_snapshot(s1s, s1, ModelParams::boussinesq(1.0));
  CHECK(s1s.str().size() == 4 + 4 + 1 + 8 * 2 + 8 * 5 + 2 * 16 * 8);
  const Snapshot b1 = read_snapshot(s1s);
  CHECK(b1.state.grid.is_1d());
  CHECK(b1.state.eta == s1.eta);
  CHECK(b1.state.vy.empty());
}

TEST_CASE("corrupt snapshots are rejected") {
  const TorusGrid g = make_grid_2d(16, 16, 1.0, 1.0);
  std::stringstream ss;
  write_snapshot(ss, WaveState::rest(g), ModelParams{});
  const std::string bytes = ss.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 1));
  CHECK_THROWS_AS(read_snapshot(truncated), FormatError);
  std::string bad = bytes;
  bad[1] = 'Z';
  std::istringstream bad_magic(bad);
  CHECK_THROWS_AS(read_snapshot(bad_magic), FormatError);
  std::string version = bytes;
  version[4] = 2;
  std::istringstream bad_version(version);
  CHECK_THROWS_AS(read_snapshot(bad_version), FormatError);
  std::string nx = bytes;
  nx[9] = 24;  // N_x = 24, not a power of two
  std::istringstream bad_nx(nx);
  CHECK_THROWS_AS(read_snapshot(bad_nx), FormatError);
}

TEST_CASE("a run writes every artifact") {
  const fs::path dir = scratch("artifacts");
  const RunReport r = run(small_line_config(dir));
  CHECK(r.status == RunStatus::completed);
  CHECK(exit_code(r.status) == 0);
  CHECK(r.steps_taken == 50);
  CHECK(r.t_final == doctest::Approx(0.5));
  for (const char* f : {"config.json", "norms.csv", "norms_normalized.csv", "fits.csv", "slices.csv",
                        "snapshot_0.asbq", "snapshot_20.asbq", "final.asbq", "report.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  CHECK(r.norms.size() == 11);
  CHECK_FALSE(r.fits.empty());
  const auto cfg = parse_config(slurp(dir / "config.json"));
  CHECK(to_json(cfg) == to_json(small_line_config(dir)));
  const Snapshot snap = load_snapshot((dir / "snapshot_20.asbq").string());
  CHECK(snap.state.t == doctest::Approx(0.2));
}

TEST_CASE("runs are reproducible byte for byte") {
  const fs::path a = scratch("repro_a");
  const fs::path b = scratch("repro_b");
  run(small_line_config(a));
  run(small_line_config(b));
  for (const char* f : {"norms.csv", "fits.csv", "slices.csv", "final.asbq"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("restart from a snapshot continues the uninterrupted run") {
  const fs::path dir = scratch("restart");
  ExperimentConfig full = small_line_config(dir / "full");
  full.tracking.enabled = false;
  const RunReport whole = run(full);

  ExperimentConfig tail = full;
  tail.initial = SnapshotFileSpec{(dir / "full" / "snapshot_20.asbq").string()};
  tail.time = {0.3, 30};
  tail.output.directory = (dir / "tail").string();
  tail.output.snapshot_times = {};
  const RunReport rest = run(tail);
  REQUIRE(rest.final_state.has_value());
  CHECK(rest.final_state->t == doctest::Approx(0.5));
  CHECK(oracle::max_abs_diff(rest.final_state->eta, whole.final_state->eta) < 1e-14);
  CHECK(oracle::max_abs_diff(rest.final_state->vx, whole.final_state->vx) < 1e-14);
  CHECK(oracle::max_abs_diff(rest.final_state->vy, whole.final_state->vy) < 1e-14);

  ExperimentConfig wrong = tail;
  wrong.grid.nx = 128;
  CHECK_THROWS_AS(build_initial_state(wrong), ConfigError);
}

TEST_CASE("singularity stop ends the run with status 4") {
  ExperimentConfig c;
  c.grid = {1, 256, 1, 2.0, 0.0};
  c.initial = CavitationSpec{-1.0, 1.0};
  c.time = {6.0, 3000};
  c.diagnostics.stride = 30;
  c.tracking.enabled = true;
  c.tracking.stride = 30;
  c.tracking.fields = {Field::eta};
  c.output.slice_axes = {Axis::x};
  c.output.directory = scratch("stop").string();
  const RunReport r = run(c);
  CHECK(r.status == RunStatus::stopped_by_policy);
  CHECK(exit_code(r.status) == 4);
  REQUIRE(r.stop.has_value());
  CHECK(r.stop->delta <= r.stop->threshold);
  CHECK(r.t_final < 6.0);
  REQUIRE_FALSE(r.events.empty());
  CHECK(r.events.back().kind == "singularity_fit");
  CHECK(slurp(fs::path(c.output.directory) / "report.json").find("stopped_by_policy") != std::string::npos);
}

TEST_CASE("integration fault keeps the last good state with status 3") {
  ExperimentConfig c;
  c.grid = {2, 64, 64, 3.0, 3.0};
  c.initial = LocalizedSpec{10.0, 1.0};
  c.time = {20.0, 4};
  c.diagnostics.stride = 1;
  c.output.slice_axes = {};
  c.output.directory = scratch("fault").string();
  const RunReport r = run(c);
  CHECK(r.status == RunStatus::integration_fault);
  CHECK(exit_code(r.status) == 3);
  CHECK_FALSE(r.fault.empty());
  REQUIRE(r.final_state.has_value());
  CHECK(fs::exists(fs::path(c.output.directory) / "last_good.asbq"));
  CHECK_FALSE(fs::exists(fs::path(c.output.directory) / "final.asbq"));
}

TEST_CASE("runs without file output still report their series") {
  ExperimentConfig c = small_line_config(scratch("nofiles") / "never");
  const RunReport r = run(c, RunOptions{false});
  CHECK(r.files.empty());
  CHECK_FALSE(fs::exists(c.output.directory));
  CHECK(r.norms.size() == 11);
}

}
