#include "asbq/presets.hpp"

#include <functional>
#include <map>

namespace asbq {

namespace {

struct Entry {
  std::function<ExperimentConfig()> full;
  std::function<ExperimentConfig()> desk;
};

ExperimentConfig base(GridSpec grid, double eps_disp, InitialSpec init, double t_end,
                      std::size_t steps) {
  ExperimentConfig c;
  c.grid = grid;
  c.model = ModelParams::boussinesq(1.0);
  c.model.eps_disp = eps_disp;
  c.initial = std::move(init);
  c.time = {t_end, steps};
  c.diagnostics.stride = std::max<std::size_t>(1, steps / 200);
  c.tracking.stride = std::max<std::size_t>(1, steps / 20);
  c.output.slice_stride = std::max<std::size_t>(1, steps / 100);
  return c;
}

GridSpec grid2(std::size_t nx, std::size_t ny, double lx, double ly) { return {2, nx, ny, lx, ly}; }

/// Line-wave runs: snapshots at start and end, x and y slices.
ExperimentConfig line_run(GridSpec g, InitialSpec init, double t_end, std::size_t steps) {
  ExperimentConfig c = base(g, 1.0, std::move(init), t_end, steps);
  c.diagnostics.normalize = true;
  c.output.snapshot_times = {0.0, t_end};
  c.output.slice_axes = {Axis::x, Axis::y};
  return c;
}

/// Gaussian-hump runs with the singularity tracker on both axes; only eta may stop the run.
ExperimentConfig hump_run(GridSpec g, double eps_disp, InitialSpec init, double t_end,
                          std::size_t steps) {
  ExperimentConfig c = base(g, eps_disp, std::move(init), t_end, steps);
  c.diagnostics.normalize = true;
  c.tracking.enabled = true;
  c.tracking.stride = std::max<std::size_t>(1, steps / 200);
  c.tracking.fields = {Field::eta, Field::vx, Field::vy};
  c.tracking.axes = {Axis::x, Axis::y};
  c.tracking.stop_fields = {Field::eta};
  c.output.snapshot_times = {0.0, t_end};
  c.output.slice_axes = {Axis::x, Axis::y};
  return c;
}

/// Half-width 2 pi exceeds the distance unit-speed radiation covers by t = 5.
ExperimentConfig cavitation_1d(std::size_t nx, std::size_t steps) {
  ExperimentConfig c = base({1, nx, 1, 2.0, 0.0}, 1.0, CavitationSpec{-1.0, 1.0}, 5.0, steps);
  c.diagnostics.normalize = true;
  c.diagnostics.stride = steps / 1000;
  c.tracking.enabled = true;
  c.tracking.stride = steps / 1000;
  c.tracking.fields = {Field::eta, Field::vx};
  c.tracking.axes = {Axis::x};
  c.output.slice_axes = {Axis::x};
  c.output.snapshot_times = {0.0};
  return c;
}

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = [] {
    std::map<std::string, Entry> m;
    const GridSpec c2_full = grid2(4096, 128, 10.0, 3.0);
    const GridSpec c2_desk = grid2(1024, 64, 10.0, 3.0);
    const GridSpec c11_full = grid2(16384, 128, 40.0, 3.0);
    const GridSpec c11_desk = grid2(4096, 32, 40.0, 3.0);

    auto c2 = [&](const InitialSpec& init) {
      return Entry{[=] { return line_run(c2_full, init, 20.0, 10000); },
                   [=] { return line_run(c2_desk, init, 20.0, 4000); }};
    };
    m["c2_gauss_plus"] = c2(GaussianPerturbationSpec{2.0, Field::eta, 0.3, 1.0});
    m["c2_gauss_minus"] = c2(GaussianPerturbationSpec{2.0, Field::eta, -0.3, 1.0});
    m["c2_gauss_vx"] = c2(GaussianPerturbationSpec{2.0, Field::vx, 0.1, 1.0});
    m["c2_gauss_vy"] = c2(GaussianPerturbationSpec{2.0, Field::vy, 0.1, 1.0});
    m["c2_cos"] = c2(CosDeformationSpec{2.0, 0.4});
    m["c2_line"] = c2(LineWaveSpec{2.0});

    auto c11 = [&](const InitialSpec& init) {
      return Entry{[=] { return line_run(c11_full, init, 100.0, 20000); },
                   [=] { return line_run(c11_desk, init, 100.0, 20000); }};
    };
    m["c11_gauss"] = c11(GaussianPerturbationSpec{1.1, Field::eta, 0.01, 1.0});
    m["c11_cos"] = c11(CosDeformationSpec{1.1, 0.4});

    m["cavitation_1d"] = {[] { return cavitation_1d(262144, 200000); },
                          [] { return cavitation_1d(16384, 20000); }};

    m["cavitation_k-0.9_a1"] = {
        [] { return hump_run(grid2(4096, 4096, 5.0, 5.0), 1.0, CavitationSpec{-0.9, 1.0}, 10.0, 10000); },
        [] { return hump_run(grid2(512, 512, 5.0, 5.0), 1.0, CavitationSpec{-0.9, 1.0}, 10.0, 2000); }};
    m["cavitation_k-1_a1"] = {
        [] { return hump_run(grid2(4096, 4096, 3.0, 3.0), 1.0, CavitationSpec{-1.0, 1.0}, 5.0, 10000); },
        [] { return hump_run(grid2(1024, 1024, 3.0, 3.0), 1.0, CavitationSpec{-1.0, 1.0}, 5.0, 2500); }};
    m["cavitation_k-1_a0.5"] = {
        [] { return hump_run(grid2(8192, 2048, 3.0, 3.0), 1.0, CavitationSpec{-1.0, 0.5}, 5.0, 10000); },
        [] { return hump_run(grid2(1024, 512, 3.0, 3.0), 1.0, CavitationSpec{-1.0, 0.5}, 5.0, 2500); }};

    auto localized = [](double kappa, double t_end, std::vector<double> snaps) {
      auto make = [=](std::size_t n, std::size_t steps) {
        ExperimentConfig c = hump_run(grid2(n, n, 3.0, 3.0), 1.0, LocalizedSpec{kappa, 1.0}, t_end, steps);
        c.tracking.enabled = false;
        c.output.snapshot_times = snaps;
        return c;
      };
      return Entry{[=] { return make(4096, 10000); }, [=] { return make(512, 4000); }};
    };
    m["localized_k1"] = localized(1.0, 10.0, {0.0, 10.0});
    m["localized_k10"] = localized(10.0, 8.0, {0.0, 2.0, 4.0, 6.92, 8.0});

    auto dsw = [](std::size_t n, std::size_t steps) {
      ExperimentConfig c = hump_run(grid2(n, n, 3.0, 3.0), 1e-2, LocalizedSpec{1.0, 1.0}, 5.0, steps);
      c.model = ModelParams::rescaled(1e-2);
      c.tracking.enabled = false;
      c.output.snapshot_times = {0.0, 5.0};
      return c;
    };
    m["dsw_eps1e-2"] = {[=] { return dsw(4096, 10000); }, [=] { return dsw(1024, 2500); }};
    return m;
  }();
  return t;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, e] : table()) out.push_back(name);
  for (const auto& [name, e] : table()) out.push_back(name + "_desk");
  return out;
}

ExperimentConfig preset(const std::string& name) {
  const std::string suffix = "_desk";
  const bool desk = name.size() > suffix.size() &&
                    name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  const std::string key = desk ? name.substr(0, name.size() - suffix.size()) : name;
  const auto it = table().find(key);
  if (it == table().end()) throw ConfigError("preset: unknown name \"" + name + "\"");
  ExperimentConfig c = desk ? it->second.desk() : it->second.full();
  c.preset = name;
  c.output.directory = "out/" + name;
  validate(c);
  return c;
}

}  // namespace asbq
