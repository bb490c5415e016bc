#include "asbq/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "asbq/snapshot.hpp"
#include "asbq/solitary.hpp"

namespace asbq {

namespace fs = std::filesystem;

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::stopped_by_policy: return "stopped_by_policy";
    case RunStatus::integration_fault: return "integration_fault";
  }
  return "unknown";
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return 0;
    case RunStatus::stopped_by_policy: return 4;
    case RunStatus::integration_fault: return 3;
  }
  return 1;
}

namespace {

std::shared_ptr<const SolitaryProfile> profile_for(const ExperimentConfig& c, double speed) {
  const TorusGrid line = make_grid_1d(c.grid.nx, c.grid.lx);
  try {
    return std::make_shared<const SolitaryProfile>(solve_profile(speed, c.model.eps_nl, line));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial_data.c: ") + e.what());
  }
}

std::ofstream open_out(const fs::path& p, RunReport& r) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  r.files.push_back(p.string());
  return out;
}

std::size_t gcd_all(std::initializer_list<std::size_t> v, const std::vector<std::size_t>& more) {
  std::size_t g = 0;
  for (std::size_t x : v) g = std::gcd(g, x);
  for (std::size_t x : more) g = std::gcd(g, x);
  return g == 0 ? 1 : g;
}

}  // namespace

WaveState build_initial_state(const ExperimentConfig& c) {
  validate(c);
  if (const auto* f = std::get_if<SnapshotFileSpec>(&c.initial)) {
    Snapshot snap = load_snapshot(f->path);
    const TorusGrid g = c.grid.build();
    if (!snap.state.grid.same_as(g)) throw ConfigError("initial_data.path: snapshot grid differs from grid");
    return std::move(snap.state);
  }
  const TorusGrid grid = c.grid.build();
  InitialDataSpec spec = std::visit(
      [&](const auto& s) -> InitialDataSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianPerturbationSpec>) {
          return GaussianPerturbation{profile_for(c, s.c), s.field, s.amplitude, s.alpha};
        } else if constexpr (std::is_same_v<T, CosDeformationSpec>) {
          return cos_deform(profile_for(c, s.c), s.a);
        } else if constexpr (std::is_same_v<T, LineWaveSpec>) {
          return LineWave{profile_for(c, s.c)};
        } else if constexpr (std::is_same_v<T, CavitationSpec>) {
          return cavitation(s.kappa, s.alpha);
        } else if constexpr (std::is_same_v<T, LocalizedSpec>) {
          return localized(s.kappa, s.alpha);
        } else {
          throw std::logic_error("unreachable");
        }
      },
      c.initial);
  try {
    return build_initial_data(spec, grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial_data: ") + e.what());
  }
}

RunReport run(const ExperimentConfig& c, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  const WaveState initial = build_initial_state(c);

  const fs::path dir = c.output.directory;
  std::ofstream norms_out, fits_out, slices_out;
  if (options.write_files) {
    fs::create_directories(dir);
    open_out(dir / "config.json", report) << to_json(c) << '\n';
    norms_out = open_out(dir / "norms.csv", report);
    write_norms_csv_header(norms_out);
    if (c.tracking.enabled) {
      fits_out = open_out(dir / "fits.csv", report);
      write_fit_csv_header(fits_out);
    }
    if (!c.output.slice_axes.empty()) {
      slices_out = open_out(dir / "slices.csv", report);
      write_slice_csv_header(slices_out);
    }
  }

  EvolveConfig ec;
  ec.t_end = c.time.t_end;
  ec.steps = c.time.steps;
  const double dt = ec.dt();
  std::vector<std::size_t> snapshot_steps;
  for (double t : c.output.snapshot_times) {
    snapshot_steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
  }
  ec.callback_stride = gcd_all({c.diagnostics.stride, c.output.slice_stride,
                                c.tracking.enabled ? c.tracking.stride : 0},
                               snapshot_steps);

  TrackerConfig tc;
  tc.fields = c.tracking.fields;
  tc.axes = c.tracking.axes;
  tc.window = c.tracking.window;
  tc.kappa_stop = c.tracking.kappa_stop;
  tc.stop_fields = c.tracking.stop_fields;
  SingularityTracker tracker(tc);

  const std::size_t last = c.time.steps;
  auto on_step = [&](const WaveState& s, std::size_t step) -> std::optional<StopRequest> {
    if (step % c.diagnostics.stride == 0 || step == last) {
      NormRecord r = record(s, c.model);
      if (r.tail_ratio > kTailRatioWarning) {
        if (report.resolution_warnings == 0) {
          report.warnings.push_back("spectral tail ratio above 1e-6 first at t = " + std::to_string(s.t));
        }
        ++report.resolution_warnings;
      }
      report.max_tail_ratio = std::max(report.max_tail_ratio, r.tail_ratio);
      if (options.write_files) write_norms_csv_row(norms_out, r);
      report.norms.push_back(r);
    }
    if (options.write_files && (step % c.output.slice_stride == 0 || step == last)) {
      for (Axis a : c.output.slice_axes) write_slice_csv_rows(slices_out, axis_slice(s, a));
    }
    if (options.write_files &&
        std::find(snapshot_steps.begin(), snapshot_steps.end(), step) != snapshot_steps.end()) {
      const fs::path p = dir / ("snapshot_" + std::to_string(step) + ".asbq");
      save_snapshot(p.string(), s, c.model);
      report.files.push_back(p.string());
    }
    if (c.tracking.enabled && (step % c.tracking.stride == 0 || step == last)) {
      const std::size_t before = tracker.history().size();
      const auto decision = tracker.observe(s);
      for (std::size_t n = before; n < tracker.history().size(); ++n) {
        if (options.write_files) write_fit_csv_row(fits_out, tracker.history()[n]);
        report.fits.push_back(tracker.history()[n]);
      }
      if (decision && s.t >= c.tracking.stop_after) {
        report.stop = decision;
        return StopRequest{"singularity_fit", std::string("delta(") + to_string(decision->field) +
                                                  ", k" + to_string(decision->axis) +
                                                  ") = " + std::to_string(decision->delta) +
                                                  " <= " + std::to_string(decision->threshold)};
      }
    }
    return std::nullopt;
  };

  TendencyEvaluator rhs(initial.grid, c.model);
  std::string final_name = "final.asbq";
  try {
    EvolveResult res = evolve(initial, ec, rhs, {on_step});
    report.status = res.stopped_by_policy ? RunStatus::stopped_by_policy : RunStatus::completed;
    report.events = std::move(res.events);
    report.steps_taken = res.steps_taken;
    report.t_final = res.final_state.t;
    report.final_state = std::move(res.final_state);
  } catch (const IntegrationFault& e) {
    report.status = RunStatus::integration_fault;
    report.fault = e.what();
    report.steps_taken = e.step();
    report.events.push_back({e.step(), e.last_good_state() ? e.last_good_state()->t : 0.0,
                             "integration_fault", e.what()});
    if (e.last_good_state()) {
      report.final_state = *e.last_good_state();
      report.t_final = report.final_state->t;
    }
    final_name = "last_good.asbq";
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (options.write_files) {
    if (report.final_state) {
      const fs::path p = dir / final_name;
      save_snapshot(p.string(), *report.final_state, c.model);
      report.files.push_back(p.string());
    }
    if (c.diagnostics.normalize) {
      std::ofstream out = open_out(dir / "norms_normalized.csv", report);
      write_norms_csv_header(out);
      for (const auto& r : normalize_at_t0(report.norms)) write_norms_csv_row(out, r);
    }
    report.files.push_back((dir / "report.json").string());
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json");
    out << report_json(c, report) << '\n';
  }
  return report;
}

std::string report_json(const ExperimentConfig& c, const RunReport& r) {
  using nlohmann::json;
  json j;
  j["preset"] = c.preset ? json(*c.preset) : json(nullptr);
  j["status"] = to_string(r.status);
  j["exit_code"] = exit_code(r.status);
  j["steps_taken"] = r.steps_taken;
  j["t_final"] = r.t_final;
  j["wall_seconds"] = r.wall_seconds;
  j["resolution_warnings"] = r.resolution_warnings;
  j["max_tail_ratio"] = r.max_tail_ratio;
  j["warnings"] = r.warnings;
  j["files"] = r.files;
  if (r.stop) {
    j["stop"] = {{"t", r.stop->t},
                 {"field", to_string(r.stop->field)},
                 {"axis", std::string("k") + to_string(r.stop->axis)},
                 {"delta", r.stop->delta},
                 {"threshold", r.stop->threshold}};
  } else {
    j["stop"] = nullptr;
  }
  if (!r.fault.empty()) j["fault"] = r.fault;
  json events = json::array();
  for (const auto& e : r.events) {
    events.push_back({{"step", e.step}, {"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
  }
  j["events"] = events;
  return j.dump(2);
}

}  // namespace asbq
