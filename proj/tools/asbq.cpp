// Command-line front end: profile construction, experiment runs and offline
// inspection of snapshots.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "asbq/binary_io.hpp"
#include "asbq/presets.hpp"
#include "asbq/runner.hpp"
#include "asbq/snapshot.hpp"
#include "asbq/solitary.hpp"

namespace {

constexpr int kConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw asbq::ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_solitary(double c, double eps, std::size_t nx, double lx, const std::string& out) {
  const asbq::TorusGrid grid = asbq::make_grid_1d(nx, lx);
  const asbq::SolitaryProfile p = asbq::solve_profile(c, eps, grid);
  asbq::save_profile(out, p);
  std::cout << std::setprecision(10) << "c = " << p.c << "  amplitude = " << p.amplitude()
            << "  residual = " << p.residual_norm << "  newton = " << p.newton_iterations << '\n';
  for (const auto& w : p.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << out << '\n';
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& preset, const std::string& out_dir) {
  asbq::ExperimentConfig c = preset.empty() ? asbq::parse_config(read_file(config_path))
                                            : asbq::preset(preset);
  if (!out_dir.empty()) c.output.directory = out_dir;
  const asbq::RunReport r = asbq::run(c);
  std::cout << "status " << asbq::to_string(r.status) << "  t = " << r.t_final << "  steps "
            << r.steps_taken << "  wall " << std::fixed << std::setprecision(1) << r.wall_seconds
            << " s\n";
  if (r.stop) {
    std::cout << std::defaultfloat << std::setprecision(8) << "stop: delta(" << asbq::to_string(r.stop->field)
              << ", k" << asbq::to_string(r.stop->axis) << ") = " << r.stop->delta << " at t = " << r.stop->t
              << '\n';
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (!r.fault.empty()) std::cerr << "fault: " << r.fault << '\n';
  std::cout << "output in " << c.output.directory << '\n';
  return asbq::exit_code(r.status);
}

int cmd_fit(const std::string& path, const std::string& field, const std::string& axis) {
  const asbq::Snapshot snap = asbq::load_snapshot(path);
  const asbq::Field f = asbq::parse_field(field);
  const asbq::Axis a = asbq::parse_axis(axis);
  const auto sf = asbq::SpectralField::from_physical(snap.state.grid, snap.state.field(f));
  double peak = 0.0;
  for (const auto& c : sf.coefficients()) peak = std::max(peak, std::abs(c));
  const auto spec = asbq::axis_modulus(sf, a);
  const auto fit = asbq::fit_ssf(spec.k, spec.modulus, {}, peak);
  if (!fit) {
    std::cout << "fit unavailable: too few modes above the round-off floor\n";
    return 1;
  }
  asbq::write_fit_csv_header(std::cout);
  asbq::write_fit_csv_row(std::cout, {f, a, snap.state.t, *fit});
  if (!fit->reliable()) std::cerr << "warning: fit misfit " << fit->quality << " above 0.5\n";
  return 0;
}

int cmd_slice(const std::string& path, const std::string& axis) {
  const asbq::Snapshot snap = asbq::load_snapshot(path);
  const auto s = asbq::axis_slice(snap.state, asbq::parse_axis(axis));
  asbq::write_slice_csv_header(std::cout);
  asbq::write_slice_csv_rows(std::cout, s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral lab for the Amick-Schonbek Boussinesq system"};
  app.require_subcommand(1);

  double c = 2.0, eps = 1.0, lx = 10.0;
  std::size_t nx = 4096;
  std::string out = "profile.aspw";
  auto* sol = app.add_subcommand("solitary", "construct and save a solitary-wave profile");
  sol->add_option("--c", c, "speed (> 1)")->required();
  sol->add_option("--eps", eps, "eps");
  sol->add_option("--Nx", nx, "number of modes");
  sol->add_option("--Lx", lx, "domain scale, x in Lx[-pi, pi]");
  sol->add_option("--out", out, "output file");

  std::string config, preset_name, out_dir;
  auto* run = app.add_subcommand("run", "run an experiment from a config file or preset");
  auto* cfg_opt = run->add_option("--config", config, "JSON config file");
  auto* pre_opt = run->add_option("--preset", preset_name, "preset name");
  cfg_opt->excludes(pre_opt);
  run->add_option("--out-dir", out_dir, "output directory (overrides the config)");

  std::string snapshot, field = "eta", axis = "x";
  auto* fit = app.add_subcommand("fit", "fit the Fourier tail of a snapshot");
  fit->add_option("--snapshot", snapshot)->required();
  fit->add_option("--field", field, "eta, vx or vy");
  fit->add_option("--axis", axis, "kx or ky");

  auto* slice = app.add_subcommand("slice", "print the axis slice of a snapshot as CSV");
  slice->add_option("--snapshot", snapshot)->required();
  slice->add_option("--axis", axis, "x or y");

  auto* presets = app.add_subcommand("presets", "list presets or print one as JSON");
  presets->add_option("--show", preset_name, "print the explicit config of a preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sol) return cmd_solitary(c, eps, nx, lx, out);
    if (*run) {
      if (config.empty() && preset_name.empty()) {
        std::cerr << "run: one of --config or --preset is required\n";
        return kConfigError;
      }
      return cmd_run(config, preset_name, out_dir);
    }
    if (*fit) return cmd_fit(snapshot, field, axis);
    if (*slice) return cmd_slice(snapshot, axis);
    if (*presets) {
      if (preset_name.empty()) {
        for (const auto& n : asbq::preset_names()) std::cout << n << '\n';
      } else {
        std::cout << asbq::to_json(asbq::preset(preset_name)) << '\n';
      }
      return 0;
    }
  } catch (const asbq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const asbq::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
