#include "asbq/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace asbq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

/// Reads members of one JSON object and rejects keys that were never asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(label(), "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(path(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(path(key), "expected a finite number");
    return d;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      fail(path(key), "expected a non-negative integer");
    }
    return v->get<std::size_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(path(key), "expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(path(key), "expected a string");
    return v->get<std::string>();
  }

  std::string required_text(const std::string& key) {
    if (!has(key)) fail(path(key), "required");
    return text(key, "");
  }

  template <class T, class Parse>
  std::vector<T> list(const std::string& key, std::vector<T> fallback, Parse&& parse) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(path(key), "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string p = path(key) + "[" + std::to_string(i) + "]";
      out.push_back(parse((*v)[i], p));
    }
    return out;
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, path(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(path(it.key()), "unknown key");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Field field_item(const json& j, const std::string& p) {
  if (!j.is_string()) fail(p, "expected a field name");
  try {
    return parse_field(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(p, e.what());
  }
}

Axis axis_item(const json& j, const std::string& p) {
  if (!j.is_string()) fail(p, "expected an axis name");
  try {
    return parse_axis(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(p, e.what());
  }
}

double number_item(const json& j, const std::string& p) {
  if (!j.is_number()) fail(p, "expected a number");
  return j.get<double>();
}

GridSpec parse_grid(Section s) {
  GridSpec g;
  g.dims = static_cast<int>(s.count("dims", 2));
  if (g.dims != 1 && g.dims != 2) fail(s.path("dims"), "expected 1 or 2");
  g.nx = s.count("nx", g.nx);
  g.lx = s.number("lx", g.lx);
  if (g.dims == 2) {
    g.ny = s.count("ny", g.ny);
    g.ly = s.number("ly", g.ly);
  } else {
    if (s.has("ny") || s.has("ly")) fail(s.path(s.has("ny") ? "ny" : "ly"), "not allowed for dims = 1");
    g.ny = 1;
    g.ly = 0.0;
  }
  s.finish();
  return g;
}

InitialSpec parse_initial(Section s) {
  const std::string kind = s.required_text("kind");
  InitialSpec out;
  if (kind == "gaussian_perturbation") {
    GaussianPerturbationSpec g;
    g.c = s.number("c", g.c);
    if (s.has("field")) g.field = field_item(*s.find("field"), s.path("field"));
    g.amplitude = s.number("amplitude", g.amplitude);
    g.alpha = s.number("alpha", g.alpha);
    out = g;
  } else if (kind == "cos_deformation") {
    CosDeformationSpec g;
    g.c = s.number("c", g.c);
    g.a = s.number("a", g.a);
    out = g;
  } else if (kind == "line_wave") {
    LineWaveSpec g;
    g.c = s.number("c", g.c);
    out = g;
  } else if (kind == "cavitation") {
    CavitationSpec g;
    g.kappa = s.number("kappa", g.kappa);
    g.alpha = s.number("alpha", g.alpha);
    out = g;
  } else if (kind == "localized") {
    LocalizedSpec g;
    g.kappa = s.number("kappa", g.kappa);
    g.alpha = s.number("alpha", g.alpha);
    out = g;
  } else if (kind == "snapshot") {
    out = SnapshotFileSpec{s.required_text("path")};
  } else {
    fail(s.path("kind"), "unknown initial data kind \"" + kind + "\"");
  }
  s.finish();
  return out;
}

FitWindow parse_window(Section s) {
  FitWindow w;
  w.lo_fraction = s.number("lo_fraction", w.lo_fraction);
  w.hi_fraction = s.number("hi_fraction", w.hi_fraction);
  w.floor_factor = s.number("floor_factor", w.floor_factor);
  w.min_modes = s.count("min_modes", w.min_modes);
  s.finish();
  if (!(w.lo_fraction >= 0.0 && w.lo_fraction < w.hi_fraction && w.hi_fraction <= 1.0)) {
    fail(s.path("lo_fraction"), "need 0 <= lo_fraction < hi_fraction <= 1");
  }
  if (w.min_modes < 3) fail(s.path("min_modes"), "need at least 3 modes for three parameters");
  return w;
}

json initial_to_json(const InitialSpec& spec) {
  return std::visit(
      [](const auto& g) -> json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, GaussianPerturbationSpec>) {
          return {{"kind", "gaussian_perturbation"}, {"c", g.c}, {"field", to_string(g.field)},
                  {"amplitude", g.amplitude}, {"alpha", g.alpha}};
        } else if constexpr (std::is_same_v<T, CosDeformationSpec>) {
          return {{"kind", "cos_deformation"}, {"c", g.c}, {"a", g.a}};
        } else if constexpr (std::is_same_v<T, LineWaveSpec>) {
          return {{"kind", "line_wave"}, {"c", g.c}};
        } else if constexpr (std::is_same_v<T, CavitationSpec>) {
          return {{"kind", "cavitation"}, {"kappa", g.kappa}, {"alpha", g.alpha}};
        } else if constexpr (std::is_same_v<T, LocalizedSpec>) {
          return {{"kind", "localized"}, {"kappa", g.kappa}, {"alpha", g.alpha}};
        } else {
          return {{"kind", "snapshot"}, {"path", g.path}};
        }
      },
      spec);
}

template <class T>
json names(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

bool power_of_two(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

}  // namespace

TorusGrid GridSpec::build() const {
  return dims == 1 ? make_grid_1d(nx, lx) : make_grid_2d(nx, ny, lx, ly);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  Section root(doc, "");
  ExperimentConfig c;
  if (root.has("preset")) c.preset = root.text("preset", "");
  if (auto s = root.child("grid")) c.grid = parse_grid(*s);
  if (auto s = root.child("model")) {
    c.model.eps_nl = s->number("eps_nl", c.model.eps_nl);
    c.model.eps_disp = s->number("eps_disp", c.model.eps_disp);
    s->finish();
  }
  auto init = root.child("initial_data");
  if (!init) fail("initial_data", "required");
  c.initial = parse_initial(*init);
  if (auto s = root.child("time")) {
    c.time.t_end = s->number("t_end", c.time.t_end);
    c.time.steps = s->count("steps", c.time.steps);
    s->finish();
  }
  // Unset strides follow the step count: N_t/200 for series, N_t/20 for fits.
  c.diagnostics.stride = std::max<std::size_t>(1, c.time.steps / 200);
  c.tracking.stride = std::max<std::size_t>(1, c.time.steps / 20);
  if (auto s = root.child("diagnostics")) {
    c.diagnostics.stride = s->count("stride", c.diagnostics.stride);
    c.diagnostics.normalize = s->flag("normalize", c.diagnostics.normalize);
    s->finish();
  }
  if (auto s = root.child("tracking")) {
    TrackingSpec& t = c.tracking;
    t.enabled = s->flag("enabled", t.enabled);
    t.stride = s->count("stride", t.stride);
    t.fields = s->list("fields", t.fields, field_item);
    t.axes = s->list("axes", t.axes, axis_item);
    t.stop_fields = s->list("stop_fields", t.stop_fields, field_item);
    t.kappa_stop = s->number("kappa_stop", t.kappa_stop);
    t.stop_after = s->number("stop_after", t.stop_after);
    if (auto w = s->child("window")) t.window = parse_window(*w);
    s->finish();
  }
  if (auto s = root.child("output")) {
    OutputSpec& o = c.output;
    o.directory = s->text("directory", o.directory);
    o.snapshot_times = s->list("snapshot_times", o.snapshot_times, number_item);
    o.slice_axes = s->list("slice_axes", o.slice_axes, axis_item);
    o.slice_stride = s->count("slice_stride", o.slice_stride);
    s->finish();
  }
  root.finish();
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  const GridSpec& g = c.grid;
  if (!power_of_two(g.nx)) fail("grid.nx", "expected a power of two >= 8");
  if (!(g.lx > 0.0)) fail("grid.lx", "expected a positive scale");
  if (g.dims == 2) {
    if (!power_of_two(g.ny)) fail("grid.ny", "expected a power of two >= 8");
    if (!(g.ly > 0.0)) fail("grid.ly", "expected a positive scale");
  }
  if (!(c.model.eps_nl >= 0.0)) fail("model.eps_nl", "expected eps_nl >= 0");
  if (!(c.model.eps_disp > 0.0)) fail("model.eps_disp", "expected eps_disp > 0");
  if (!(c.time.t_end > 0.0)) fail("time.t_end", "expected t_end > 0");
  if (c.time.steps == 0) fail("time.steps", "expected at least one step");
  if (c.diagnostics.stride == 0) fail("diagnostics.stride", "expected stride >= 1");
  if (c.tracking.stride == 0) fail("tracking.stride", "expected stride >= 1");
  if (c.output.slice_stride == 0) fail("output.slice_stride", "expected stride >= 1");
  if (!(c.tracking.kappa_stop >= 0.0)) fail("tracking.kappa_stop", "expected kappa_stop >= 0");
  for (std::size_t i = 0; i < c.output.snapshot_times.size(); ++i) {
    const double t = c.output.snapshot_times[i];
    if (!(t >= 0.0 && t <= c.time.t_end)) {
      fail("output.snapshot_times[" + std::to_string(i) + "]", "outside [0, t_end]");
    }
  }
  if (c.output.directory.empty()) fail("output.directory", "expected a path");
  if (g.dims == 1) {
    for (Axis a : c.output.slice_axes) {
      if (a == Axis::y) fail("output.slice_axes", "y slice on a 1D grid");
    }
    for (Axis a : c.tracking.axes) {
      if (a == Axis::y) fail("tracking.axes", "k_y axis on a 1D grid");
    }
  }

  const bool solitary = std::holds_alternative<GaussianPerturbationSpec>(c.initial) ||
                        std::holds_alternative<CosDeformationSpec>(c.initial) ||
                        std::holds_alternative<LineWaveSpec>(c.initial);
  if (solitary && c.model.eps_nl != c.model.eps_disp) {
    fail("initial_data.kind", "solitary-wave data needs eps_nl == eps_disp");
  }
  if (const auto* p = std::get_if<GaussianPerturbationSpec>(&c.initial)) {
    if (g.dims == 1 && p->field == Field::vy) fail("initial_data.field", "vy on a 1D grid");
  }
  if (const auto* p = std::get_if<CavitationSpec>(&c.initial); p && !(p->kappa < 0.0)) {
    fail("initial_data.kappa", "cavitation data needs kappa < 0");
  }
  if (const auto* p = std::get_if<LocalizedSpec>(&c.initial); p && !(p->kappa > 0.0)) {
    fail("initial_data.kappa", "localized data needs kappa > 0");
  }
}

std::string to_json(const ExperimentConfig& c) {
  json j;
  if (c.preset) j["preset"] = *c.preset;
  json grid = {{"dims", c.grid.dims}, {"nx", c.grid.nx}, {"lx", c.grid.lx}};
  if (c.grid.dims == 2) {
    grid["ny"] = c.grid.ny;
    grid["ly"] = c.grid.ly;
  }
  j["grid"] = grid;
  j["model"] = {{"eps_nl", c.model.eps_nl}, {"eps_disp", c.model.eps_disp}};
  j["initial_data"] = initial_to_json(c.initial);
  j["time"] = {{"t_end", c.time.t_end}, {"steps", c.time.steps}};
  j["diagnostics"] = {{"stride", c.diagnostics.stride}, {"normalize", c.diagnostics.normalize}};
  const TrackingSpec& t = c.tracking;
  j["tracking"] = {{"enabled", t.enabled},
                   {"stride", t.stride},
                   {"fields", names(t.fields)},
                   {"axes", names(t.axes)},
                   {"stop_fields", names(t.stop_fields)},
                   {"kappa_stop", t.kappa_stop},
                   {"stop_after", t.stop_after},
                   {"window",
                    {{"lo_fraction", t.window.lo_fraction},
                     {"hi_fraction", t.window.hi_fraction},
                     {"floor_factor", t.window.floor_factor},
                     {"min_modes", t.window.min_modes}}}};
  j["output"] = {{"directory", c.output.directory},
                 {"snapshot_times", c.output.snapshot_times},
                 {"slice_axes", names(c.output.slice_axes)},
                 {"slice_stride", c.output.slice_stride}};
  return j.dump(2);
}

}  // namespace asbq
