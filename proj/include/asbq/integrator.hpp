#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asbq/model.hpp"

namespace asbq {

/// A NaN or Inf appeared in a Runge-Kutta stage. Carries the failing step
/// index and, when the caller had one, the last state that was finite.
class IntegrationFault : public std::runtime_error {
 public:
  IntegrationFault(std::size_t step, const std::string& what,
                   std::shared_ptr<const WaveState> last_good = nullptr)
      : std::runtime_error(what), step_(step), last_good_(std::move(last_good)) {}

  std::size_t step() const { return step_; }
  const WaveState* last_good_state() const { return last_good_.get(); }

 private:
  std::size_t step_;
  std::shared_ptr<const WaveState> last_good_;
};

inline void axpy(double& y, double a, double x) { y += a * x; }
inline bool all_finite(double x) { return std::isfinite(x); }
inline void match_shape(double&, double) {}

/// Reusable stage storage for rk4_advance.
template <class State>
struct Rk4Workspace {
  State k1, k2, k3, k4, stage;
};

/// Classical four-stage Runge-Kutta update of `y` in place. The tendency is
/// called as rhs(const State&, State& out). With `guard` set, a non-finite
/// stage throws IntegrationFault tagged with `step_index` and leaves `y`
/// untouched.
template <class State, class Rhs>
void rk4_advance(State& y, double dt, Rhs&& rhs, Rk4Workspace<State>& w,
                 std::size_t step_index = 0, bool guard = true) {
  if (!(dt != 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("rk4: time step must be finite and nonzero");
  }
  auto check = [step_index, guard](const State& k, int stage) {
    if (guard && !all_finite(k)) {
      throw IntegrationFault(step_index, "non-finite value in RK4 stage " +
                                             std::to_string(stage) + " of step " +
                                             std::to_string(step_index));
    }
  };
  match_shape(w.k1, y);
  rhs(y, w.k1);
  check(w.k1, 1);

  w.stage = y;
  axpy(w.stage, 0.5 * dt, w.k1);
  match_shape(w.k2, y);
  rhs(w.stage, w.k2);
  check(w.k2, 2);

  w.stage = y;
  axpy(w.stage, 0.5 * dt, w.k2);
  match_shape(w.k3, y);
  rhs(w.stage, w.k3);
  check(w.k3, 3);

  w.stage = y;
  axpy(w.stage, dt, w.k3);
  match_shape(w.k4, y);
  rhs(w.stage, w.k4);
  check(w.k4, 4);

  axpy(y, dt / 6.0, w.k1);
  axpy(y, dt / 3.0, w.k2);
  axpy(y, dt / 3.0, w.k3);
  axpy(y, dt / 6.0, w.k4);
}

template <class State, class Rhs>
State rk4_step(const State& s, double dt, Rhs&& rhs, std::size_t step_index = 0) {
  Rk4Workspace<State> w;
  State y = s;
  rk4_advance(y, dt, std::forward<Rhs>(rhs), w, step_index);
  return y;
}

/// One RK4 step of a physical-space state; advances t by dt.
WaveState rk4_step(const WaveState& s, double dt, TendencyEvaluator& rhs);

struct EvolveConfig {
  double t_end = 1.0;
  std::size_t steps = 1;
  /// Steps between callbacks; callbacks also fire at step 0 and at the last step.
  std::size_t callback_stride = 1;
  /// Check every stage for NaN/Inf.
  bool nan_guard = true;

  double dt() const { return t_end / static_cast<double>(steps); }
  /// Throws std::invalid_argument on zero steps, zero stride or t_end <= 0.
  void validate() const;
};

struct Event {
  std::size_t step = 0;
  double t = 0.0;
  std::string kind;
  std::string detail;
};

/// Returned by a callback to halt the run; `kind` names the policy.
struct StopRequest {
  std::string kind;
  std::string detail;
};

/// Observes a read-only physical state. Return a StopRequest to stop.
using EvolveCallback =
    std::function<std::optional<StopRequest>(const WaveState& state, std::size_t step)>;

struct EvolveResult {
  WaveState final_state;
  std::vector<Event> events;
  std::size_t steps_taken = 0;
  bool stopped_by_policy = false;
};

/// Fixed-step RK4 from `initial` over config.steps steps of t_end/steps.
/// The state is advanced in spectral space; callbacks see physical states.
/// On a non-finite stage throws IntegrationFault carrying the state of the
/// last completed step.
EvolveResult evolve(const WaveState& initial, const EvolveConfig& config, TendencyEvaluator& rhs,
                    const std::vector<EvolveCallback>& callbacks);

}  // namespace asbq
