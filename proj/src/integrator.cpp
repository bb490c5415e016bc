#include "asbq/integrator.hpp"

#include <string>

namespace asbq {

void EvolveConfig::validate() const {
  if (steps == 0) throw std::invalid_argument("evolve: number of steps must be >= 1");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("evolve: t_end must be positive");
  }
  if (callback_stride == 0) throw std::invalid_argument("evolve: callback stride must be >= 1");
}

WaveState rk4_step(const WaveState& s, double dt, TendencyEvaluator& rhs) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  SpectralState y = rhs.to_spectral(s);
  Rk4Workspace<SpectralState> w;
  rk4_advance(y, dt, rhs, w);
  return rhs.to_physical(y, s.t + dt);
}

EvolveResult evolve(const WaveState& initial, const EvolveConfig& config, TendencyEvaluator& rhs,
                    const std::vector<EvolveCallback>& callbacks) {
  config.validate();
  initial.validate();
  const double dt = config.dt();
  const double t0 = initial.t;

  EvolveResult result{initial, {}, 0, false};
  SpectralState y = rhs.to_spectral(initial);
  Rk4Workspace<SpectralState> work;

  auto fire = [&](const WaveState& state, std::size_t step) -> bool {
    for (const auto& cb : callbacks) {
      if (auto stop = cb(state, step)) {
        result.events.push_back({step, state.t, stop->kind, stop->detail});
        result.stopped_by_policy = true;
        return true;
      }
    }
    return false;
  };

  if (fire(initial, 0)) return result;

  for (std::size_t step = 1; step <= config.steps; ++step) {
    try {
      rk4_advance(y, dt, rhs, work, step, config.nan_guard);
    } catch (const IntegrationFault& e) {
      // A failed step leaves y at the previous step.
      const double t_prev = t0 + static_cast<double>(step - 1) * dt;
      throw IntegrationFault(e.step(), e.what(),
                             std::make_shared<const WaveState>(rhs.to_physical(y, t_prev)));
    }
    result.steps_taken = step;
    const double t = t0 + static_cast<double>(step) * dt;
    const bool at_callback = step % config.callback_stride == 0 || step == config.steps;
    if (!at_callback) continue;

    WaveState state = rhs.to_physical(y, t);
    if (fire(state, step)) {
      result.final_state = std::move(state);
      return result;
    }
    if (step == config.steps) result.final_state = std::move(state);
  }
  result.events.push_back({result.steps_taken, result.final_state.t, "completed", ""});
  return result;
}

}  // namespace asbq
