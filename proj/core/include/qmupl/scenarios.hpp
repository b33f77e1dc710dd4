#pragma once

#include <memory>
#include <string>

#include "qmupl/ensemble.hpp"
#include "qmupl/units.hpp"

namespace qmupl {

/// Built-in scenarios, all in dimensionless units unless the parameters
/// `hbar`, `mass`, `lambda` say otherwise.
///
///   single         one Gaussian, means only (a0_re, a0_im, x0, k0)
///   stationary     one Gaussian with a = a_inf (x0, k0)
///   linear_norm    one Gaussian under the linear equation; its squared norm
///   hitting        reduced Gamma equation, exit from (-b, b); horizon is
///                  s_max and dt the s-step (b, b0, bridge, drift_offset)
///   delocalization as hitting, then the post-hit dip (b, b0, eta, s_after, bridge)
///   double_gamma   full double-Gaussian parameters (X0, K0, a0_re, a0_im, gamma0)
///   grid_delta_a   double Gaussian on a grid; Delta A (X0, n_points, extent, a0_re, a0_im, gamma0)
///   grid_density   one Gaussian on a grid; |psi|^2 at the horizon (n_points, extent, a0_re, a0_im, x0, k0)
void register_builtin_scenarios(ScenarioRegistry& registry);

/// hbar, mass, lambda from spec.params with the dimensionless defaults.
Model scenario_model(const EnsembleSpec& spec);

}  // namespace qmupl
