#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "varbvp/lagrangian.hpp"

namespace varbvp {

/// Names of the built-in test systems.
///
///   free                 ½m|v|²                       keys: mass      (any n, default 1)
///   harmonic             ½|v|² − ½ω²|q|²              keys: omega     (any n, default 1)
///   pendulum             ½v² + g·cos q                keys: g         (n = 1)
///   double_well          ½v² − d·(q² − 1)²/4          keys: depth     (n = 1)
///   euclidean_metric     ½s|v|²                       keys: scale     (any n, default 2)
///   halfplane_metric     |v|²/(2y²),  y > 0           (n = 2)
///   sphere_chart_metric  ½R²(θ̇² + sin²θ φ̇²), 0<θ<π   keys: radius    (n = 2)
const std::vector<std::string_view>& builtin_names();

/// Builds a catalog model, or the degenerate `quartic` test model L = ¼v⁴
/// (n = 1), which is not regular at v = 0.
///
/// `dim` overrides the family's default dimension where the family allows it.
/// Throws InvalidConfig for unknown names, unknown parameter keys or
/// out-of-range values.
LagrangianModel make_builtin(std::string_view name, const Parameters& parameters = {},
                             std::optional<int> dim = {});

}  // namespace varbvp
