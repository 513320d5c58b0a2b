// Internal: damped Newton iteration for critical points of an eigenfunction.
#pragma once

#include <optional>

#include "nodal_atlas/nodal.hpp"

namespace nodal_atlas::nodal::detail {

struct NewtonResult {
  CriticalPoint point;
  double gradient_norm = 0.0;
};

// Iterates on grad phi = 0 from (x, y) with steps no longer than max_step.
// Returns nothing when the iterate leaves the square or fails to converge.
std::optional<NewtonResult> newton_critical(const Eigenfunction& f, double x, double y,
                                            double max_step);

}  // namespace nodal_atlas::nodal::detail
