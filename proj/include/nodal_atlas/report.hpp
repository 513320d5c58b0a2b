// JSON forms of eigenfunctions and of every report, with the fixed field
// order and 12-significant-digit floats that make output byte-reproducible.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nodal_atlas/lattice.hpp"
#include "nodal_atlas/meshbound.hpp"
#include "nodal_atlas/nodal.hpp"
#include "nodal_atlas/nodalgraph.hpp"
#include "nodal_atlas/spectra.hpp"

namespace nodal_atlas::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "nodal-atlas/1";

// {"domain": "square"|"torus", "n_or_m": int, "terms": [[a, b, re, im], ...]}.
// Square terms may omit im; a nonzero im is rejected.  Throws InvalidInput,
// MixedEigenvalue, EmptySpectrum.
Eigenfunction parse_eigenfunction(const nlohmann::json& j, bool normalize = false);
Eigenfunction parse_eigenfunction(const std::string& text, bool normalize = false);

Json eigenfunction_json(const Eigenfunction& f);
Json singular_points_json(const std::vector<nodal::SingularPoint>& points);
Json census_json(const nodal::NodalCensus& census, const std::vector<nodal::SingularPoint>& points);
Json index_json(const SpectralIndex& index);
Json bound_json(const meshbound::BoundReport& report);
Json graph_json(const nodalgraph::NodalGraphReport& report);
Json budget_json(const nodalgraph::SingularBudget& budget);
Json circle_json(const lattice::LatticeCircle& circle, const std::vector<double>& thetas);

// %.12g, the float format used everywhere in reports.
std::string format_number(double v);
// Rounds every float in place to 12 significant digits.
void round_floats(Json& j);
// Rounded, two-space indented, trailing newline.
std::string dump(Json j);

}  // namespace nodal_atlas::report
