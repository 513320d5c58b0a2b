#include "nodal_atlas/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "nodal_atlas/errors.hpp"

namespace nodal_atlas::report {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void round_floats(Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    j = std::isfinite(v) ? Json(std::strtod(format_number(v).c_str(), nullptr)) : Json(nullptr);
  } else if (j.is_structured()) {
    for (auto& child : j) round_floats(child);
  }
}

std::string dump(Json j) {
  round_floats(j);
  return j.dump(2) + "\n";
}

namespace {

int as_int(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer()) fail(ErrorCode::InvalidInput, std::string(what) + " must be an integer");
  return v.get<int>();
}

double as_real(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) fail(ErrorCode::InvalidInput, std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

Eigenfunction parse_eigenfunction(const nlohmann::json& j, bool normalize) {
  if (!j.is_object()) fail(ErrorCode::InvalidInput, "eigenfunction must be a JSON object");
  if (!j.contains("domain") || !j["domain"].is_string())
    fail(ErrorCode::InvalidInput, "missing string field \"domain\"");
  if (!j.contains("terms") || !j["terms"].is_array())
    fail(ErrorCode::InvalidInput, "missing array field \"terms\"");
  const std::string domain = j["domain"].get<std::string>();
  if (domain != "square" && domain != "torus")
    fail(ErrorCode::InvalidInput, "domain must be \"square\" or \"torus\"");
  if (j["terms"].empty()) fail(ErrorCode::EmptySpectrum, "no terms");

  std::vector<SquareTerm> square;
  std::vector<TorusTerm> torus;
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() < 3 || t.size() > 4)
      fail(ErrorCode::InvalidInput, "each term is [a, b, re] or [a, b, re, im]");
    const int a = as_int(t[0], "a"), b = as_int(t[1], "b");
    const double re = as_real(t[2], "re");
    const double im = t.size() == 4 ? as_real(t[3], "im") : 0.0;
    if (domain == "square") {
      if (im != 0.0) fail(ErrorCode::InvalidInput, "square coefficients are real");
      square.push_back({a, b, re});
    } else {
      torus.push_back({a, b, {re, im}});
    }
  }

  Eigenfunction f = domain == "square" ? Eigenfunction(SquareEigenfunction::make(square))
                                       : Eigenfunction(TorusEigenfunction::make(torus));
  if (j.contains("n_or_m")) {
    const int declared = as_int(j["n_or_m"], "n_or_m");
    const int actual = std::visit(
        [](const auto& g) {
          if constexpr (std::is_same_v<std::decay_t<decltype(g)>, SquareEigenfunction>)
            return g.m();
          else
            return g.n();
        },
        f);
    if (declared != actual)
      fail(ErrorCode::MixedEigenvalue, "n_or_m = " + std::to_string(declared) +
                                           " but the terms satisfy a^2+b^2 = " +
                                           std::to_string(actual));
  }
  if (normalize) std::visit([](auto& g) { g = g.normalized(); }, f);
  return f;
}

Eigenfunction parse_eigenfunction(const std::string& text, bool normalize) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return parse_eigenfunction(j, normalize);
}

Json eigenfunction_json(const Eigenfunction& f) {
  Json j;
  Json terms = Json::array();
  if (const auto* s = std::get_if<SquareEigenfunction>(&f)) {
    j["domain"] = "square";
    j["n_or_m"] = s->m();
    for (const auto& t : s->terms()) terms.push_back({t.a, t.b, t.coefficient, 0.0});
  } else {
    const auto& t = std::get<TorusEigenfunction>(f);
    j["domain"] = "torus";
    j["n_or_m"] = t.n();
    for (const auto& term : t.terms())
      terms.push_back({term.a, term.b, term.coefficient.real(), term.coefficient.imag()});
  }
  j["lambda"] = lambda_of(f);
  j["terms"] = std::move(terms);
  return j;
}

Json singular_points_json(const std::vector<nodal::SingularPoint>& points) {
  Json out = Json::array();
  for (const auto& p : points) {
    Json j;
    j["x"] = p.x;
    j["y"] = p.y;
    j["order"] = p.order;
    j["residual"] = p.residual;
    j["radius"] = p.radius;
    out.push_back(std::move(j));
  }
  return out;
}

Json census_json(const nodal::NodalCensus& c, const std::vector<nodal::SingularPoint>& points) {
  Json j;
  j["N"] = c.N;
  j["C"] = c.C;
  j["N_s"] = c.N_s ? Json(*c.N_s) : Json(nullptr);
  j["N_c"] = c.N_c ? Json(*c.N_c) : Json(nullptr);
  j["boundary_endpoints"] = c.boundary_endpoints ? Json(*c.boundary_endpoints) : Json(nullptr);
  j["refined_cells"] = c.refined_cells;
  j["singular_points"] = singular_points_json(points);
  return j;
}

Json index_json(const SpectralIndex& index) {
  Json j;
  j["lambda"] = index.lambda;
  j["j_min"] = index.j_min;
  j["j_max"] = index.j_max;
  j["weyl_estimate"] = index.weyl_estimate;
  return j;
}

Json bound_json(const meshbound::BoundReport& r) {
  Json j;
  j["lambda"] = r.lambda;
  j["bound_value"] = r.bound_value;
  j["measured_N"] = r.measured_N;
  j["measured_C"] = r.measured_C;
  j["satisfied"] = r.satisfied;
  j["all_checks_hold"] = r.all_checks_hold();
  j["advisory"] = r.advisory;
  j["singular_points"] = r.singular_points;
  j["resolution"] = r.resolution;
  j["per_line_sign_changes"] = r.per_line_sign_changes;
  j["intersections_per_component"] = r.intersections_per_component;
  j["every_component_twice"] = r.every_component_twice;
  if (r.square) {
    const auto& d = *r.square;
    Json s;
    s["tau"] = d.tau;
    s["delta"] = d.delta;
    s["retries"] = d.retries;
    s["lines"] = d.lines;
    s["line_limit"] = d.line_limit;
    s["line_limit_ok"] = d.line_limit_ok;
    s["boundary_endpoints"] = d.boundary_endpoints;
    s["endpoint_limit"] = d.endpoint_limit;
    s["endpoints_ok"] = d.endpoints_ok;
    s["N_s"] = d.N_s ? Json(*d.N_s) : Json(nullptr);
    s["N_c"] = d.N_c ? Json(*d.N_c) : Json(nullptr);
    s["finite_tau_bound"] = d.finite_tau_bound;
    s["limit_bound"] = d.limit_bound;
    j["square"] = std::move(s);
  }
  if (r.torus) {
    const auto& d = *r.torus;
    Json t;
    t["p"] = d.p;
    t["q"] = d.q;
    t["theta"] = d.theta;
    t["epsilon"] = d.epsilon;
    t["tau"] = d.tau;
    t["offset"] = d.offset;
    t["retries"] = d.retries;
    t["shifts"] = d.shifts;
    t["includes_E"] = d.includes_E;
    t["projection_limit"] = d.projection_limit;
    t["max_frequency"] = d.max_frequency;
    t["per_geodesic"] = d.per_geodesic;
    t["per_E"] = d.per_E;
    t["geodesic_limit_ok"] = d.geodesic_limit_ok;
    t["E_limit_ok"] = d.E_limit_ok;
    t["total_intersections"] = d.total_intersections;
    t["component_count_ok"] = d.component_count_ok;
    t["leading_term"] = d.leading_term;
    t["chain_bound"] = d.chain_bound;
    t["chain_bound_plus_one"] = d.chain_bound_plus_one;
    t["below_circle"] = d.below_circle;
    j["torus"] = std::move(t);
  }
  return j;
}

Json graph_json(const nodalgraph::NodalGraphReport& r) {
  Json g;
  g["v"] = r.graph.v;
  g["e"] = r.graph.e;
  g["f"] = r.graph.f;
  g["c"] = r.graph.c;
  g["genus"] = r.graph.genus;
  g["degrees"] = r.graph.degrees ? Json(*r.graph.degrees) : Json(nullptr);
  Json j;
  j["graph"] = std::move(g);
  j["N"] = r.N;
  j["C"] = r.C;
  j["order_sum"] = r.order_sum;
  j["defect"] = r.defect;
  j["in_range"] = r.in_range;
  j["N_minus_C_minus_order_sum"] = r.N - r.C - r.order_sum;
  j["resolution"] = r.resolution;
  j["vertices"] = singular_points_json(r.vertices);
  return j;
}

Json budget_json(const nodalgraph::SingularBudget& b) {
  Json j;
  j["order_sum"] = b.order_sum;
  j["courant_cap"] = b.courant_cap;
  j["within"] = b.order_sum <= b.courant_cap;
  return j;
}

Json circle_json(const lattice::LatticeCircle& circle, const std::vector<double>& thetas) {
  Json j;
  j["n"] = circle.n;
  j["count"] = circle.solutions.size();
  Json sol = Json::array();
  for (const auto& s : circle.solutions) sol.push_back({s.a, s.b});
  j["solutions"] = std::move(sol);
  j["empty_circle"] = circle.solutions.empty();
  j["max_gap_rad"] = circle.solutions.empty()
                         ? Json(nullptr)
                         : Json(*std::max_element(circle.gaps.begin(), circle.gaps.end()));
  Json membership = Json::object();
  for (double theta : thetas)
    membership[format_number(theta)] = lattice::sector_membership(circle, theta).member;
  j["membership"] = std::move(membership);
  return j;
}

}  // namespace nodal_atlas::report
