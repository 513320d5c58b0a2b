// nodal-atlas: command-line front end.  Every subcommand writes JSON (or CSV)
// to stdout or --output; exit status 0 = all checks hold, 1 = an asserted
// inequality or invariant failed, 2 = invalid input.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/lattice.hpp"
#include "nodal_atlas/meshbound.hpp"
#include "nodal_atlas/nodal.hpp"
#include "nodal_atlas/nodalgraph.hpp"
#include "nodal_atlas/report.hpp"
#include "nodal_atlas/spectra.hpp"
#include "nodal_atlas/topology.hpp"

namespace na = nodal_atlas;
using na::report::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;

bool is_input_error(na::ErrorCode code) {
  switch (code) {
    case na::ErrorCode::InvalidInput:
    case na::ErrorCode::PreconditionViolation:
    case na::ErrorCode::MixedEigenvalue:
    case na::ErrorCode::EmptySpectrum:
    case na::ErrorCode::InvalidPair:
    case na::ErrorCode::NotAnEigenvalue:
    case na::ErrorCode::EmptyCircle:
    case na::ErrorCode::ResolutionTooCoarse:
      return true;
    default:
      return false;
  }
}

Json error_json(const na::AtlasError& e) {
  Json j;
  j["code"] = na::to_string(e.code());
  j["message"] = e.what();
  return j;
}

struct Common {
  std::string output;
  std::string format = "json";
  double tol_singular = 1e-9;
  std::uint64_t seed = 20240601;
};

void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) na::fail(na::ErrorCode::InvalidInput, "cannot write " + c.output);
  out << text;
}

std::string read_input(const std::string& input) {
  if (!input.empty() && (input.front() == '{' || input.front() == '[')) return input;
  if (input == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(input, std::ios::binary);
  if (!in) na::fail(na::ErrorCode::InvalidInput, "cannot read input " + input);
  return {std::istreambuf_iterator<char>(in), {}};
}

// A single eigenfunction object or an array of them.
std::vector<na::Eigenfunction> parse_inputs(const std::string& input, bool normalize,
                                            bool& batch) {
  const std::string text = read_input(input);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    na::fail(na::ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  std::vector<na::Eigenfunction> out;
  batch = j.is_array();
  if (batch) {
    for (const auto& item : j) out.push_back(na::report::parse_eigenfunction(item, normalize));
    if (out.empty()) na::fail(na::ErrorCode::InvalidInput, "empty input array");
  } else {
    out.push_back(na::report::parse_eigenfunction(j, normalize));
  }
  return out;
}

Json with_schema() {
  Json j;
  j["schema"] = na::report::kSchema;
  return j;
}

void write_signmap(const na::nodal::GridField& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) na::fail(na::ErrorCode::InvalidInput, "cannot write " + path);
  const int n = grid.resolution;
  out << "P5\n" << n << " " << n << "\n255\n";
  // Rows run from y = 1 at the top to y = 0 at the bottom.
  for (int j = n - 1; j >= 0; --j)
    for (int i = 0; i < n; ++i) {
      const int s = grid.sign_at(i, j);
      out.put(static_cast<char>(s > 0 ? 255 : (s < 0 ? 0 : 128)));
    }
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  int resolution = 0;
  int resolution_scale = 1;
  double delta = na::meshbound::kDefaultDelta;
  double theta = na::kPi / 9.0;
  double epsilon = na::kPi / 18.0;
  bool bound = true;
  bool graph = true;
  bool normalize = false;
  std::string signmap;
};

Json analyze_one(const na::Eigenfunction& f, const AnalyzeOptions& o, const Common& c, bool& ok) {
  na::nodal::SamplingOptions sampling;
  sampling.singular.tolerance = c.tol_singular;
  sampling.allow_coarse = o.resolution > 0;
  const int res = o.resolution > 0 ? o.resolution
                                   : na::nodal::default_resolution(f) * o.resolution_scale;
  const auto grid = na::nodal::sample_grid(f, res, sampling);
  const auto census = na::nodal::take_census(grid);
  const auto index = na::spectral_index(na::lambda_of(f), na::domain_of(f));
  if (!o.signmap.empty()) write_signmap(grid, o.signmap);

  Json r = with_schema();
  r["input"] = na::report::eigenfunction_json(f);
  r["resolution"] = res;
  r["census"] = na::report::census_json(census, grid.singular_points);
  r["index"] = na::report::index_json(index);

  Json ratios;
  ratios["N_over_j_min"] = static_cast<double>(census.N) / index.j_min;
  ratios["N_over_j_max"] = static_cast<double>(census.N) / index.j_max;
  ratios["polterovich"] = na::kPolterovichConstant;
  ratios["pleijel"] = na::kPleijelConstant;
  r["ratios"] = std::move(ratios);

  Json checks;
  const bool courant = census.N <= index.j_max;
  checks["courant"] = courant;
  ok = ok && courant;

  if (na::domain_of(f) == na::Domain::Square) {
    Json identity;
    identity["singular_free"] = census.singular_points == 0;
    if (census.N_s && census.N_c) {
      identity["N_s_plus_N_c_plus_1"] = *census.N_s + *census.N_c + 1;
      identity["holds"] = census.N == *census.N_s + *census.N_c + 1;
    } else {
      identity["N_s_plus_N_c_plus_1"] = nullptr;
      identity["holds"] = nullptr;
    }
    r["identity"] = std::move(identity);
  }

  if (o.bound) {
    na::meshbound::VerifyOptions vo;
    vo.delta = o.delta;
    vo.resolution = res;
    vo.singular.tolerance = c.tol_singular;
    try {
      const auto b = std::holds_alternative<na::SquareEigenfunction>(f)
                         ? na::meshbound::verify_square_counting(std::get<na::SquareEigenfunction>(f), vo)
                         : na::meshbound::verify_torus_counting(std::get<na::TorusEigenfunction>(f),
                                                                o.theta, o.epsilon, vo);
      r["bound"] = na::report::bound_json(b);
      checks["bound"] = b.all_checks_hold();
      ok = ok && b.all_checks_hold();
    } catch (const na::AtlasError& e) {
      if (e.code() == na::ErrorCode::NotInSectorClass || e.code() == na::ErrorCode::NoValidDirection) {
        Json skipped;
        skipped["skipped"] = error_json(e);
        r["bound"] = std::move(skipped);
        checks["bound"] = nullptr;
      } else {
        Json failed;
        failed["error"] = error_json(e);
        r["bound"] = std::move(failed);
        checks["bound"] = false;
        ok = false;
      }
    }
  }

  if (o.graph && std::holds_alternative<na::TorusEigenfunction>(f)) {
    na::nodalgraph::GraphOptions go;
    go.singular.tolerance = c.tol_singular;
    try {
      const auto g = na::nodalgraph::build_nodal_graph(std::get<na::TorusEigenfunction>(f), go);
      Json gj = na::report::graph_json(g);
      gj["budget"] = na::report::budget_json(na::nodalgraph::singular_budget(g, na::lambda_of(f)));
      r["graph"] = std::move(gj);
      checks["graph"] = true;
    } catch (const na::AtlasError& e) {
      Json failed;
      failed["error"] = error_json(e);
      r["graph"] = std::move(failed);
      checks["graph"] = false;
      ok = false;
    }
  }
  r["checks"] = std::move(checks);
  return r;
}

int run_analyze(const std::string& input, const AnalyzeOptions& o, const Common& c) {
  bool batch = false;
  const auto fs = parse_inputs(input, o.normalize, batch);
  if (batch && !o.signmap.empty())
    na::fail(na::ErrorCode::InvalidInput, "--emit-signmap needs a single eigenfunction");
  bool ok = true;
  Json out;
  if (batch) {
    out = with_schema();
    out["reports"] = Json::array();
    for (const auto& f : fs) {
      Json r = analyze_one(f, o, c, ok);
      r.erase("schema");
      out["reports"].push_back(std::move(r));
    }
  } else {
    out = analyze_one(fs.front(), o, c, ok);
  }
  emit(c, na::report::dump(std::move(out)));
  return ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------ ratio-table

struct TableOptions {
  std::string family = "diagonal";
  int k_min = 1;
  int k_max = 10;
  int a = 1;
  int b = 2;
  int t_count = 21;
  double t_min = -1.0;
  double t_max = 1.0;
  double max_lambda_units = 800.0;  // in pi^2
  double theta = na::kPi / 9.0;
  double epsilon = na::kPi / 18.0;
};

struct Row {
  std::string param;
  double lambda = 0.0;
  long j_min = 0, j_max = 0;
  int N = 0, C = 0;
  std::optional<int> N_s, N_c;
  int singular = 0;
  double bound = NAN;
  std::optional<bool> identity;
};

// Least-squares slope of log(y) against log(x).
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_ratio_table(const TableOptions& o, const Common& c) {
  const auto fam = o.family;
  if (fam != "diagonal" && fam != "deformation" && fam != "torus-plane")
    na::fail(na::ErrorCode::InvalidInput, "family must be diagonal, deformation or torus-plane");
  std::vector<std::pair<std::string, na::Eigenfunction>> members;
  if (fam == "deformation") {
    if (o.t_count < 1) na::fail(na::ErrorCode::InvalidInput, "--t-count must be >= 1");
    for (int i = 0; i < o.t_count; ++i) {
      const double t = o.t_count == 1 ? o.t_min
                                      : o.t_min + (o.t_max - o.t_min) * i / (o.t_count - 1);
      members.emplace_back(na::report::format_number(t), na::deformation_family(o.a, o.b, t));
    }
  } else {
    if (o.k_min < 1 || o.k_max < o.k_min) na::fail(na::ErrorCode::InvalidInput, "invalid k range");
    for (int k = o.k_min; k <= o.k_max; ++k) {
      if (fam == "diagonal")
        members.emplace_back(std::to_string(k), na::SquareEigenfunction::make({{k, k, 1.0}}));
      else
        members.emplace_back(std::to_string(k), na::TorusEigenfunction::plane_wave(k * o.a, k * o.b));
    }
  }
  for (const auto& [p, f] : members)
    if (na::lambda_of(f) > o.max_lambda_units * na::kPi * na::kPi * (1.0 + 1e-12))
      na::fail(na::ErrorCode::InvalidInput, "member " + p + " exceeds the eigenvalue limit");

  bool ok = true;
  std::vector<Row> rows;
  for (const auto& [param, f] : members) {
    const auto grid = na::nodal::sample_grid(f, na::nodal::default_resolution(f));
    const auto census = na::nodal::take_census(grid);
    const auto index = na::spectral_index(na::lambda_of(f), na::domain_of(f));
    Row r;
    r.param = param;
    r.lambda = na::lambda_of(f);
    r.j_min = index.j_min;
    r.j_max = index.j_max;
    r.N = census.N;
    r.C = census.C;
    r.N_s = census.N_s;
    r.N_c = census.N_c;
    r.singular = census.singular_points;
    if (na::domain_of(f) == na::Domain::Square) {
      r.bound = na::meshbound::square_bound(r.lambda);
      if (census.singular_points == 0 && census.N_s && census.N_c)
        r.identity = census.N == *census.N_s + *census.N_c + 1;
    } else {
      try {
        const auto b = na::meshbound::verify_torus_counting(std::get<na::TorusEigenfunction>(f),
                                                            o.theta, o.epsilon);
        r.bound = b.bound_value;
      } catch (const na::AtlasError& e) {
        if (e.code() != na::ErrorCode::NotInSectorClass) throw;
      }
    }
    if (r.N > r.j_max) ok = false;
    if (r.identity && !*r.identity) ok = false;
    rows.push_back(std::move(r));
  }

  if (c.format == "csv") {
    std::ostringstream out;
    out << "family,param,lambda,j_min,j_max,N,C,N_s,N_c,singular_points,N_over_j_max,bound,"
           "polterovich,identity\n";
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& r : rows) {
      out << fam << ',' << r.param << ',' << na::report::format_number(r.lambda) << ','
          << r.j_min << ',' << r.j_max << ',' << r.N << ',' << r.C << ',' << opt(r.N_s) << ','
          << opt(r.N_c) << ',' << r.singular << ','
          << na::report::format_number(static_cast<double>(r.N) / r.j_max) << ','
          << (std::isnan(r.bound) ? std::string() : na::report::format_number(r.bound)) << ','
          << na::report::format_number(na::kPolterovichConstant) << ','
          << (r.identity ? (*r.identity ? "true" : "false") : "") << '\n';
    }
    emit(c, out.str());
    return ok ? kExitOk : kExitCheckFailed;
  }

  Json out = with_schema();
  out["family"] = fam;
  out["rows"] = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["param"] = r.param;
    j["lambda"] = r.lambda;
    j["j_min"] = r.j_min;
    j["j_max"] = r.j_max;
    j["N"] = r.N;
    j["C"] = r.C;
    j["N_s"] = r.N_s ? Json(*r.N_s) : Json(nullptr);
    j["N_c"] = r.N_c ? Json(*r.N_c) : Json(nullptr);
    j["singular_points"] = r.singular;
    j["N_over_j_max"] = static_cast<double>(r.N) / r.j_max;
    j["bound"] = std::isnan(r.bound) ? Json(nullptr) : Json(r.bound);
    j["polterovich"] = na::kPolterovichConstant;
    j["identity"] = r.identity ? Json(*r.identity) : Json(nullptr);
    out["rows"].push_back(std::move(j));
  }
  if (fam == "diagonal") {
    // Trend against 2/pi: monotonicity from k = 3 on, the gap at the last k,
    // and the power-law exponent of the gap over k >= 7.
    Json trend;
    bool monotone = true;
    std::vector<double> ks, gaps;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const int k = o.k_min + static_cast<int>(i);
      const double ratio = static_cast<double>(rows[i].N) / rows[i].j_max;
      if (i > 0 && k > 3) {
        const double prev = static_cast<double>(rows[i - 1].N) / rows[i - 1].j_max;
        if (ratio < prev) monotone = false;
      }
      if (k >= 7) {
        ks.push_back(k);
        gaps.push_back(std::abs(ratio - na::kPolterovichConstant));
      }
    }
    const double last = static_cast<double>(rows.back().N) / rows.back().j_max;
    trend["monotone_nondecreasing_from_k3"] = monotone;
    trend["last_k"] = o.k_max;
    trend["gap_to_polterovich_at_last_k"] = std::abs(last - na::kPolterovichConstant);
    trend["gap_fit_exponent_k7_onward"] = ks.size() >= 2 ? Json(log_slope(ks, gaps)) : Json(nullptr);
    out["trend"] = std::move(trend);
  }
  emit(c, na::report::dump(std::move(out)));
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- lattice

struct LatticeOptions {
  std::vector<long> ns;
  long n_min = 0;
  long n_max = 0;
  std::vector<double> thetas;
  double direction_theta = 0.0;
  double epsilon = na::kPi / 18.0;
};

int run_lattice(const LatticeOptions& o, const Common& c) {
  std::vector<long> ns = o.ns;
  if (o.n_max > 0) {
    if (o.n_min < 1 || o.n_max < o.n_min) na::fail(na::ErrorCode::InvalidInput, "invalid n range");
    for (long n = o.n_min; n <= o.n_max; ++n) ns.push_back(n);
  }
  if (ns.empty()) na::fail(na::ErrorCode::InvalidInput, "give --n or --n-min/--n-max");
  std::vector<double> thetas = o.thetas;
  if (thetas.empty()) thetas.push_back(2.0 * na::kPi / 9.0);

  std::optional<na::lattice::DirectionNet> net;
  if (o.direction_theta > 0.0) net = na::lattice::direction_net(o.epsilon);

  Json out = with_schema();
  out["circles"] = Json::array();
  for (long n : ns) {
    const auto circle = na::lattice::sum_two_squares(n);
    Json j = na::report::circle_json(circle, thetas);
    j["count_by_factorization"] = na::lattice::count_two_squares(n);
    if (net) {
      Json d;
      d["theta"] = o.direction_theta;
      d["epsilon"] = o.epsilon;
      try {
        const auto dir = na::lattice::best_direction(circle, o.direction_theta, o.epsilon, *net);
        d["p"] = dir.p;
        d["q"] = dir.q;
        d["max_projection"] = dir.max_projection;
        d["ceiling"] = dir.ceiling;
        d["verified"] = na::lattice::projection_inequality_holds(circle, dir.p, dir.q,
                                                                 o.direction_theta, o.epsilon);
        d["below_circle"] = dir.below_circle;
      } catch (const na::AtlasError& e) {
        d["error"] = error_json(e);
      }
      j["direction"] = std::move(d);
    }
    out["circles"].push_back(std::move(j));
  }
  emit(c, na::report::dump(std::move(out)));
  return kExitOk;
}

// ------------------------------------------------------------ mesh-verify

struct MeshOptions {
  std::string input;
  int resolution = 0;
  double delta = na::meshbound::kDefaultDelta;
  double theta = na::kPi / 9.0;
  double epsilon = na::kPi / 18.0;
  int sweep_m = 0;
  int count = 200;
};

// Random eigenfunctions in every square eigenspace m <= m_max; every mesh
// line restriction must have at most floor(sqrt(m)) sign changes.
int run_sweep(const MeshOptions& o, const Common& c) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> gauss;
  Json spaces = Json::array();
  long restrictions = 0, violations = 0, degenerate = 0;
  for (int m = 2; m <= o.sweep_m; ++m) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 1; a * a < m; ++a) {
      const int b = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m - a * a))));
      if (b >= 1 && a * a + b * b == m) pairs.emplace_back(a, b);
    }
    if (pairs.empty()) continue;
    const double lambda = na::kPi * na::kPi * m;
    const auto mesh = na::meshbound::build_square_mesh(lambda, o.delta);
    const int limit = static_cast<int>(std::floor(std::sqrt(static_cast<double>(m)) + 1e-12));
    int worst = 0;
    long local_violations = 0;
    for (int trial = 0; trial < o.count; ++trial) {
      std::vector<na::SquareTerm> terms;
      for (const auto& [a, b] : pairs) terms.push_back({a, b, gauss(rng)});
      const auto f = na::SquareEigenfunction::make(terms);
      for (double x : mesh.lines) {
        try {
          const int k = na::meshbound::sign_changes_on_line(f, x);
          ++restrictions;
          worst = std::max(worst, k);
          if (k > limit) ++local_violations;
        } catch (const na::AtlasError& e) {
          if (e.code() != na::ErrorCode::DegenerateRestriction) throw;
          ++degenerate;
        }
      }
    }
    violations += local_violations;
    Json s;
    s["m"] = m;
    s["pairs"] = pairs.size();
    s["lines"] = mesh.lines.size();
    s["limit"] = limit;
    s["max_sign_changes"] = worst;
    s["violations"] = local_violations;
    spaces.push_back(std::move(s));
  }
  Json out = with_schema();
  Json sweep;
  sweep["m_max"] = o.sweep_m;
  sweep["count"] = o.count;
  sweep["seed"] = c.seed;
  sweep["delta"] = o.delta;
  sweep["eigenspaces"] = spaces.size();
  sweep["restrictions"] = restrictions;
  sweep["degenerate"] = degenerate;
  sweep["violations"] = violations;
  sweep["per_eigenspace"] = std::move(spaces);
  out["sweep"] = std::move(sweep);
  emit(c, na::report::dump(std::move(out)));
  return violations == 0 ? kExitOk : kExitCheckFailed;
}

int run_mesh_verify(const MeshOptions& o, const Common& c) {
  if (o.sweep_m > 0) return run_sweep(o, c);
  if (o.input.empty()) na::fail(na::ErrorCode::InvalidInput, "give an input or --sweep");
  bool batch = false;
  const auto fs = parse_inputs(o.input, false, batch);
  na::meshbound::VerifyOptions vo;
  vo.delta = o.delta;
  vo.resolution = o.resolution;
  vo.singular.tolerance = c.tol_singular;
  bool ok = true;
  Json reports = Json::array();
  for (const auto& f : fs) {
    Json r;
    r["input"] = na::report::eigenfunction_json(f);
    try {
      const auto b = std::holds_alternative<na::SquareEigenfunction>(f)
                         ? na::meshbound::verify_square_counting(std::get<na::SquareEigenfunction>(f), vo)
                         : na::meshbound::verify_torus_counting(std::get<na::TorusEigenfunction>(f),
                                                                o.theta, o.epsilon, vo);
      r["bound"] = na::report::bound_json(b);
      ok = ok && b.all_checks_hold();
    } catch (const na::AtlasError& e) {
      if (is_input_error(e.code()) || !batch) throw;
      r["error"] = error_json(e);
      ok = false;
    }
    reports.push_back(std::move(r));
  }
  Json out = with_schema();
  if (batch) {
    out["reports"] = std::move(reports);
  } else {
    for (auto& [key, value] : reports.front().items()) out[key] = value;
  }
  emit(c, na::report::dump(std::move(out)));
  return ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------ graph-check

struct GraphCheckOptions {
  std::string input;
  int random_trials = 0;
  int max_genus = 3;
  std::vector<long> counts;
  int resolution = 0;
};

int run_graph_check(const GraphCheckOptions& o, const Common& c) {
  if (!o.counts.empty()) {
    if (o.counts.size() != 5)
      na::fail(na::ErrorCode::InvalidInput, "--counts takes v,e,f,c,genus");
    na::nodalgraph::EmbeddedGraph g;
    g.v = o.counts[0];
    g.e = o.counts[1];
    g.f = o.counts[2];
    g.c = o.counts[3];
    g.genus = static_cast<int>(o.counts[4]);
    const auto d = na::nodalgraph::euler_defect(g);
    Json out = with_schema();
    out["graph"] = {{"v", g.v}, {"e", g.e}, {"f", g.f}, {"c", g.c}, {"genus", g.genus}};
    out["defect"] = d.defect;
    out["in_range"] = d.in_range;
    emit(c, na::report::dump(std::move(out)));
    return d.in_range ? kExitOk : kExitCheckFailed;
  }

  if (o.random_trials > 0) {
    if (o.max_genus < 0 || o.max_genus > 16)
      na::fail(na::ErrorCode::InvalidInput, "--max-genus must lie in [0, 16]");
    std::vector<na::nodalgraph::QuadSurface> surfaces;
    for (int g = 0; g <= o.max_genus; ++g) surfaces.push_back(na::nodalgraph::genus_surface(g));
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> pick_genus(0, o.max_genus);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<long> trials(o.max_genus + 1, 0);
    std::vector<long> lo(o.max_genus + 1, 1), hi(o.max_genus + 1, 1 - 2L * o.max_genus);
    long failures = 0;
    for (int t = 0; t < o.random_trials; ++t) {
      const int g = pick_genus(rng);
      const double pe = unit(rng), pv = 0.3 * unit(rng);
      const auto graph = na::nodalgraph::random_subgraph(surfaces[g], pe, pv, rng);
      const auto d = na::nodalgraph::euler_defect(graph);
      ++trials[g];
      lo[g] = std::min(lo[g], d.defect);
      hi[g] = std::max(hi[g], d.defect);
      if (!d.in_range) ++failures;
    }
    Json out = with_schema();
    Json suite;
    suite["trials"] = o.random_trials;
    suite["max_genus"] = o.max_genus;
    suite["seed"] = c.seed;
    suite["failures"] = failures;
    Json per = Json::array();
    for (int g = 0; g <= o.max_genus; ++g) {
      Json j;
      j["genus"] = g;
      j["surface_vertices"] = surfaces[g].vertex_count;
      j["surface_edges"] = surfaces[g].edges.size();
      j["surface_faces"] = surfaces[g].quads.size();
      j["trials"] = trials[g];
      j["min_defect"] = trials[g] ? Json(lo[g]) : Json(nullptr);
      j["max_defect"] = trials[g] ? Json(hi[g]) : Json(nullptr);
      j["allowed"] = {1 - 2 * g, 1};
      per.push_back(std::move(j));
    }
    suite["per_genus"] = std::move(per);
    out["random_suite"] = std::move(suite);
    emit(c, na::report::dump(std::move(out)));
    return failures == 0 ? kExitOk : kExitCheckFailed;
  }

  if (o.input.empty()) na::fail(na::ErrorCode::InvalidInput, "give an input, --random or --counts");
  bool batch = false;
  const auto fs = parse_inputs(o.input, false, batch);
  na::nodalgraph::GraphOptions go;
  go.resolution = o.resolution;
  go.singular.tolerance = c.tol_singular;
  bool ok = true;
  Json reports = Json::array();
  for (const auto& f : fs) {
    const auto* t = std::get_if<na::TorusEigenfunction>(&f);
    if (!t) na::fail(na::ErrorCode::InvalidInput, "graph-check needs torus eigenfunctions");
    Json r;
    r["input"] = na::report::eigenfunction_json(f);
    try {
      const auto g = na::nodalgraph::build_nodal_graph(*t, go);
      r["report"] = na::report::graph_json(g);
      r["budget"] = na::report::budget_json(na::nodalgraph::singular_budget(g, t->lambda()));
    } catch (const na::AtlasError& e) {
      if (is_input_error(e.code())) throw;
      r["error"] = error_json(e);
      ok = false;
    }
    reports.push_back(std::move(r));
  }
  Json out = with_schema();
  if (batch) {
    out["reports"] = std::move(reports);
  } else {
    for (auto& [key, value] : reports.front().items()) out[key] = value;
  }
  emit(c, na::report::dump(std::move(out)));
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nodal domains, nodal-set components and mesh bounds for Laplacian "
               "eigenfunctions on the unit square and the flat torus."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", common.output, "Write the report here instead of stdout");
    sub->add_option("--format", common.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol-singular", common.tol_singular,
                    "Singular-point acceptance, relative to the amplitude");
    sub->add_option("--seed", common.seed, "Seed for randomized suites");
  };

  std::string analyze_input;
  AnalyzeOptions ao;
  bool no_bound = false, no_graph = false;
  auto* analyze = app.add_subcommand("analyze", "Census, spectral index, bounds and nodal graph");
  analyze->add_option("input", analyze_input, "Eigenfunction JSON: a file, - for stdin, or a literal")
      ->required();
  analyze->add_option("--resolution", ao.resolution, "Grid samples per side (bypasses the floor)");
  analyze->add_option("--resolution-scale", ao.resolution_scale, "Multiple of the default resolution")
      ->check(CLI::Range(1, 8));
  analyze->add_option("--delta", ao.delta, "Mesh offset tau = lambda (1 + delta)");
  analyze->add_option("--theta", ao.theta, "Torus sector half-width");
  analyze->add_option("--epsilon", ao.epsilon, "Direction-net resolution");
  analyze->add_flag("--no-bound", no_bound, "Skip mesh verification");
  analyze->add_flag("--no-graph", no_graph, "Skip the torus nodal graph");
  analyze->add_flag("--normalize", ao.normalize, "Rescale to unit L2 norm first");
  analyze->add_option("--emit-signmap", ao.signmap, "Write the sign field as a PGM image");
  add_common(analyze);

  TableOptions to;
  auto* table = app.add_subcommand("ratio-table", "N / j tables for a family of eigenfunctions");
  table->add_option("--family", to.family, "diagonal, deformation or torus-plane");
  table->add_option("--k-min", to.k_min);
  table->add_option("--k-max", to.k_max);
  table->add_option("--a", to.a);
  table->add_option("--b", to.b);
  table->add_option("--t-count", to.t_count);
  table->add_option("--t-min", to.t_min);
  table->add_option("--t-max", to.t_max);
  table->add_option("--max-lambda", to.max_lambda_units, "Eigenvalue limit in units of pi^2");
  table->add_option("--theta", to.theta);
  table->add_option("--epsilon", to.epsilon);
  add_common(table);

  LatticeOptions lo;
  auto* lat = app.add_subcommand("lattice", "Solutions of a^2 + b^2 = n and sector membership");
  lat->add_option("--n", lo.ns, "Values of n")->delimiter(',');
  lat->add_option("--n-min", lo.n_min);
  lat->add_option("--n-max", lo.n_max);
  lat->add_option("--theta", lo.thetas, "Sector widths to test")->delimiter(',');
  lat->add_option("--direction-theta", lo.direction_theta,
                  "Also pick the best net direction for this theta");
  lat->add_option("--epsilon", lo.epsilon);
  add_common(lat);

  MeshOptions mo;
  auto* mesh = app.add_subcommand("mesh-verify", "Mesh-intersection counting and the bounds");
  mesh->add_option("input", mo.input, "Eigenfunction JSON: a file, - for stdin, or a literal");
  mesh->add_option("--resolution", mo.resolution);
  mesh->add_option("--delta", mo.delta);
  mesh->add_option("--theta", mo.theta);
  mesh->add_option("--epsilon", mo.epsilon);
  mesh->add_option("--sweep", mo.sweep_m, "Random sweep over square eigenspaces m <= value");
  mesh->add_option("--count", mo.count, "Random eigenfunctions per eigenspace in a sweep");
  add_common(mesh);

  GraphCheckOptions go;
  std::string counts;
  auto* graph = app.add_subcommand("graph-check", "Nodal graph report or embedded-graph suites");
  graph->add_option("input", go.input, "Torus eigenfunction JSON");
  graph->add_option("--random", go.random_trials, "Random embedded graphs to test");
  graph->add_option("--max-genus", go.max_genus);
  graph->add_option("--counts", go.counts, "v,e,f,c,genus")->delimiter(',');
  graph->add_option("--resolution", go.resolution);
  add_common(graph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*analyze) {
      ao.bound = !no_bound;
      ao.graph = !no_graph;
      return run_analyze(analyze_input, ao, common);
    }
    if (*table) return run_ratio_table(to, common);
    if (*lat) return run_lattice(lo, common);
    if (*mesh) return run_mesh_verify(mo, common);
    if (*graph) return run_graph_check(go, common);
  } catch (const na::AtlasError& e) {
    Json err = with_schema();
    err["error"] = error_json(e);
    std::cerr << na::report::dump(std::move(err));
    return is_input_error(e.code()) ? kExitInvalid : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
