// End-to-end acceptance run.  Drives the nodal-atlas executable, checks each
// criterion against independent expectations and prints one PASS/FAIL line
// per criterion followed by the measured numbers.  Exit status is the number
// of failed criteria (capped at 1).
#include <sys/wait.h>

#include <Eigen/Dense>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodal_atlas/meshbound.hpp"
#include "nodal_atlas/spectra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = nodal_atlas::kPi;

struct Run {
  int status = -1;
  json out;
  double seconds = 0.0;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(NODAL_ATLAS_CLI) + " " + args;
  const auto t0 = std::chrono::steady_clock::now();
  FILE* p = popen(cmd.c_str(), "r");
  std::string text;
  if (p) {
    std::array<char, 1 << 16> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) text.append(buf.data(), n);
  }
  const int raw = p ? pclose(p) : -1;
  Run r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.status = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  try {
    r.out = json::parse(text);
  } catch (const json::exception&) {
    r.out = json();
  }
  return r;
}

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / "nodal_atlas_acceptance";
  fs::create_directories(d);
  return d;
}

std::string write_batch(const std::string& name, const json& items) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << items.dump();
  return path.string();
}

json square(std::vector<std::array<double, 3>> terms) {
  json t = json::array();
  for (auto& [a, b, c] : terms) t.push_back({static_cast<int>(a), static_cast<int>(b), c});
  return {{"domain", "square"}, {"terms", t}};
}

json torus_plane(int a, int b) {
  return {{"domain", "torus"}, {"terms", {{a, b, 0.5, 0.0}, {-a, -b, 0.5, 0.0}}}};
}

json torus_sine_product(int a, int b) {
  return {{"domain", "torus"},
          {"terms",
           {{a, b, -0.25, 0.0}, {-a, -b, -0.25, 0.0}, {a, -b, 0.25, 0.0}, {-a, b, 0.25, 0.0}}}};
}

struct Verdict {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> notes;
};

std::vector<Verdict> verdicts;

Verdict& open(int id, const std::string& title) {
  verdicts.push_back({id, title, false, {}});
  return verdicts.back();
}

template <class... T>
std::string str(const T&... parts) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << parts);
  return os.str();
}

// ---- independent oracles

// Nodal counts of sin(a pi x) sin(b pi y): a b rectangles; a - 1 vertical and
// b - 1 horizontal lines, each a boundary-to-boundary segment.
struct ProductTruth {
  int N, N_s, N_c;
};
ProductTruth product_truth(int a, int b) { return {a * b, a + b - 2, 0}; }

// Positive pairs on a^2 + b^2 = m.
std::vector<std::pair<int, int>> square_pairs(int m) {
  std::vector<std::pair<int, int>> out;
  for (int a = 1; a * a < m; ++a)
    for (int b = 1; a * a + b * b <= m; ++b)
      if (a * a + b * b == m) out.emplace_back(a, b);
  return out;
}

// Real roots in (-1, 1) of P(u) = sum_b beta_b U_{b-1}(u) from the companion
// matrix; these are the sign changes of y -> phi(x0, y) on (0, 1).
int companion_sign_changes(const nodal_atlas::SquareEigenfunction& f, double x0) {
  const int bmax = f.max_b();
  std::vector<double> beta(bmax + 1, 0.0);
  for (const auto& t : f.terms()) beta[t.b] += t.coefficient * std::sin(kPi * t.a * x0);
  std::vector<std::vector<double>> U(bmax);
  U[0] = {1.0};
  if (bmax > 1) U[1] = {0.0, 2.0};
  for (int k = 2; k < bmax; ++k) {
    U[k].assign(k + 1, 0.0);
    for (std::size_t i = 0; i < U[k - 1].size(); ++i) U[k][i + 1] += 2.0 * U[k - 1][i];
    for (std::size_t i = 0; i < U[k - 2].size(); ++i) U[k][i] -= U[k - 2][i];
  }
  std::vector<double> p(bmax, 0.0);
  for (int b = 1; b <= bmax; ++b)
    for (std::size_t i = 0; i < U[b - 1].size(); ++i) p[i] += beta[b] * U[b - 1][i];
  int deg = bmax - 1;
  double scale = 0.0;
  for (double c : p) scale = std::max(scale, std::abs(c));
  while (deg > 0 && std::abs(p[deg]) <= 1e-13 * scale) --deg;
  if (deg == 0) return 0;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
  const Eigen::VectorXcd roots = comp.eigenvalues();
  int count = 0;
  for (int i = 0; i < deg; ++i)
    if (std::abs(roots[i].imag()) < 1e-7 && std::abs(roots[i].real()) < 1.0) ++count;
  return count;
}

double main_bound(double lambda) {
  return lambda / (2 * kPi * kPi) + 2 * std::sqrt(lambda) / kPi + 1;
}

// ---- suites

json product_suite() {
  json s = json::array();
  for (int a = 1; a <= 10; ++a)
    for (int b = 1; b <= 10; ++b) s.push_back(square({{double(a), double(b), 1.0}}));
  return s;
}

// Diagonal family, the five deformation families, and seeded random members of
// every square eigenspace m <= 200 with at least two pairs.
json bound_suite() {
  json s = json::array();
  for (int k = 1; k <= 14; ++k) s.push_back(square({{double(k), double(k), 1.0}}));
  for (auto [a, b] : {std::pair{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}})
    for (int i = 0; i < 21; ++i) {
      const double t = -1.0 + 0.1 * i;
      const double tr = std::round(t * 10) / 10;
      s.push_back(square({{double(a), double(b), 1.0}, {double(b), double(a), tr}}));
    }
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> gauss;
  for (int m = 2; m <= 200; ++m) {
    const auto pairs = square_pairs(m);
    if (pairs.size() < 2) continue;
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<std::array<double, 3>> terms;
      for (auto [a, b] : pairs) terms.push_back({double(a), double(b), gauss(rng)});
      s.push_back(square(terms));
    }
  }
  return s;
}

json torus_suite() {
  json s = json::array();
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) s.push_back(torus_sine_product(a, b));
  for (auto [a, b] : {std::pair{1, 2}, {2, 3}, {1, 4}, {2, 5}, {1, 6}}) s.push_back(torus_plane(a, b));
  return s;
}

// ---- criteria

struct SuiteRuns {
  Run products, products2, bounds, bounds2, torus;
};

void criterion1(const SuiteRuns& runs) {
  auto& v = open(1, "product-family exactness (N = ab, N_s = a+b-2, N_c = 0, N = N_s+N_c+1)");
  const auto& reports = runs.products.out["reports"];
  int count_ok = 0, identity_ok = 0, total = 0;
  std::vector<std::string> identity_misses;
  for (int a = 1; a <= 10; ++a)
    for (int b = 1; b <= 10; ++b) {
      const auto& c = reports[total]["census"];
      const auto truth = product_truth(a, b);
      ++total;
      if (c["N"] == truth.N && c["N_s"] == truth.N_s && c["N_c"] == truth.N_c) ++count_ok;
      const int ns = c["N_s"], nc = c["N_c"], n = c["N"];
      if (n == ns + nc + 1)
        ++identity_ok;
      else if (identity_misses.size() < 3)
        identity_misses.push_back(str("(", a, ",", b, "): N=", n, " vs N_s+N_c+1=", ns + nc + 1));
    }
  v.notes.push_back(str("counts exact for ", count_ok, "/", total, " products"));
  v.notes.push_back(str("identity N = N_s+N_c+1 holds for ", identity_ok, "/", total,
                        " (it needs a singular-point-free nodal set; a,b >= 2 have crossings)"));
  for (const auto& m : identity_misses) v.notes.push_back("identity miss " + m);
  v.notes.push_back(str("runtime ", runs.products.seconds, " s (limit 60 s)"));
  v.pass = runs.products.status == 0 && count_ok == total && identity_ok == total &&
           runs.products.seconds < 60.0;
}

void criterion2(const SuiteRuns& runs) {
  auto& v = open(2, "Courant bound N <= j_max for every suite eigenfunction with lambda <= 400 pi^2");
  int checked = 0, bad = 0;
  for (const Run* r : {&runs.products, &runs.bounds, &runs.torus})
    for (const auto& rep : r->out["reports"]) {
      const double lambda = rep["input"]["lambda"];
      if (lambda > 400 * kPi * kPi * (1 + 1e-12)) continue;
      ++checked;
      if (rep["census"]["N"].get<int>() > rep["index"]["j_max"].get<long>()) ++bad;
    }
  v.notes.push_back(str(checked, " eigenfunctions checked, ", bad, " violations"));
  v.pass = checked > 0 && bad == 0;
}

void criterion3(const SuiteRuns& runs) {
  auto& v = open(3, "main bound N <= lambda/(2 pi^2) + 2 sqrt(lambda)/pi + 1 on >= 200 "
                    "singular-point-free square eigenfunctions");
  int used = 0, skipped = 0, bad = 0, from_families = 0;
  double worst = 0.0;
  int idx = 0;
  for (const auto& rep : runs.bounds.out["reports"]) {
    const bool family = idx++ < 14 + 105;
    if (!rep["census"]["singular_points"].empty()) {
      ++skipped;
      continue;
    }
    ++used;
    if (family) ++from_families;
    const double lambda = rep["input"]["lambda"];
    const double bound = main_bound(lambda);
    const int n = rep["census"]["N"];
    worst = std::max(worst, n / bound);
    // the CLI's own bound value must agree with the formula
    if (std::abs(rep["bound"]["bound_value"].get<double>() - bound) > 1e-9 * bound) ++bad;
    if (n > bound) ++bad;
  }
  v.notes.push_back(str(used, " used (", from_families, " from the diagonal and deformation families, ",
                        used - from_families, " random eigenspace members), ", skipped,
                        " skipped for singular points"));
  v.notes.push_back(str("violations ", bad, ", largest N/bound ", worst));
  v.pass = runs.bounds.status == 0 && used >= 200 && bad == 0;
}

void criterion4() {
  auto& v = open(4, "diagonal ratio trend N/j_max toward 2/pi");
  const auto r = cli("ratio-table --family diagonal --k-min 1 --k-max 14");
  const auto& rows = r.out["rows"];
  bool monotone = true;
  std::string first_drop;
  std::vector<double> ratio;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const int n = rows[i]["N"];
    const long j = rows[i]["j_max"];
    if (n != k * k) v.notes.push_back(str("k=", k, ": N=", n, " != k^2"));
    ratio.push_back(static_cast<double>(n) / j);
    if (k > 3 && ratio[i] < ratio[i - 1]) {
      if (monotone) first_drop = str("k=", k - 1, "->", k, ": ", ratio[i - 1], " -> ", ratio[i]);
      monotone = false;
    }
  }
  const double gap = std::abs(ratio.back() - nodal_atlas::kPolterovichConstant);
  // least-squares exponent of the gap over k = 7..14
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int k = 7; k <= 14; ++k) {
    const double lx = std::log(k), ly = std::log(std::abs(ratio[k - 1] - nodal_atlas::kPolterovichConstant));
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  const double cli_slope = r.out["trend"]["gap_fit_exponent_k7_onward"];
  v.notes.push_back(monotone ? "monotone nondecreasing for k >= 3"
                             : "NOT monotone nondecreasing for k >= 3; first drop " + first_drop +
                                   " (the ratio decreases toward 2/pi from above)");
  v.notes.push_back(str("gap to 2/pi at k=14: ", gap, " (tolerance 0.02)"));
  const bool gap_ok = gap <= 0.02;
  const bool fit_ok = slope >= -1.5 && slope <= -0.5;
  if (!gap_ok)
    v.notes.push_back(str("fallback fit exponent over k=7..14: ", slope, " (CLI reports ", cli_slope,
                          ", required [-1.5, -0.5]) -> ", fit_ok ? "ok" : "outside"));
  v.pass = r.status == 0 && monotone && (gap_ok || fit_ok) && std::abs(slope - cli_slope) < 1e-9;
}

void criterion5() {
  auto& v = open(5, "sign-change lemma on mesh lines, 200 random eigenfunctions per eigenspace, m <= 200");
  const auto r = cli("mesh-verify --sweep 200 --count 200 --seed 20240601");
  const auto& s = r.out["sweep"];
  const long restrictions = s.value("restrictions", 0L), violations = s.value("violations", -1L);
  v.notes.push_back(str(s.value("eigenspaces", 0), " eigenspaces, ", restrictions,
                        " restrictions, ", violations, " violations, ", s.value("degenerate", 0),
                        " degenerate lines skipped, ", r.seconds, " s"));
  // oracle cross-check on 100 random restrictions
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> pick_m(2, 200);
  int compared = 0, disagree = 0;
  while (compared < 100) {
    const int m = pick_m(rng);
    const auto pairs = square_pairs(m);
    if (pairs.empty()) continue;
    std::vector<nodal_atlas::SquareTerm> terms;
    for (auto [a, b] : pairs) terms.push_back({a, b, gauss(rng)});
    const auto f = nodal_atlas::SquareEigenfunction::make(terms);
    const auto mesh = nodal_atlas::meshbound::build_square_mesh(f.lambda());
    const double x0 = mesh.lines[std::uniform_int_distribution<std::size_t>(0, mesh.lines.size() - 1)(rng)];
    int got = -1;
    try {
      got = nodal_atlas::meshbound::sign_changes_on_line(f, x0);
    } catch (const std::exception&) {
      continue;
    }
    if (got != companion_sign_changes(f, x0)) ++disagree;
    ++compared;
  }
  v.notes.push_back(str("companion-matrix oracle: ", compared, " restrictions, ", disagree,
                        " disagreements"));
  v.pass = r.status == 0 && restrictions > 0 && violations == 0 && disagree == 0;
}

void criterion6(const SuiteRuns& runs) {
  auto& v = open(6, "every closed nodal component meets the mesh at least twice");
  int functions = 0, components = 0, bad = 0, singular = 0;
  for (const auto& rep : runs.bounds.out["reports"]) {
    const auto& c = rep["census"];
    if (c["N_c"].is_null() || c["N_c"].get<int>() < 1) continue;
    const auto& hits = rep["bound"]["intersections_per_component"];
    // with singular points, branch counts and closed curves differ; only the per-curve check applies
    if (!c["singular_points"].empty()) {
      ++singular;
    } else {
      ++functions;
      if (static_cast<int>(hits.size()) != c["N_c"].get<int>()) ++bad;
    }
    for (const auto& h : hits) {
      ++components;
      if (h.get<int>() < 2) ++bad;
    }
  }
  v.notes.push_back(str(functions, " singular-free eigenfunctions with N_c >= 1, ", singular,
                        " more with singular points, ", components, " closed components, ", bad,
                        " failures"));
  v.pass = functions > 0 && bad == 0;
}

void criterion7() {
  auto& v = open(7, "torus sector theorem for cos(2 pi (ax+by)), n in {5,13,17,29,37}");
  const std::vector<std::pair<int, int>> modes = {{1, 2}, {2, 3}, {1, 4}, {2, 5}, {1, 6}};
  const auto lat = cli("lattice --n 5,13,17,29,37 --theta 0.698131700798 --direction-theta "
                       "0.349065850399 --epsilon 0.174532925199");
  json batch = json::array();
  for (auto [a, b] : modes) batch.push_back(torus_plane(a, b));
  const auto mesh = cli("mesh-verify " + write_batch("c7.json", batch) +
                        " --theta 0.349065850399 --epsilon 0.174532925199");
  bool ok = lat.status == 0 && mesh.status == 0;
  const double theta = kPi / 9, eps = kPi / 18;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& c = lat.out["circles"][i];
    const long n = c["n"];
    const bool member = c["membership"]["0.698131700798"];
    const int count = c["count"];
    // exhaustive check of the reported direction against every solution
    const int p = c["direction"]["p"], q = c["direction"]["q"];
    const double ceiling = std::sqrt(double(n)) * std::hypot(double(p), double(q)) * std::cos(theta - eps);
    bool inequality = q >= 1;
    for (const auto& s : c["solutions"])
      if (std::abs(s[0].get<int>() * p + s[1].get<int>() * q) > ceiling + 1e-12) inequality = false;
    const auto& b = mesh.out["reports"][i]["bound"];
    const int N = b["measured_N"];
    // pre-Weyl chain: N <= C + 1 and 2C <= total intersections
    const auto& t = b["torus"];
    const double W = std::sqrt(double(n)) * std::hypot(double(p), double(q)) * std::cos(theta - eps);
    const double tau = t["tau"];
    const double chain = W * std::ceil(1.0 / (q * tau) - 1e-12) + 2 * std::sqrt(double(n)) + 1;
    const bool satisfied = b["satisfied"] && b["all_checks_hold"] && N <= chain + 1e-9;
    v.notes.push_back(str("n=", n, ": ", count, " solutions, member=", member, ", (p,q)=(", p, ",", q,
                          ") inequality ", inequality ? "verified" : "FAILED", ", N=", N,
                          " <= chain ", chain, ", bound ", b["bound_value"].get<double>()));
    ok = ok && member && inequality && satisfied;
    if (n == 5 && count != 8) ok = false;
  }
  v.pass = ok;
}

void criterion8(const SuiteRuns&) {
  auto& v = open(8, "Euler relation on sin(2 pi a x) sin(2 pi b y), 1 <= a,b <= 4");
  json batch = json::array();
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) batch.push_back(torus_sine_product(a, b));
  const auto r = cli("graph-check " + write_batch("c8.json", batch));
  bool ok = r.status == 0;
  int i = 0, good = 0;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b, ++i) {
      const auto& rep = r.out["reports"][i];
      if (!rep.contains("report")) {
        ok = false;
        v.notes.push_back(str("(", a, ",", b, ") failed: ", rep.value("error", json()).dump()));
        continue;
      }
      const auto& g = rep["report"]["graph"];
      const long V = g["v"], E = g["e"], F = g["f"], C = g["c"];
      const long independent = V - E + F - C;
      const long rel = rep["report"]["N"].get<long>() - rep["report"]["C"].get<long>() -
                       rep["report"]["order_sum"].get<long>();
      const bool this_ok = rel >= -1 && rel <= 1 && rel == independent &&
                           rel == rep["report"]["defect"].get<long>();
      if (this_ok) ++good;
      ok = ok && this_ok;
      if (a == 1 && b == 1) {
        const bool exact = V == 4 && E == 8 && F == 4 && C == 1 && independent == -1;
        v.notes.push_back(str("(1,1): v=", V, " e=", E, " f=", F, " c=", C, " defect=", independent,
                              exact ? " (exact)" : " (MISMATCH)"));
        ok = ok && exact;
      }
    }
  v.notes.push_back(str(good, "/16 reports with N - C - sum(ord-1) = v - e + f - c in {-1,0,1}"));
  v.pass = ok;
}

void criterion9() {
  auto& v = open(9, "random embedded graphs, genus <= 3, 10^4 trials, defect in [1-2g, 1]");
  const auto r = cli("graph-check --random 10000 --max-genus 3 --seed 20240601");
  const auto& s = r.out["random_suite"];
  const long failures = s.value("failures", -1L);
  long trials = 0;
  for (const auto& g : s["per_genus"]) {
    trials += g["trials"].get<long>();
    if (!g["min_defect"].is_null())
      v.notes.push_back(str("genus ", g["genus"].get<int>(), ": ", g["trials"].get<long>(),
                            " trials, defect range [", g["min_defect"].get<long>(), ", ",
                            g["max_defect"].get<long>(), "]"));
  }
  v.notes.push_back(str(trials, " trials, ", failures, " failures, ", r.seconds, " s (limit 10 s)"));
  v.pass = r.status == 0 && trials == 10000 && failures == 0 && r.seconds < 10.0;
}

void criterion10(const SuiteRuns& runs) {
  auto& v = open(10, "criteria 1-3 reproduce identical N and C at twice the default resolution");
  int compared = 0, differ = 0;
  auto cmp = [&](const Run& a, const Run& b) {
    const auto& ra = a.out["reports"];
    const auto& rb = b.out["reports"];
    if (ra.size() != rb.size()) {
      ++differ;
      return;
    }
    for (std::size_t i = 0; i < ra.size(); ++i) {
      ++compared;
      if (ra[i]["census"]["N"] != rb[i]["census"]["N"] ||
          ra[i]["census"]["C"] != rb[i]["census"]["C"]) {
        if (differ < 3)
          v.notes.push_back(str("differs: ", ra[i]["input"]["terms"].dump()));
        ++differ;
      }
    }
  };
  cmp(runs.products, runs.products2);
  cmp(runs.bounds, runs.bounds2);
  v.notes.push_back(str(compared, " eigenfunctions compared, ", differ, " differ"));
  v.pass = compared > 0 && differ == 0;
}

}  // namespace

int main() {
  std::cout << "nodal-atlas acceptance\n";
  SuiteRuns runs;
  const auto products = write_batch("products.json", product_suite());
  const auto bounds = write_batch("bounds.json", bound_suite());
  const auto torus = write_batch("torus.json", torus_suite());
  runs.products = cli("analyze " + products + " --no-bound --no-graph");
  runs.products2 = cli("analyze " + products + " --no-bound --no-graph --resolution-scale 2");
  runs.bounds = cli("analyze " + bounds + " --no-graph");
  runs.bounds2 = cli("analyze " + bounds + " --no-bound --no-graph --resolution-scale 2");
  runs.torus = cli("analyze " + torus + " --no-bound --no-graph");
  for (const Run* r : {&runs.products, &runs.bounds, &runs.torus})
    if (!r->out.contains("reports")) {
      std::cout << "FAIL: CLI produced no batch report\n";
      return 1;
    }

  criterion1(runs);
  criterion2(runs);
  criterion3(runs);
  criterion4();
  criterion5();
  criterion6(runs);
  criterion7();
  criterion8(runs);
  criterion9();
  criterion10(runs);

  int failed = 0;
  for (const auto& v : verdicts) {
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << "criterion " << v.id << ": " << v.title << "\n";
    for (const auto& n : v.notes) std::cout << "         " << n << "\n";
    if (!v.pass) ++failed;
  }
  std::cout << (verdicts.size() - failed) << "/" << verdicts.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
