#pragma once

// The acceptance battery: one function per criterion, each filling a
// CriterionResult with its checks, measured constants and timing.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../certify/assumption.hpp"
#include "../certify/cusp.hpp"
#include "../extend/compose.hpp"
#include "../extend/lipschitz.hpp"
#include "../extend/locality.hpp"
#include "../geometry/builtins.hpp"
#include "../polyfit/polyfit.hpp"
#include "../qhmetric/qh_graph.hpp"
#include "../reflect/chains.hpp"
#include "../version.hpp"
#include "../whitney/decomposition.hpp"
#include "goldens.hpp"

namespace sobext {

struct SuiteConfig {
  std::string name = "fast";
  int max_level = 8;      // extension, reflection and certifier geometry
  int whitney_level = 10; // exhaustive Whitney check
  int qh_level = 9;
  std::vector<int> grids = {128, 256, 512};
  int qh_pairs = 1000;
  int certify_pairs = 400;
  int certify_level = 10;
  std::uint64_t seed = 1;

  std::string describe() const {
    std::ostringstream s;
    s << "suite=" << name << " max_level=" << max_level << " whitney_level=" << whitney_level
      << " qh_level=" << qh_level << " grids=";
    for (std::size_t i = 0; i < grids.size(); ++i) s << (i ? "," : "") << grids[i];
    s << " qh_pairs=" << qh_pairs << " certify_pairs=" << certify_pairs << " certify_level=" << certify_level
      << " seed=" << seed;
    return s.str();
  }
};

inline SuiteConfig suite_config(const std::string& name) {
  SuiteConfig c;
  c.name = name;
  if (name == "fast") return c;
  if (name == "full") {
    c.max_level = 12;
    c.qh_level = 10;
    c.certify_pairs = 1000;
    return c;
  }
  throw Error(ErrorKind::Usage, "unknown suite '" + name + "' (fast or full)");
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

struct CriterionResult {
  int id = 0;
  std::string title;
  double budget = 0.0;  // seconds, informational
  double seconds = 0.0;
  bool pass = true;
  std::vector<std::string> lines;
  std::vector<std::pair<std::string, double>> measured;
  std::set<std::string> pinned;
  std::string error;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { lines.push_back("     " + what); }
  void measure(const std::string& key, double v, bool pin = false) {
    measured.push_back({key, v});
    if (pin) pinned.insert(key);
  }
};

namespace accept {

using J2 = Jet<2>;
using Vars2 = std::array<J2, 2>;

inline std::vector<Point<2>> lattice(const Box<2>& b, int n) {
  std::vector<Point<2>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.push_back({b.lo[0] + (i + 0.5) * b.extent(0) / n, b.lo[1] + (j + 0.5) * b.extent(1) / n});
  return out;
}

inline JetField<2> smooth_f() {
  return [](const Vars2& v) { return v[1] * exp(-1.0 * v[0] * v[0]) + 0.5 * sin(v[0]); };
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline void whitney_invariants(const SuiteConfig& s, CriterionResult& r) {
  for (const auto& dom : {half_plane(HalfPlaneSplit::NeumannLine, 2), sector(kPi / 4, {}, 2), cusp_at_zero(2.0, 2)}) {
    auto t0 = std::chrono::steady_clock::now();
    long cubes = 0, viol = 0;
    int max_int = 0;
    double defect = 0.0;
    for (const auto* F : {&dom.gamma, &dom.closure}) {
      auto W = decompose(*F, Box<2>::symmetric(4.0), s.whitney_level);
      auto c = check_whitney(W);
      cubes += c.cubes;
      viol += c.violations();
      max_int = std::max(max_int, c.max_intersecting);
      defect = std::max(defect, c.measure_defect);
    }
    double sec = seconds_since(t0);
    r.check(viol == 0, dom.name + ": " + std::to_string(cubes) + " cubes of W(cl Gamma) and W(cl Omega), violations " +
                           std::to_string(viol));
    r.check(max_int <= 144, dom.name + ": max intersecting " + std::to_string(max_int) + " <= 12^2");
    r.check(defect < 1e-12, dom.name + ": measure defect " + fmt(defect));
    r.note(dom.name + ": " + fmt(sec) + " s (budget 60 s)");
    r.measure(dom.name + ".cubes", double(cubes), true);
  }
}

inline void qhdist_oracle(const SuiteConfig& s, CriterionResult& r) {
  QhGraph<2> G(half_plane(), 10, 2);
  for (double t : {2.0, 4.0, 8.0}) {
    auto q = G.distance({0, 1}, {0, t});
    double rel = std::abs(q.value - std::log(t)) / std::log(t);
    r.check(rel <= 0.03 && q.refine == 2,
            "halfplane qhdist((0,1),(0," + fmt(t) + ")) = " + fmt(q.value) + ", ln t = " + fmt(std::log(t)) +
                ", rel err " + fmt(rel));
    r.measure("qhdist_t" + fmt(t), q.value);
  }
  auto dom = sector(kPi / 4);
  QhGraph<2> S(dom, s.qh_level, 1);
  auto rows = chain_qhdist_equivalence_report(S, dom, s.qh_pairs, s.seed);
  long bad = 0;
  double worst = -kInf;
  for (const auto& row : rows) {
    bad += !(row.qhdist <= row.chain + 0.01) || row.chain < 1;
    worst = std::max(worst, row.qhdist - row.chain);
  }
  r.check(bad == 0, std::to_string(rows.size()) + " sector pairs: qhdist <= chain length + 0.01 (max excess " +
                        fmt(worst) + ")");
  auto env = chain_envelope(rows);
  int top = env.empty() ? 0 : env.back();
  std::ostringstream e;
  for (std::size_t i = 0; i < env.size(); ++i) e << (i ? " " : "") << env[i];
  r.check(!env.empty() && top < 1 << 20, "bucketed chain envelope finite: " + e.str());
  r.measure("chain_envelope_max", top, true);
}

inline void sector_qhd(const SuiteConfig& s, CriterionResult& r) {
  double theta = kPi / 4, bound = 2 * (2 + 1 / std::tan(theta)) + 0.5;
  CertifyConfig cfg;
  cfg.max_level = s.max_level;
  AssumptionChecker chk(sector(theta, {}, 1), cfg);
  auto rep = qhd_probe(chk, sector_probes(theta, 200, s.seed));
  r.check(rep.rows.size() >= 150, std::to_string(rep.rows.size()) + " of 200 probes resolved");
  r.check(rep.K_meas <= bound, "K_meas = " + fmt(rep.K_meas) + " <= 2(2 + 1/tan theta) + 0.5 = " + fmt(bound));
  r.measure("K_meas", rep.K_meas, true);
}

struct ReflectRun {
  ReflectStats stats;
  int fjk_len = 0, fp_len = 0;
  long chain_failures = 0;
  int overlap = 0, overlap_fp = 0;
};

inline ReflectRun reflect_run(const Domain2& dom, int level) {
  auto geo = build_geometry<2>(dom, level);
  auto c = classify(geo, ReflectParams{});
  auto m = reflect_all(c);
  ReflectRun run;
  run.stats = reflect_stats(c, m);
  auto fjk = build_fjk(c, m), fp = build_fp(c, m);
  run.fjk_len = fjk.max_length;
  run.fp_len = fp.max_length;
  run.chain_failures = long(fjk.failures.size() + fp.failures.size());
  auto ov = overlap_histogram(c, fjk, fp, 128);
  run.overlap = ov.max_overlap;
  run.overlap_fp = ov.max_overlap_fp;
  return run;
}

inline void reflection_chains(const SuiteConfig& s, CriterionResult& r) {
  for (int which = 0; which < 2; ++which) {
    auto make = [&](int m) { return which == 0 ? half_plane(HalfPlaneSplit::NeumannLine, m) : sector(kPi / 4, {}, m); };
    std::string name = make(1).name;
    struct Variant {
      std::string label;
      ReflectRun run;
    };
    std::vector<Variant> vs = {{"level " + std::to_string(s.max_level), reflect_run(make(1), s.max_level)},
                               {"level " + std::to_string(s.max_level + 1), reflect_run(make(1), s.max_level + 1)},
                               {"window x2", reflect_run(make(2), s.max_level)}};
    const auto& b = vs[0].run;
    for (const auto& v : vs) {
      const auto& x = v.run;
      r.check(x.stats.no_reflection + x.stats.no_reflection_windowed == 0 && x.chain_failures == 0,
              name + " " + v.label + ": reflection total over " + std::to_string(x.stats.we) + " We cubes, no chain failures");
      r.check(x.stats.diam_order_violations == 0, name + " " + v.label + ": diam(Q) <= diam(Q*) everywhere");
      r.note(name + " " + v.label + ": C_refl " + fmt(x.stats.c_refl) + " C_pair " + fmt(x.stats.c_pair) + " C_pre " +
             std::to_string(x.stats.c_pre) + " chains " + std::to_string(x.fjk_len) + "/" + std::to_string(x.fp_len) +
             " overlap " + std::to_string(x.overlap) + "/" + std::to_string(x.overlap_fp));
      if (&v == &vs[0]) continue;
      r.check(x.stats.c_pre == b.stats.c_pre && x.fjk_len == b.fjk_len && x.fp_len == b.fp_len &&
                  x.overlap == b.overlap && x.overlap_fp == b.overlap_fp,
              name + " " + v.label + ": integer counts unchanged");
      double d1 = std::abs(x.stats.c_refl - b.stats.c_refl) / b.stats.c_refl;
      double d2 = b.stats.c_pair > 0 ? std::abs(x.stats.c_pair - b.stats.c_pair) / b.stats.c_pair : 0.0;
      r.check(d1 <= 0.2 && d2 <= 0.2, name + " " + v.label + ": ratio drift " + fmt(std::max(d1, d2)) + " <= 20%");
    }
    r.measure(name + ".C_refl", b.stats.c_refl, true);
    r.measure(name + ".C_pre", b.stats.c_pre, true);
    r.measure(name + ".maxChainLen", std::max(b.fjk_len, b.fp_len), true);
    r.measure(name + ".maxOverlap", std::max(b.overlap, b.overlap_fp), true);
  }
}

inline std::vector<std::pair<std::string, JetField<2>>> smooth_battery() {
  return {
      {"sin x", [](const Vars2& v) { return sin(v[0]); }},
      {"exp(x + y/2)", [](const Vars2& v) { return exp(v[0] + 0.5 * v[1]); }},
      {"x^2 y + y^3", [](const Vars2& v) { return v[0] * v[0] * v[1] + v[1] * v[1] * v[1]; }},
      {"cos 3x sin 2y", [](const Vars2& v) { return cos(3.0 * v[0]) * sin(2.0 * v[1]); }},
      {"1 / (1 + x^2 + y^2)", [](const Vars2& v) { return J2(1.0) / (1.0 + v[0] * v[0] + v[1] * v[1]); }},
      {"log(2 + x + y)", [](const Vars2& v) { return log(2.0 + v[0] + v[1]); }},
  };
}

inline Box<2> square(double x0, double y0, double s) { return {{x0, y0}, {x0 + s, y0 + s}}; }

inline void polynomial_estimates(const SuiteConfig& s, CriterionResult& r) {
  auto bat = smooth_battery();
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // projection property and linearity
  double proj_err = 0.0, lin_err = 0.0;
  auto Q = square(-0.3, 1.1, 0.5);
  for (int k = 1; k <= 4; ++k) {
    CubePolynomial<2> q;
    q.box = Q;
    q.k = k;
    q.basis = total_degree_indices<2>(k - 1);
    for (std::size_t i = 0; i < q.basis.size(); ++i) q.coeffs.push_back(u(rng));
    auto Pq = project<2>([&](const Point<2>& x) { return q(x); }, Q, k);
    for (const auto& x : lattice(Q, 6)) proj_err = std::max(proj_err, std::abs(Pq(x) - q(x)));
    auto f = value_of<2>(bat[0].second), g = value_of<2>(bat[3].second);
    auto Pf = project<2>(f, Q, k), Pg = project<2>(g, Q, k);
    auto Ph = project<2>([&](const Point<2>& x) { return 2.5 * f(x) - 0.75 * g(x); }, Q, k);
    for (std::size_t i = 0; i < Ph.coeffs.size(); ++i)
      lin_err = std::max(lin_err, std::abs(Ph.coeffs[i] - 2.5 * Pf.coeffs[i] + 0.75 * Pg.coeffs[i]));
  }
  r.check(proj_err <= 1e-10, "P q = q for q of degree < k, k = 1..4: max error " + fmt(proj_err));
  r.check(lin_err <= 1e-10, "P linear: max coefficient error " + fmt(lin_err));
  // stability of the projection
  double stab = 0.0;
  for (auto& [name, f] : bat)
    for (int k : {1, 2, 3})
      for (double p : {1.0, 2.0, kInf})
        for (MultiIndex<2> a : {MultiIndex<2>{0, 0}, MultiIndex<2>{1, 0}, MultiIndex<2>{0, 1}})
          for (double side : {1.0, 0.25}) {
            if (degree<2>(a) > k - 1) continue;
            stab = std::max(stab, projection_stability<2>(f, square(0.1, 0.2, side), k, a, p));
          }
  r.check(stab <= 4.0, "||d^a Pf|| / ||d^a f|| <= 4: max " + fmt(stab));
  r.measure("projection_stability", stab, true);
  // Poincare ratio across three dyadic scales
  double drift = 0.0, top = 0.0;
  for (auto& [name, f] : bat)
    for (int k : {1, 2, 3})
      for (double p : {1.0, 2.0, 4.0}) {
        double lo = kInf, hi = 0.0;
        for (double side : {0.125, 0.0625, 0.03125}) {
          auto pr = poincare_check<2>(f, square(0.125, 0.25, side), std::nullopt, k, k, {0, 0}, p);
          if (pr.zero_denominator) continue;
          lo = std::min(lo, pr.ratio);
          hi = std::max(hi, pr.ratio);
        }
        if (hi == 0.0) continue;
        drift = std::max(drift, (hi - lo) / hi);
        top = std::max(top, hi);
      }
  r.check(std::isfinite(top) && drift <= 0.2,
          "Poincare ratio max " + fmt(top) + ", drift across 3 dyadic scales " + fmt(drift) + " <= 20%");
  r.measure("poincare_ratio_max", top, true);
  // norms of one polynomial on a cube and a quarter subcube
  double worst = 0.0;
  auto Qc = square(0, 0, 1), R = square(0.5, 0.0, 0.5);
  for (int t = 0; t < 1000; ++t) {
    CubePolynomial<2> P;
    P.box = Qc;
    P.k = 3;
    P.basis = total_degree_indices<2>(2);
    for (std::size_t i = 0; i < P.basis.size(); ++i) P.coeffs.push_back(u(rng));
    worst = std::max(worst, norm_comparison_check<2>(P, Qc, R, 2.0, 0.25));
  }
  r.check(std::isfinite(worst) && worst <= 40.0,
          "||P||_Q / ||P||_R at kappa = 1/4 over 1000 random quadratics: max " + fmt(worst));
  r.measure("norm_comparison_max", worst, true);
}

inline void extension_correctness(const SuiteConfig& s, CriterionResult& r) {
  auto g = build_extension_geometry<2>(sector(kPi / 4, {}, 1), s.max_level, 1);
  auto bat = cutoff_battery(g->dom);
  long nodes = 0, mismatches = 0;
  for (const auto& t : bat) {
    ExtendedFunction<2> E(g, t.f);
    for (const auto& x : lattice(g->dom.window, 64))
      if (g->dom.inside(x)) {
        ++nodes;
        mismatches += E(x) != t.f(J2::variables(x, 0)).value();
      }
  }
  r.check(mismatches == 0, "Ef = f exactly at " + std::to_string(nodes) + " Omega nodes");
  long near = 0, nonzero = 0;
  for (const auto& t : bat) {
    ExtendedFunction<2> E(g, t.f);
    for (const auto& x : lattice(g->dom.window, 128)) {
      if (g->dom.dset(x) >= t.gap / 2) continue;
      auto reg = g->locate(x);
      if (reg == Region::Unresolved || reg == Region::Outside) continue;
      ++near;
      nonzero += E(x) != 0.0;
    }
  }
  r.check(nonzero == 0 && near > 0, "Ef = 0 within gap/2 of D at " + std::to_string(near) + " nodes");
  {
    const auto& f = bat[4].f;
    const auto& h = bat[10].f;
    const double a = 1.7, b = -0.4;
    ExtendedFunction<2> Ef(g, f), Eh(g, h), Es(g, [&](const Vars2& v) { return a * f(v) + b * h(v); });
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double err = 0.0;
    for (int tested = 0; tested < 200;) {
      Point<2> x{u(rng), u(rng)};
      auto reg = g->locate(x);
      if (reg == Region::Unresolved || reg == Region::Outside) continue;
      auto sj = Es.eval(x, 1), e1 = Ef.eval(x, 1), e2 = Eh.eval(x, 1);
      for (int i = 0; i < 3; ++i)
        err = std::max(err, std::abs(sj.derivative_at(i) - a * e1.derivative_at(i) - b * e2.derivative_at(i)));
      ++tested;
    }
    r.check(err <= 1e-10, "E(af + bh) = aEf + bEh with first derivatives at 200 points: max error " + fmt(err));
  }
  for (auto geo : {g, build_extension_geometry<2>(half_plane(HalfPlaneSplit::NeumannLine, 1), s.max_level, 1)}) {
    long covered = 0;
    double err = 0.0;
    for (const auto& x : lattice(geo->dom.window, 160)) {
      int q = -1;
      if (geo->locate(x, &q) != Region::Exterior || !geo->pou.covered(x, q)) continue;
      ++covered;
      double sum = 0.0;
      for (const auto& t : geo->pou.phis(x, q, 0)) sum += t.phi.value();
      err = std::max(err, std::abs(sum - 1.0));
    }
    r.check(err <= 1e-10 && covered > 0,
            geo->dom.name + ": sum phi_j = 1 on " + std::to_string(covered) + " covered nodes, max error " + fmt(err));
  }
  PartitionOfUnity<2> shrunk(g->c.ext, g->c.in_we, 1, 15.0 / 32);
  long broken = 0;
  for (const auto& x : lattice(g->dom.window, 160)) {
    int q = -1;
    if (g->locate(x, &q) != Region::Exterior) continue;
    double sum = 0.0;
    for (const auto& t : shrunk.phis(x, q, 0)) sum += t.phi.value();
    broken += std::abs(sum - 1.0) > 1e-10;
  }
  r.check(broken > 0, "mutation: bump support 15/16 instead of 17/16 breaks the partition at " +
                          std::to_string(broken) + " nodes");
}

inline void boundedness(const SuiteConfig& s, CriterionResult& r) {
  const std::vector<double> ps = {1.0, 2.0, 4.0};
  Box<2> box = Box<2>::symmetric(2.0);
  for (const auto& dom : {half_plane(HalfPlaneSplit::NeumannLine, 3), sector(kPi / 4, {}, 3)}) {
    auto g = build_extension_geometry<2>(dom, s.max_level, 1);
    auto bat = cutoff_battery(dom);
    std::vector<std::vector<NormReport>> by_grid;
    for (int n : s.grids) {
      auto st = make_stencil<2>(g, box, n, 1);
      by_grid.push_back(operator_norm_estimate<2>(st, bat, ps));
      r.check(by_grid.back()[0].shell_fraction <= 0.01,
              dom.name + " gridN " + std::to_string(n) + ": unresolved shell " +
                  fmt(100 * by_grid.back()[0].shell_fraction) + "% of the box");
    }
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (int l = 0; l <= 1; ++l) {
        double lo = kInf, hi = 0.0;
        std::ostringstream v;
        for (std::size_t i = 0; i < by_grid.size(); ++i) {
          double x = by_grid[i][a].ratio[l];
          lo = std::min(lo, x);
          hi = std::max(hi, x);
          v << (i ? " / " : "") << fmt(x);
        }
        double drift = hi > 0 ? (hi - lo) / hi : 0.0;
        r.check(std::isfinite(hi) && hi >= 1.0 && drift <= 0.1,
                dom.name + " p=" + fmt(ps[a]) + " l=" + std::to_string(l) + ": ratio " + v.str() + ", drift " +
                    fmt(drift));
        r.measure(dom.name + ".p" + fmt(ps[a]) + ".ratio" + std::to_string(l), by_grid[0][a].ratio[l], true);
      }
  }
  auto disk = dirichlet_disk();
  auto gd = build_extension_geometry<2>(disk, s.max_level, 1);
  auto st = make_stencil<2>(gd, disk.window, s.grids.front(), 1);
  for (const auto& rep : operator_norm_estimate<2>(st, cutoff_battery(disk), ps))
    r.check(rep.ratio[0] == 1.0, "pure Dirichlet disk p=" + fmt(rep.p) + ": l=0 ratio " + fmt(rep.ratio[0]) + " == 1");
}

inline void locality(const SuiteConfig& s, CriterionResult& r) {
  double kappa = 0.0;
  for (int which = 0; which < 2; ++which) {
    auto dom = which == 0 ? half_plane(HalfPlaneSplit::NeumannLine, 1) : sector(kPi / 4, {}, 1);
    auto g = build_extension_geometry<2>(dom, s.max_level, 1);
    std::vector<Point<2>> centers = which == 0
                                        ? std::vector<Point<2>>{{0.5, 0}, {-0.5, 0}, {0.25, 0}, {1.0, 0}, {-1.0, 0}}
                                        : std::vector<Point<2>>{{0, 0}, {0.5, 0}, {-0.5, 0}, {1.0, 0}, {-1.0, 0}};
    auto rows = locality_report<2>(g, smooth_f(), centers, {0.125, 0.0625}, 1, 2.0);
    for (const auto& row : rows) {
      r.check(row.kappa > 0 && row.max_change <= 1e-12 && row.exterior_nodes > 0 && std::isfinite(row.homogeneous),
              dom.name + " x=" + to_string<2>(row.center) + " r=" + fmt(row.r) + ": kappa " + fmt(row.kappa) +
                  ", change " + fmt(row.max_change) + ", homogeneous ratio " + fmt(row.homogeneous));
      kappa = std::max(kappa, row.kappa);
    }
  }
  r.measure("kappa_max", kappa, true);
}

inline void cusp_anchor(const SuiteConfig&, CriterionResult& r) {
  for (auto [alpha, p] : std::vector<std::pair<double, double>>{{2, 2}, {3, 2}, {2, 4}, {1, 2}, {1, 4}}) {
    auto t = cusp_blowup_experiment(alpha, p);
    r.check(std::abs(t.slope - t.expected_slope) <= 0.1,
            "alpha=" + fmt(alpha) + " p=" + fmt(p) + ": slope " + fmt(t.slope) + ", expected " + fmt(t.expected_slope));
    r.check(t.envelope <= 4.0, "alpha=" + fmt(alpha) + " p=" + fmt(p) + ": ||f_r||^p / (r^2 + r^(2-p)) envelope " +
                                   fmt(t.envelope) + " <= 4");
    if (alpha > 1) r.measure("slope_a" + fmt(alpha) + "_p" + fmt(p), t.slope, true);
  }
  auto inf = cusp_infinity_experiment(1.0, 2.0);
  r.check(inf.slope > 0, "cusp at infinity alpha=1 p=2: LB grows with the window, slope " + fmt(inf.slope));
}

inline void certifier_calibration(const SuiteConfig& s, CriterionResult& r) {
  CertifyConfig cfg;
  cfg.pairs = s.certify_pairs;
  cfg.max_level = s.certify_level;
  cfg.seed = s.seed;
  auto disk = check_assumption(dirichlet_disk(), cfg);
  r.check(disk.all_pass() && disk.eps_meas == 1.0,
          "dirichlet-disk: all four conditions pass, eps_meas " + fmt(disk.eps_meas) + " over " +
              std::to_string(disk.sampled) + " pairs");
  auto cusp = check_assumption(cusp_at_zero(2.0, 1), cfg);
  const ConditionResult* bad = nullptr;
  for (const auto* c : {&cusp.lc, &cusp.cc, &cusp.qhd, &cusp.dc})
    if (!c->pass && !bad) bad = c;
  r.check(bad && !bad->witness.empty(),
          "cusp-zero alpha=2: failure witness" + (bad ? " (" + bad->name + " " + fmt(bad->measured) + "): " + bad->witness
                                                      : std::string(" missing")));
  r.measure("cusp_eps_meas", cusp.eps_meas);
}

inline void lipschitz_layer(const SuiteConfig& s, CriterionResult& r) {
  const double stein_cap = 1.0 + 2.0 * 35.0 / 16.0;
  auto hp = build_extension_geometry<2>(half_plane(HalfPlaneSplit::NeumannLine, 1), s.max_level, 1);
  for (auto g : {hp, build_extension_geometry<2>(sector(kPi / 4, {}, 1), s.max_level, 1)}) {
    auto st = make_stencil<2>(g, Box<2>::symmetric(1.0), 32, 1);
    auto rep = lipschitz_report(st, {8, 32}, 128);
    r.check(rep.stein_constant <= stein_cap,
            g->dom.name + ": Lip(f phi_n) / Lip(f) = " + fmt(rep.stein_constant) + " <= " + fmt(stein_cap));
    r.check(std::isfinite(rep.extension_constant),
            g->dom.name + ": Lip(E f_n) / Lip(f_n) = " + fmt(rep.extension_constant) + " finite");
    r.measure(g->dom.name + ".stein", rep.stein_constant, true);
  }
  ExtendedFunction<2> E(hp, smooth_f());
  auto probe = lipschitz_continuity_probe<2>(E, {{0.3, 0}, {-0.7, 0}, {1.1, 0}}, {0, 1}, 2, 7);
  r.check(std::abs(probe.slope - 1.0) <= 0.15 && std::isfinite(probe.max_ratio),
          "halfplane boundary probes: log-log slope " + fmt(probe.slope) + ", max mismatch/step " +
              fmt(probe.max_ratio));
  r.measure("probe_slope", probe.slope, true);
  auto dom = exterior_cusp(kPi / 4, 2.0, 1);
  auto ce = compose_reference<2>(dom, wedge_complement(kPi / 4, 1), s.max_level, 1);
  std::vector<TestFunction<2>> bat;
  for (const auto& t : cutoff_battery(dom, {8})) bat.push_back(ce.zero_extended(t));
  auto st = make_stencil<2>(ce.geometry, Box<2>::symmetric(1.0), 64, 1);
  auto rep = operator_norm_estimate<2>(st, bat, 2.0);
  bool fin = true;
  for (double x : rep.ratio) fin = fin && std::isfinite(x) && x >= 1.0;
  r.check(fin, "exterior-cusp via wedge-complement: ratio " + fmt(rep.ratio[0]) + " / " + fmt(rep.ratio[1]) +
                   " finite");
  double straddle = zero_extension_straddle<2>(dom, cutoff_battery(dom, {8})[4].f, 1e-4);
  r.check(straddle == 0.0, "zero extension continuous across D: straddle " + fmt(straddle));
  r.measure("exterior_cusp.ratio1", rep.ratio[1], true);
}

}  // namespace accept

struct CriterionSpec {
  int id;
  const char* title;
  double budget;
  std::function<void(const SuiteConfig&, CriterionResult&)> run;
};

inline const std::vector<CriterionSpec>& criteria() {
  static const std::vector<CriterionSpec> list = {
      {1, "Whitney invariants, exhaustive", 180, accept::whitney_invariants},
      {2, "qhdist oracle and chain relation", 120, accept::qhdist_oracle},
      {3, "Sector (QHD) anchor", 60, accept::sector_qhd},
      {4, "Reflection and chains", 300, accept::reflection_chains},
      {5, "Polynomial estimates", 60, accept::polynomial_estimates},
      {6, "Extension correctness", 120, accept::extension_correctness},
      {7, "Boundedness across resolutions", 600, accept::boundedness},
      {8, "Locality and homogeneity", 300, accept::locality},
      {9, "Cusp blow-up anchor", 120, accept::cusp_anchor},
      {10, "Certifier calibration", 60, accept::certifier_calibration},
      {11, "Lipschitz layer", 300, accept::lipschitz_layer},
  };
  return list;
}

struct AcceptanceReport {
  SuiteConfig suite;
  std::vector<CriterionResult> results;
  bool pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

inline std::string golden_id(const SuiteConfig& s, int id) { return s.name + ".criterion" + std::to_string(id); }

/// Compares pinned constants against the goldens of the same suite and config.
inline void compare_goldens(const SuiteConfig& s, const GoldenStore& goldens, CriterionResult& r) {
  if (r.pinned.empty()) return;
  const GoldenRecord* g = goldens.find(golden_id(s, r.id));
  if (!g) {
    r.note("no golden pinned for this suite");
    return;
  }
  if (g->config_hash != config_hash(s.describe())) {
    r.note("golden pinned under another configuration; not compared");
    return;
  }
  for (const auto& [k, v] : r.measured) {
    if (!r.pinned.count(k)) continue;
    auto d = golden_drift(*g, k, v);
    if (!d) {
      r.note("golden has no " + k);
      continue;
    }
    r.check(*d <= g->rel_tol, "golden " + k + ": " + fmt(v) + " vs " + fmt(g->values.at(k)) + ", drift " + fmt(*d));
  }
}

inline GoldenRecord make_golden(const SuiteConfig& s, const CriterionResult& r) {
  GoldenRecord g;
  g.id = golden_id(s, r.id);
  g.config_hash = config_hash(s.describe());
  for (const auto& [k, v] : r.measured)
    if (r.pinned.count(k)) g.values[k] = v;
  return g;
}

/// Runs the selected criteria (all when `only` is empty); progress goes to `log`.
inline AcceptanceReport run_acceptance(const SuiteConfig& s, const GoldenStore* goldens, const std::set<int>& only,
                                       std::ostream* log) {
  AcceptanceReport rep;
  rep.suite = s;
  for (const auto& c : criteria()) {
    if (!only.empty() && !only.count(c.id)) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget = c.budget;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(s, r);
    } catch (const std::exception& e) {
      r.error = e.what();
      r.check(false, std::string("exception: ") + e.what());
    }
    r.seconds = accept::seconds_since(t0);
    if (goldens) compare_goldens(s, *goldens, r);
    if (log) *log << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.id << ": " << r.title << " ("
                  << fmt(r.seconds) << " s)" << std::endl;
    rep.results.push_back(std::move(r));
  }
  return rep;
}

inline void write_report(std::ostream& out, const AcceptanceReport& rep) {
  out << "sobext acceptance report\nversion: " << kVersion << "\nconfig: " << rep.suite.describe()
      << "\nconfig_hash: " << config_hash(rep.suite.describe()) << "\n" << kProjectionNotice
      << "\ntimings are informational\n\n";
  for (const auto& r : rep.results) {
    out << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.title << "  (" << fmt(r.seconds)
        << " s, budget " << fmt(r.budget) << " s" << (r.seconds > r.budget ? ", over budget" : "") << ")\n";
    for (const auto& l : r.lines) out << "  " << l << "\n";
    for (const auto& [k, v] : r.measured) out << "  measured " << k << " = " << fmt(v) << "\n";
  }
  int passed = 0;
  for (const auto& r : rep.results) passed += r.pass;
  out << "\nsummary: " << passed << "/" << rep.results.size() << " criteria pass\n";
}

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

inline void write_junit(std::ostream& out, const AcceptanceReport& rep) {
  int failures = 0;
  double total = 0.0;
  for (const auto& r : rep.results) {
    failures += !r.pass;
    total += r.seconds;
  }
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<testsuite name=\"acceptance-" << rep.suite.name << "\" tests=\"" << rep.results.size() << "\" failures=\""
      << failures << "\" time=\"" << total << "\">\n";
  for (const auto& r : rep.results) {
    out << "  <testcase classname=\"acceptance\" name=\"criterion" << r.id << " " << xml_escape(r.title)
        << "\" time=\"" << r.seconds << "\">\n";
    if (!r.pass) {
      out << "    <failure message=\"criterion " << r.id << " failed\">";
      for (const auto& l : r.lines)
        if (l.rfind("FAIL", 0) == 0) out << xml_escape(l) << "\n";
      out << "</failure>\n";
    }
    out << "  </testcase>\n";
  }
  out << "</testsuite>\n";
}

/// Runs a suite, writes acceptance_report.txt and acceptance_junit.xml under
/// `out_dir`, and optionally re-pins the goldens. Returns 0 when every
/// criterion passes, 1 otherwise.
inline int acceptance_command(const std::string& suite, const std::string& out_dir, const std::string& goldens_path,
                              bool regenerate, const std::set<int>& only, std::ostream& log) {
  SuiteConfig s = suite_config(suite);
  GoldenStore goldens = GoldenStore::load(goldens_path);
  log << "sobext " << kVersion << " acceptance: " << s.describe() << "\n" << kProjectionNotice << std::endl;
  auto rep = run_acceptance(s, regenerate ? nullptr : &goldens, only, &log);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(std::filesystem::path(out_dir) / "acceptance_report.txt");
    write_report(out, rep);
  }
  {
    std::ofstream out(std::filesystem::path(out_dir) / "acceptance_junit.xml");
    write_junit(out, rep);
  }
  if (regenerate) {
    for (const auto& r : rep.results)
      if (!r.pinned.empty()) goldens.put(make_golden(s, r));
    goldens.save(goldens_path);
    log << "goldens written to " << goldens_path << std::endl;
  }
  int passed = 0;
  for (const auto& r : rep.results) passed += r.pass;
  log << passed << "/" << rep.results.size() << " criteria pass; report in " << out_dir << std::endl;
  return rep.pass() ? 0 : 1;
}

}  // namespace sobext
