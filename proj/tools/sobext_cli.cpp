#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sobext/sobext.hpp"

using namespace sobext;

namespace {

struct RunConfig {
  std::string command;
  std::string builtin = "halfplane";
  std::string domain_file;
  std::string out_dir = "sobext_out";
  std::string set = "closure";
  std::string function;
  std::string geometry = "zero";
  double theta = kPi / 4;
  double alpha = 2.0;
  double p = 2.0;
  double delta = 0.0;
  int m = 3;
  int k = 1;
  int grid = 256;
  int max_level = 8;
  int pairs = 400;
  std::uint64_t seed = 1;
  std::vector<double> centers;
  std::vector<double> radii = {0.125, 0.0625};

  std::string domain_label() const { return domain_file.empty() ? "builtin=" + builtin : "domain_file=" + domain_file; }

  /// Every parameter, one line, for file headers.
  std::string echo() const {
    std::ostringstream s;
    s << std::setprecision(17) << "command=" << command << ' ' << domain_label() << " theta=" << theta
      << " alpha=" << alpha << " m=" << m << " k=" << k << " p=" << p << " grid=" << grid
      << " max_level=" << max_level << " seed=" << seed << " pairs=" << pairs << " delta=" << delta
      << " set=" << set << " geometry=" << geometry;
    if (!function.empty()) s << " function=" << function;
    return s.str();
  }
};

/// Output directory with provenance headers on every file.
class Outputs {
 public:
  Outputs(const RunConfig& c) : cfg_(c), dir_(c.out_dir) { std::filesystem::create_directories(dir_); }

  std::ofstream open(const std::string& name, const std::string& comment = "# ") const {
    std::ofstream out(dir_ / name);
    if (!out) throw Error(ErrorKind::Usage, "cannot write " + (dir_ / name).string());
    out << std::setprecision(12);
    out << comment << "sobext " << kVersion << "\n"
        << comment << cfg_.echo() << "\n"
        << comment << kProjectionNotice << "\n";
    return out;
  }

  std::ofstream open_svg(const std::string& name) const {
    std::ofstream out(dir_ / name);
    if (!out) throw Error(ErrorKind::Usage, "cannot write " + (dir_ / name).string());
    out << "<!-- sobext " << kVersion << " | " << cfg_.echo() << " | " << kProjectionNotice << " -->\n";
    return out;
  }

 private:
  const RunConfig& cfg_;
  std::filesystem::path dir_;
};

Domain2 load_domain(const RunConfig& c) {
  if (!c.domain_file.empty()) return load_domain_file(c.domain_file);
  BuiltinArgs a;
  a.theta = c.theta;
  a.alpha = c.alpha;
  a.m = c.m;
  return make_builtin(c.builtin, a);
}

/// Key-value summary to stdout and to `name`.
class Summary {
 public:
  template <class T>
  Summary& kv(const std::string& key, const T& v) {
    s_ << key << ": " << v << "\n";
    return *this;
  }
  void emit(const Outputs& out, const std::string& name) const {
    auto f = out.open(name);
    f << s_.str();
    std::cout << s_.str();
  }
  Summary() { s_ << std::setprecision(8); }

 private:
  std::ostringstream s_;
};

int cmd_decompose(const RunConfig& c) {
  auto dom = load_domain(c);
  if (c.set != "closure" && c.set != "gamma") throw Error(ErrorKind::Usage, "--set must be closure or gamma");
  const auto& F = c.set == "gamma" ? dom.gamma : dom.closure;
  auto W = decompose(F, dom.window, c.max_level);
  auto chk = check_whitney(W);
  Outputs out(c);
  {
    auto f = out.open("cubes.txt");
    write_dump(f, W);
  }
  {
    auto f = out.open_svg("decompose.svg");
    write_svg(f, W);
  }
  Summary s;
  s.kv("domain", dom.name + " " + dom.params)
      .kv("set", c.set)
      .kv("cubes", chk.cubes)
      .kv("unresolved_cubes", W.unresolved.size())
      .kv("unresolved_measure", W.unresolved_measure())
      .kv("unresolved_fraction", W.unresolved_measure() / dom.window.measure())
      .kv("max_intersecting", chk.max_intersecting)
      .kv("lower_violations", chk.lower_violations)
      .kv("upper_violations", chk.upper_violations)
      .kv("ratio_violations", chk.ratio_violations)
      .kv("count_violations", chk.count_violations)
      .kv("nesting_violations", chk.nesting_violations)
      .kv("measure_defect", chk.measure_defect)
      .kv("violations", chk.violations());
  s.emit(out, "decompose_summary.txt");
  return chk.violations() == 0 && chk.cubes > 0 ? 0 : 1;
}

const TestFunction<2>& pick_function(const std::vector<TestFunction<2>>& bat, const std::string& name) {
  if (name.empty()) return bat.front();
  for (const auto& t : bat)
    if (t.name == name) return t;
  std::string known;
  for (const auto& t : bat) known += " " + t.name;
  throw Error(ErrorKind::Usage, "unknown function '" + name + "'; known:" + known);
}

int cmd_extend(const RunConfig& c) {
  auto dom = load_domain(c);
  auto g = build_extension_geometry<2>(dom, c.max_level, c.k);
  auto bat = cutoff_battery(dom);
  const auto& t = pick_function(bat, c.function);
  ExtendedFunction<2> E(g, t.f);
  Outputs out(c);
  auto csv = out.open("extend.csv");
  csv << "x,y,region,f,Ef\n";
  long omega = 0, mismatches = 0, near = 0, nonzero = 0, unresolved = 0;
  const Box<2>& b = dom.window;
  for (int i = 0; i < c.grid; ++i)
    for (int j = 0; j < c.grid; ++j) {
      Point<2> x{b.lo[0] + (i + 0.5) * b.extent(0) / c.grid, b.lo[1] + (j + 0.5) * b.extent(1) / c.grid};
      auto reg = g->locate(x);
      if (reg == Region::Unresolved || reg == Region::Outside) {
        ++unresolved;
        csv << x[0] << ',' << x[1] << ',' << to_string(reg) << ",,\n";
        continue;
      }
      double e = E(x);
      csv << x[0] << ',' << x[1] << ',' << to_string(reg) << ',';
      if (reg == Region::Omega) {
        double f = t.f(Jet<2>::variables(x, 0)).value();
        ++omega;
        mismatches += e != f;
        csv << f;
      }
      csv << ',' << e << '\n';
      if (dom.dset(x) < t.gap / 2) {
        ++near;
        nonzero += e != 0.0;
      }
    }
  Summary s;
  s.kv("domain", dom.name + " " + dom.params)
      .kv("function", t.name)
      .kv("omega_nodes", omega)
      .kv("omega_mismatches", mismatches)
      .kv("near_d_nodes", near)
      .kv("near_d_nonzero", nonzero)
      .kv("unresolved_nodes", unresolved)
      .kv("pass", mismatches == 0 && nonzero == 0 ? "yes" : "no");
  s.emit(out, "extend_summary.txt");
  return mismatches == 0 && nonzero == 0 ? 0 : 1;
}

int cmd_norms(const RunConfig& c) {
  auto dom = load_domain(c);
  auto g = build_extension_geometry<2>(dom, c.max_level, c.k);
  auto st = make_stencil<2>(g, dom.window, c.grid, c.k);
  auto rep = operator_norm_estimate<2>(st, cutoff_battery(dom), c.p);
  Outputs out(c);
  {
    auto csv = out.open("norms.csv");
    csv << "function,l,total,exterior,omega,ratio,exterior_ratio\n";
    for (const auto& r : rep.rows)
      csv << r.function << ',' << r.l << ',' << r.total << ',' << r.exterior << ',' << r.omega << ',' << r.ratio()
          << ',' << r.exterior_ratio() << '\n';
  }
  bool ok = !rep.ratio.empty() && rep.ratio[0] >= 1.0 - 1e-12;
  Summary s;
  s.kv("domain", dom.name + " " + dom.params).kv("k", rep.k).kv("p", rep.p).kv("grid_n", rep.grid_n);
  for (std::size_t l = 0; l < rep.ratio.size(); ++l) {
    ok = ok && std::isfinite(rep.ratio[l]);
    s.kv("ratio_l" + std::to_string(l), rep.ratio[l]).kv("exterior_ratio_l" + std::to_string(l), rep.exterior_ratio[l]);
  }
  s.kv("shell_fraction", rep.shell_fraction)
      .kv("whitney_unresolved", rep.whitney_unresolved)
      .kv("pass", ok ? "yes" : "no");
  s.emit(out, "norms_summary.txt");
  return ok ? 0 : 1;
}

int cmd_certify(const RunConfig& c) {
  auto dom = load_domain(c);
  CertifyConfig cfg;
  cfg.pairs = c.pairs;
  cfg.seed = c.seed;
  cfg.max_level = c.max_level;
  cfg.delta = c.delta > 0 ? c.delta : dom.claimed && std::isfinite(dom.claimed->delta) ? dom.claimed->delta : 1.0;
  auto cert = check_assumption(dom, cfg);
  Outputs out(c);
  {
    auto f = out.open("certificate.txt");
    f << format_certificate(cert);
  }
  {
    auto csv = out.open("pairs.csv");
    csv << "x0,x1,y0,y1,sep,eps_cc,eps_lc,K,straight,found\n";
    for (const auto& r : cert.pairs)
      csv << r.x[0] << ',' << r.x[1] << ',' << r.y[0] << ',' << r.y[1] << ',' << r.sep << ',' << r.eps_cc << ','
          << r.eps_lc << ',' << r.K << ',' << r.straight << ',' << r.found << '\n';
  }
  std::vector<std::vector<Point<2>>> witnesses;
  for (const auto* r : {&cert.lc, &cert.cc, &cert.qhd, &cert.dc})
    if (!r->pass && r->witness_path.size() >= 2) witnesses.push_back(r->witness_path);
  if (!witnesses.empty()) {
    auto f = out.open_svg("witness.svg");
    write_svg(f, decompose(dom.closure, dom.window, 7), witnesses);
  }
  std::cout << format_certificate(cert);
  return cert.all_pass() ? 0 : 1;
}

int cmd_cusp(const RunConfig& c) {
  if (c.geometry != "zero" && c.geometry != "infinity") throw Error(ErrorKind::Usage, "--geometry must be zero or infinity");
  auto t = c.geometry == "zero" ? cusp_blowup_experiment(c.alpha, c.p) : cusp_infinity_experiment(c.alpha, c.p);
  Outputs out(c);
  {
    auto csv = out.open("cusp.csv");
    csv << (c.geometry == "zero" ? "r" : "R") << ",fnorm_p,scaling,lower_bound\n";
    for (const auto& r : t.rows) csv << r.r << ',' << r.fnorm_p << ',' << r.scaling << ',' << r.lower_bound << '\n';
  }
  std::cout << std::setprecision(8);
  for (const auto& r : t.rows) std::cout << "r=" << r.r << " fnorm_p=" << r.fnorm_p << " LB=" << r.lower_bound << "\n";
  bool ok = std::abs(t.slope - t.expected_slope) <= 0.1;
  Summary s;
  s.kv("geometry", t.geometry)
      .kv("alpha", t.alpha)
      .kv("p", t.p)
      .kv("rows", t.rows.size())
      .kv("slope", t.slope)
      .kv("expected_slope", t.expected_slope)
      .kv("envelope", t.envelope)
      .kv("pass", ok ? "yes" : "no");
  s.emit(out, "cusp_summary.txt");
  return ok ? 0 : 1;
}

int cmd_locality(const RunConfig& c) {
  if (c.centers.size() % 2) throw Error(ErrorKind::Usage, "--center takes x y pairs");
  auto dom = load_domain(c);
  auto g = build_extension_geometry<2>(dom, c.max_level, c.k);
  std::vector<Point<2>> centers;
  for (std::size_t i = 0; i < c.centers.size(); i += 2) centers.push_back({c.centers[i], c.centers[i + 1]});
  if (centers.empty()) centers = {{0, 0}, {0.5, 0}, {-0.5, 0}};
  auto rows = locality_report<2>(g, accept::smooth_f(), centers, c.radii, std::min(c.k, 1), c.p);
  Outputs out(c);
  bool ok = true;
  double kappa = 0.0;
  {
    auto csv = out.open("locality.csv");
    csv << "cx,cy,r,kappa,max_change,homogeneous,exterior_nodes\n";
    for (const auto& r : rows) {
      csv << r.center[0] << ',' << r.center[1] << ',' << r.r << ',' << r.kappa << ',' << r.max_change << ','
          << r.homogeneous << ',' << r.exterior_nodes << '\n';
      ok = ok && r.kappa > 0 && r.max_change <= 1e-12;
      kappa = std::max(kappa, r.kappa);
    }
  }
  Summary s;
  s.kv("domain", dom.name + " " + dom.params).kv("rows", rows.size()).kv("kappa_max", kappa).kv("pass", ok ? "yes" : "no");
  s.emit(out, "locality_summary.txt");
  return ok ? 0 : 1;
}

void add_domain_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--builtin", c.builtin, "builtin domain")->check(CLI::IsMember(builtin_names()));
  sub->add_option("--domain-file", c.domain_file, "key=value domain description")->check(CLI::ExistingFile);
  sub->add_option("--theta", c.theta, "sector or wedge angle");
  sub->add_option("--alpha", c.alpha, "cusp exponent");
  sub->add_option("--m", c.m, "window is [-2^m, 2^m]^2");
  sub->add_option("--max-level", c.max_level, "finest dyadic level")->check(CLI::Range(1, 20));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sobext: Sobolev extension experiments on mixed-boundary domains"};
  app.require_subcommand(1);
  RunConfig c;
  std::string suite = "fast", goldens = SOBEXT_GOLDENS;
  std::vector<int> only;
  bool regenerate = false;

  auto* dec = app.add_subcommand("decompose", "Whitney decomposition, cube dump, SVG and invariant counts");
  auto* ext = app.add_subcommand("extend", "evaluate Ef on a lattice for one battery function");
  auto* nrm = app.add_subcommand("norms", "operator norm ratios over the cutoff battery");
  auto* cer = app.add_subcommand("certify", "sampled check of the domain assumption");
  auto* csp = app.add_subcommand("cusp", "cusp blow-up table");
  auto* loc = app.add_subcommand("locality", "locality table at boundary centres");
  auto* acc = app.add_subcommand("acceptance", "run the acceptance battery");
  for (auto* s : {dec, ext, nrm, cer, loc}) add_domain_options(s, c);
  for (auto* s : {dec, ext, nrm, cer, csp, loc, acc}) s->add_option("--out", c.out_dir, "output directory");
  dec->add_option("--set", c.set, "closure or gamma");
  for (auto* s : {ext, nrm, loc}) s->add_option("--k", c.k, "extension order")->check(CLI::Range(0, 4));
  for (auto* s : {ext, nrm}) s->add_option("--grid", c.grid, "lattice nodes per axis")->check(CLI::Range(2, 4096));
  for (auto* s : {nrm, csp, loc}) s->add_option("--p", c.p, "integrability exponent");
  ext->add_option("--function", c.function, "battery function name");
  cer->add_option("--pairs", c.pairs, "sampled pairs")->check(CLI::NonNegativeNumber);
  cer->add_option("--seed", c.seed, "sampling seed");
  cer->add_option("--delta", c.delta, "delta (default: claimed, else 1)");
  csp->add_option("--alpha", c.alpha, "cusp exponent");
  csp->add_option("--geometry", c.geometry, "zero or infinity");
  loc->add_option("--center", c.centers, "centre x y, repeatable")->expected(2)->allow_extra_args(false);
  loc->add_option("--radius", c.radii, "ball radii");
  acc->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  acc->add_option("--goldens", goldens, "goldens file");
  acc->add_option("--criteria", only, "run only these criteria")->check(CLI::Range(1, 11));
  acc->add_flag("--regenerate-goldens", regenerate, "re-pin the golden constants from this run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  auto* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  if (sub->count("--out") == 0)
    if (const char* env = std::getenv("SOBEXT_OUTPUT_DIR")) c.out_dir = env;

  try {
    if (sub == dec) return cmd_decompose(c);
    if (sub == ext) return cmd_extend(c);
    if (sub == nrm) return cmd_norms(c);
    if (sub == cer) return cmd_certify(c);
    if (sub == csp) return cmd_cusp(c);
    if (sub == loc) return cmd_locality(c);
    return acceptance_command(suite, c.out_dir, goldens, regenerate, {only.begin(), only.end()}, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::Usage || e.kind() == ErrorKind::Parse) {
      std::cerr << sub->help();
      return 2;
    }
    return e.is_geometry() ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
