#pragma once

// Builtin lookup by name, the key=value domain file and binary point clouds.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "../core/error.hpp"
#include "builtins.hpp"
#include "sampled.hpp"

namespace sobext {

struct BuiltinArgs {
  double theta = kPi / 4;
  double alpha = 2.0;
  double radius = 1.0;
  int m = 3;
  HalfPlaneSplit split = HalfPlaneSplit::NeumannLine;
  SectorOuter outer{};
};

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"halfplane",     "halfplane-mixed", "halfplane-dirichlet",
                                                 "dirichlet-disk", "sector",          "cusp-zero",
                                                 "cusp-infinity", "exterior-cusp",   "wedge-complement"};
  return names;
}

inline Domain2 make_builtin(const std::string& name, const BuiltinArgs& a = {}) {
  if (name == "halfplane") return half_plane(a.split, a.m);
  if (name == "halfplane-mixed") return half_plane(HalfPlaneSplit::MixedRay, a.m);
  if (name == "halfplane-dirichlet") return half_plane(HalfPlaneSplit::DirichletLine, a.m);
  if (name == "dirichlet-disk") return dirichlet_disk(a.radius, a.m);
  if (name == "sector") return sector(a.theta, a.outer, a.m);
  if (name == "cusp-zero") return cusp_at_zero(a.alpha, a.m);
  if (name == "cusp-infinity") return cusp_at_infinity(a.alpha, a.m);
  if (name == "exterior-cusp") return exterior_cusp(a.theta, a.alpha, a.m);
  if (name == "wedge-complement") return wedge_complement(a.theta, a.m);
  throw Error(ErrorKind::Usage, "unknown builtin '" + name + "'");
}

/// Binary cloud: uint64 count, then D*count float64, all little-endian.
template <int D>
std::vector<Point<D>> read_point_cloud(const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open point cloud " + path);
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  std::vector<Point<D>> pts(n);
  in.read(reinterpret_cast<char*>(pts.data()), static_cast<std::streamsize>(n * D * sizeof(double)));
  if (!in) throw Error(ErrorKind::Parse, "truncated point cloud " + path);
  return pts;
}

template <int D>
void write_point_cloud(const std::string& path, const std::vector<Point<D>>& pts) {
  std::ofstream out(path, std::ios::binary);
  std::uint64_t n = pts.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(pts.data()), static_cast<std::streamsize>(n * D * sizeof(double)));
  if (!out) throw Error(ErrorKind::Parse, "cannot write point cloud " + path);
}

/// Polygon with per-edge labels: edge i joins v[i] to v[i+1] and is Dirichlet
/// if label[i] == 'D', Neumann if 'G'.
inline Domain2 polygon_domain(const std::vector<P2>& v, const std::string& labels, B2 window) {
  if (v.size() < 3 || labels.size() != v.size())
    throw Error(ErrorKind::Parse, "polygon needs >= 3 vertices and one label per edge");
  if (labels.find_first_not_of("DG") != std::string::npos)
    throw Error(ErrorKind::Parse, "polygon labels must be D or G, got '" + labels + "'");
  Domain2 d;
  d.name = "polygon";
  d.params = "vertices=" + std::to_string(v.size()) + " labels=" + labels;
  d.window = window;
  d.inside = [v](const P2& p) {
    bool in = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      if ((v[i][1] > p[1]) != (v[j][1] > p[1]) &&
          p[0] < (v[j][0] - v[i][0]) * (p[1] - v[i][1]) / (v[j][1] - v[i][1]) + v[i][0])
        in = !in;
    }
    if (!in) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (point_segment_distance(p, v[i], v[(i + 1) % v.size()]) == 0.0) return false;
    return true;
  };
  auto edges_oracle = [&](char want) {
    std::vector<std::pair<P2, P2>> segs;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (want == '*' || labels[i] == want) segs.push_back({v[i], v[(i + 1) % v.size()]});
    if (segs.empty()) return SetOracle<2>::empty();
    SetOracle<2> s;
    s.distance = [segs](const P2& p) {
      double r = kInf;
      for (auto& [a, b] : segs) r = std::min(r, point_segment_distance(p, a, b));
      return r;
    };
    s.box_distance = [segs](const B2& bx) {
      double r = kInf;
      for (auto& [a, b] : segs) r = std::min(r, box_segment_distance(bx, a, b));
      return r;
    };
    return s;
  };
  d.gamma = edges_oracle('G');
  d.dset = edges_oracle('D');
  d.boundary = edges_oracle('*');
  d.closure = closure_oracle<2>(d.inside, d.boundary);
  for (std::size_t i = 0; i < v.size(); ++i) {
    P2 a = v[i], b = v[(i + 1) % v.size()];
    BoundaryPiece<2> pc{[a, b](double t) { return add<2>(a, scale<2>(sub<2>(b, a), t)); }, 0.0, 1.0};
    (labels[i] == 'D' ? d.d_pieces : d.gamma_pieces).push_back(pc);
  }
  return d;
}

namespace detail {

inline std::vector<double> parse_numbers(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      double x = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(x);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "not a number: '" + tok + "'");
    }
  }
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parse a key=value domain description; '#' starts a comment. Relative cloud
/// paths resolve against `base_dir`.
inline Domain2 parse_domain(const std::string& text, const std::string& base_dir = ".") {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected key = value");
    kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  auto get = [&](const std::string& k, const std::string& def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : it->second;
  };
  auto num = [&](const std::string& k, double def) {
    auto it = kv.find(k);
    if (it == kv.end()) return def;
    auto v = detail::parse_numbers(it->second);
    if (v.size() != 1) throw Error(ErrorKind::Parse, k + ": expected one number");
    return v[0];
  };
  if (!kv.count("kind")) throw Error(ErrorKind::Parse, "missing 'kind'");
  std::string kind = kv["kind"];

  BuiltinArgs a;
  a.theta = num("theta", a.theta);
  a.alpha = num("alpha", a.alpha);
  a.radius = num("radius", a.radius);
  a.m = static_cast<int>(num("window_m", a.m));
  std::string split = get("split", "neumann");
  if (split == "neumann") a.split = HalfPlaneSplit::NeumannLine;
  else if (split == "dirichlet") a.split = HalfPlaneSplit::DirichletLine;
  else if (split == "mixed") a.split = HalfPlaneSplit::MixedRay;
  else throw Error(ErrorKind::Parse, "split: unknown value '" + split + "'");
  std::string outer = get("outer", "halfplane");
  if (outer == "wedge") a.outer = {SectorOuter::Wedge, num("phi0", a.theta)};
  else if (outer != "halfplane") throw Error(ErrorKind::Parse, "outer: unknown value '" + outer + "'");

  B2 window = B2::symmetric(std::ldexp(1.0, a.m));
  if (kv.count("window")) {
    auto w = detail::parse_numbers(kv["window"]);
    if (w.size() != 4 || !(w[2] > w[0]) || !(w[3] > w[1]))
      throw Error(ErrorKind::Parse, "window: expected x0 y0 x1 y1 with x1 > x0, y1 > y0");
    window = B2{{w[0], w[1]}, {w[2], w[3]}};
  }

  Domain2 d;
  if (kind == "polygon") {
    auto xs = detail::parse_numbers(get("vertices", ""));
    if (xs.size() % 2) throw Error(ErrorKind::Parse, "vertices: odd coordinate count");
    std::vector<P2> v;
    for (std::size_t i = 0; i < xs.size(); i += 2) v.push_back({xs[i], xs[i + 1]});
    d = polygon_domain(v, get("labels", ""), window);
  } else {
    d = make_builtin(kind, a);
    d.window = window;
  }

  if (kv.count("claimed")) {
    auto c = detail::parse_numbers(kv["claimed"]);
    if (c.size() != 4) throw Error(ErrorKind::Parse, "claimed: expected eps delta K lambda");
    d.claimed = ClaimedParams{c[0], c[1], c[2], c[3]};
  }

  std::string oracle = get("oracle", "analytic");
  if (oracle == "sampled") {
    double h = num("h_b", 1e-3);
    if (!(h > 0)) throw Error(ErrorKind::Parse, "h_b must be positive");
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return (fp.is_absolute() ? fp : std::filesystem::path(base_dir) / fp).string();
    };
    if (kv.count("gamma_cloud") || kv.count("d_cloud")) {
      std::vector<P2> g, dc;
      if (kv.count("gamma_cloud")) g = read_point_cloud<2>(resolve(kv["gamma_cloud"]));
      if (kv.count("d_cloud")) dc = read_point_cloud<2>(resolve(kv["d_cloud"]));
      d = with_sampled_boundary<2>(d, g, dc, h);
    } else {
      d = sampled_from_pieces(d, h);
    }
  } else if (oracle != "analytic") {
    throw Error(ErrorKind::Parse, "oracle: expected analytic or sampled");
  }
  return d;
}

inline Domain2 load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open domain file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace sobext
