#pragma once

// Point-cloud boundary oracles backed by a Boost.Geometry R-tree.

#include <memory>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "domain.hpp"

namespace sobext {

/// Nearest-neighbour distance to a finite point cloud.
template <int D>
class PointCloud {
 public:
  using BPoint = boost::geometry::model::point<double, D, boost::geometry::cs::cartesian>;
  using Tree = boost::geometry::index::rtree<BPoint, boost::geometry::index::rstar<16>>;

  explicit PointCloud(const std::vector<Point<D>>& pts) : size_(pts.size()) {
    std::vector<BPoint> bp;
    bp.reserve(pts.size());
    for (const auto& p : pts) bp.push_back(to_boost(p));
    tree_ = std::make_shared<Tree>(bp.begin(), bp.end());
  }

  std::size_t size() const { return size_; }

  double distance(const Point<D>& p) const {
    if (size_ == 0) return kInf;
    std::vector<BPoint> out;
    tree_->query(boost::geometry::index::nearest(to_boost(p), 1), std::back_inserter(out));
    return boost::geometry::distance(out.front(), to_boost(p));
  }

  SetOracle<D> oracle() const {
    if (size_ == 0) return SetOracle<D>::empty();
    SetOracle<D> s;
    PointCloud self = *this;
    s.distance = [self](const Point<D>& p) { return self.distance(p); };
    return s;
  }

 private:
  static BPoint to_boost(const Point<D>& p) {
    BPoint b;
    set_coords(b, p, std::make_integer_sequence<int, D>{});
    return b;
  }

  template <int... I>
  static void set_coords(BPoint& b, const Point<D>& p, std::integer_sequence<int, I...>) {
    (boost::geometry::set<I>(b, p[I]), ...);
  }

  std::size_t size_ = 0;
  std::shared_ptr<const Tree> tree_;
};

/// Replace the boundary oracles of `dom` with nearest-neighbour oracles over
/// the given clouds; membership is kept.
template <int D>
Domain<D> with_sampled_boundary(Domain<D> dom, const std::vector<Point<D>>& gamma_cloud,
                                const std::vector<Point<D>>& d_cloud, double h_b) {
  dom.oracle = OracleKind::SampledBoundary;
  dom.h_b = h_b;
  dom.gamma = PointCloud<D>(gamma_cloud).oracle();
  dom.dset = PointCloud<D>(d_cloud).oracle();
  std::vector<Point<D>> all = gamma_cloud;
  all.insert(all.end(), d_cloud.begin(), d_cloud.end());
  dom.boundary = PointCloud<D>(all).oracle();
  dom.closure = closure_oracle<D>(dom.inside, dom.boundary);
  dom.dist_d_jet = nullptr;
  return dom;
}

/// Sampled counterpart of an analytic domain: boundary pieces sampled at spacing h_b.
template <int D>
Domain<D> sampled_from_pieces(const Domain<D>& dom, double h_b) {
  return with_sampled_boundary<D>(dom, sample_pieces<D>(dom.gamma_pieces, h_b), sample_pieces<D>(dom.d_pieces, h_b),
                               h_b);
}

}  // namespace sobext
