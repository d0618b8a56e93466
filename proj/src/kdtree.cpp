#include "bknn/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bknn {

BoundingBox bounding_box(const Matrix& points) {
  if (points.n == 0) throw EmptyDatasetError();
  BoundingBox box;
  box.lo.assign(points.row(0).begin(), points.row(0).end());
  box.hi = box.lo;
  for (std::size_t i = 1; i < points.n; ++i) {
    const double* row = points.row_ptr(i);
    for (std::size_t j = 0; j < points.d; ++j) {
      box.lo[j] = std::min(box.lo[j], row[j]);
      box.hi[j] = std::max(box.hi[j], row[j]);
    }
  }
  return box;
}

SplitRule split_rule_from_name(std::string_view name) {
  if (name == "sliding-midpoint") return SplitRule::SlidingMidpoint;
  if (name == "median") return SplitRule::MedianOfCoordinates;
  throw ConfigError("unknown split rule '" + std::string(name) + "' (expected sliding-midpoint or median)");
}

std::string_view to_string(SplitRule rule) {
  return rule == SplitRule::SlidingMidpoint ? "sliding-midpoint" : "median";
}

namespace {

std::pair<double, double> coord_min_max(const Matrix& points, std::span<const std::uint32_t> slots,
                                        std::size_t dim) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::uint32_t s : slots) {
    const double c = points.row_ptr(s)[dim];
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return {lo, hi};
}

SplitPlane sliding_midpoint(const Matrix& points, std::span<const std::uint32_t> slots,
                            const BoundingBox& box) {
  SplitPlane plane;
  double longest = -1.0;
  for (std::size_t j = 0; j < box.dim(); ++j) {
    const double side = box.hi[j] - box.lo[j];
    if (side > longest) {
      longest = side;
      plane.cut_dim = j;
    }
  }
  plane.cut_val = 0.5 * (box.lo[plane.cut_dim] + box.hi[plane.cut_dim]);

  const auto [cmin, cmax] = coord_min_max(points, slots, plane.cut_dim);
  if (cmin == cmax) {
    plane.cut_val = cmin;
    plane.tie = SplitTie::Positional;
  } else if (cmin >= plane.cut_val) {
    // Everything sits at or above the midpoint: slide down onto the smallest
    // coordinate and send points equal to it into the lower child.
    plane.cut_val = cmin;
    plane.tie = SplitTie::LowerChild;
  } else if (cmax < plane.cut_val) {
    plane.cut_val = cmax;
    plane.tie = SplitTie::HigherChild;
  }
  return plane;
}

SplitPlane median_of_coordinates(const Matrix& points, std::span<const std::uint32_t> slots,
                                 std::vector<double>& scratch) {
  SplitPlane plane;
  double widest = -1.0;
  for (std::size_t j = 0; j < points.d; ++j) {
    const auto [lo, hi] = coord_min_max(points, slots, j);
    if (hi - lo > widest) {
      widest = hi - lo;
      plane.cut_dim = j;
    }
  }
  scratch.clear();
  for (std::uint32_t s : slots) scratch.push_back(points.row_ptr(s)[plane.cut_dim]);
  std::nth_element(scratch.begin(), scratch.begin() + scratch.size() / 2, scratch.end());
  plane.cut_val = scratch[scratch.size() / 2];

  const auto [cmin, cmax] = coord_min_max(points, slots, plane.cut_dim);
  if (cmin == cmax) {
    plane.cut_val = cmin;
    plane.tie = SplitTie::Positional;
  } else if (cmin >= plane.cut_val) {
    // Duplicates pushed the median onto the smallest coordinate; keep the
    // lower child nonempty the same way the midpoint slide does.
    plane.cut_val = cmin;
    plane.tie = SplitTie::LowerChild;
  }
  return plane;
}

}  // namespace

SplitPlane split_plane(const Matrix& points, std::span<const std::uint32_t> slots,
                       const BoundingBox& box, SplitRule rule) {
  if (rule == SplitRule::SlidingMidpoint) return sliding_midpoint(points, slots, box);
  std::vector<double> scratch;
  return median_of_coordinates(points, slots, scratch);
}

KdTree KdTree::build(const Matrix& points, const KdTreeConfig& config) {
  if (points.n == 0) throw EmptyDatasetError();
  if (points.d == 0) throw ShapeError("points must have dimension >= 1");
  if (config.bucket_size < 1) throw ConfigError("bucket_size must be >= 1");
  if (!points.all_finite()) throw ShapeError("points contain non-finite coordinates");

  KdTree tree;
  tree.n_ = points.n;
  tree.d_ = points.d;
  tree.config_ = config;
  tree.root_box_ = bounding_box(points);

  std::vector<std::uint32_t> order(points.n);
  for (std::size_t i = 0; i < points.n; ++i) order[i] = static_cast<std::uint32_t>(i);

  tree.nodes_.reserve(2 * points.n / config.bucket_size + 2);
  std::vector<double> scratch;
  BoundingBox box = tree.root_box_;

  // Recursive build over order[begin, end). stable_partition keeps slot order
  // canonical so identical inputs produce identical trees.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t begin, std::size_t end) {
    if (end - begin <= config.bucket_size) {
      KdNode leaf;
      leaf.child_lower = static_cast<std::uint32_t>(begin);
      leaf.child_higher = static_cast<std::uint32_t>(end);
      tree.nodes_.push_back(leaf);
      return;
    }

    std::span<const std::uint32_t> slots(order.data() + begin, end - begin);
    SplitPlane plane = config.split_rule == SplitRule::SlidingMidpoint
                           ? sliding_midpoint(points, slots, box)
                           : median_of_coordinates(points, slots, scratch);

    const auto first = order.begin() + begin;
    const auto last = order.begin() + end;
    std::size_t mid;
    if (plane.tie == SplitTie::Positional) {
      mid = begin + (end - begin) / 2;
    } else if (plane.tie == SplitTie::LowerChild) {
      mid = std::stable_partition(first, last,
                                  [&](std::uint32_t s) { return points.row_ptr(s)[plane.cut_dim] <= plane.cut_val; }) -
            order.begin();
    } else {
      mid = std::stable_partition(first, last,
                                  [&](std::uint32_t s) { return points.row_ptr(s)[plane.cut_dim] < plane.cut_val; }) -
            order.begin();
    }

    const std::size_t node_id = tree.nodes_.size();
    KdNode node;
    node.cut_dim = static_cast<std::int32_t>(plane.cut_dim);
    node.cut_val = plane.cut_val;
    node.lower_bound = box.lo[plane.cut_dim];
    node.upper_bound = box.hi[plane.cut_dim];
    tree.nodes_.push_back(node);

    const double saved_hi = box.hi[plane.cut_dim];
    box.hi[plane.cut_dim] = plane.cut_val;
    tree.nodes_[node_id].child_lower = static_cast<std::uint32_t>(tree.nodes_.size());
    rec(begin, mid);
    box.hi[plane.cut_dim] = saved_hi;

    const double saved_lo = box.lo[plane.cut_dim];
    box.lo[plane.cut_dim] = plane.cut_val;
    tree.nodes_[node_id].child_higher = static_cast<std::uint32_t>(tree.nodes_.size());
    rec(mid, end);
    box.lo[plane.cut_dim] = saved_lo;
  };
  rec(0, points.n);

  // Permute rows so each leaf scans contiguous memory.
  tree.points_.resize(points.values.size());
  for (std::size_t slot = 0; slot < points.n; ++slot)
    std::copy_n(points.row_ptr(order[slot]), points.d, tree.points_.data() + slot * points.d);
  tree.to_original_ = std::move(order);
  return tree;
}

std::size_t KdTree::leaf_count() const {
  std::size_t c = 0;
  for (const KdNode& n : nodes_) c += n.is_leaf();
  return c;
}

std::size_t KdTree::depth() const {
  // Iterative depth walk; pre-order layout puts child_lower right after the parent.
  std::size_t best = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 1}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    const KdNode& node = nodes_[id];
    if (node.is_leaf()) {
      best = std::max(best, depth);
      continue;
    }
    stack.push_back({node.child_lower, depth + 1});
    stack.push_back({node.child_higher, depth + 1});
  }
  return best;
}

}  // namespace bknn
