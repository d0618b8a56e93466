#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bknn/errors.hpp"
#include "bknn/matrix.hpp"

namespace bknn {

/// Smallest axis-aligned box containing a set of points.
struct BoundingBox {
  std::vector<double> lo, hi;

  std::size_t dim() const { return lo.size(); }

  bool contains(std::span<const double> p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

/// Componentwise min/max over all rows. Throws EmptyDatasetError for n = 0.
BoundingBox bounding_box(const Matrix& points);

enum class SplitRule { SlidingMidpoint, MedianOfCoordinates };

SplitRule split_rule_from_name(std::string_view name);
std::string_view to_string(SplitRule rule);

struct KdTreeConfig {
  std::size_t bucket_size = 8;
  SplitRule split_rule = SplitRule::SlidingMidpoint;
};

/// How a chosen cut assigns points with coordinate == cut_val. Points go to
/// the higher child except when the midpoint slid down onto the smallest
/// coordinate (the slide must make the lower child nonempty), and Positional
/// marks the all-coordinates-equal guard where the index range is halved.
enum class SplitTie : std::uint8_t { HigherChild, LowerChild, Positional };

struct SplitPlane {
  std::size_t cut_dim = 0;
  double cut_val = 0.0;
  SplitTie tie = SplitTie::HigherChild;
};

/// Choose the cut for one node. `slots` are the point rows living in the node
/// and `box` is the node's box. SlidingMidpoint cuts the longest box side at
/// its midpoint, sliding to the nearest point coordinate if a child would be
/// empty; MedianOfCoordinates cuts the dimension of maximum coordinate spread
/// at the median coordinate.
SplitPlane split_plane(const Matrix& points, std::span<const std::uint32_t> slots,
                       const BoundingBox& box, SplitRule rule);

/// One tree node in the flat pre-order array. Splitting nodes carry the cut
/// plane and the parent box's extent along the cut dimension (needed for the
/// constant-time projection-divergence update); leaves carry a [begin, end)
/// range of point slots.
struct KdNode {
  double cut_val = 0.0;
  double lower_bound = 0.0;  // node box extent along cut_dim
  double upper_bound = 0.0;
  std::int32_t cut_dim = -1;       // -1 marks a leaf
  std::uint32_t child_lower = 0;   // leaf: begin of slot range
  std::uint32_t child_higher = 0;  // leaf: end of slot range

  bool is_leaf() const { return cut_dim < 0; }
  std::uint32_t leaf_begin() const { return child_lower; }
  std::uint32_t leaf_end() const { return child_higher; }
};

/// Immutable Kd-tree over a point set. Points are stored only in leaves, in a
/// row-permuted copy of the input so each leaf's rows are contiguous. The
/// build never looks at a divergence; any decomposable divergence can be used
/// at query time.
class KdTree {
 public:
  static KdTree build(const Matrix& points, const KdTreeConfig& config = {});

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  const KdTreeConfig& config() const { return config_; }
  const BoundingBox& root_box() const { return root_box_; }

  const std::vector<KdNode>& nodes() const { return nodes_; }
  const KdNode& root() const { return nodes_.front(); }

  /// Row of the permuted point copy.
  const double* point(std::uint32_t slot) const { return points_.data() + std::size_t(slot) * d_; }
  /// Original dataset index of a permuted slot.
  std::uint32_t original_index(std::uint32_t slot) const { return to_original_[slot]; }
  std::span<const std::uint32_t> permutation() const { return to_original_; }

  std::size_t leaf_count() const;
  std::size_t split_count() const { return nodes_.size() - leaf_count(); }
  std::size_t depth() const;

 private:
  KdTree() = default;

  std::size_t n_ = 0, d_ = 0;
  KdTreeConfig config_;
  BoundingBox root_box_;
  std::vector<KdNode> nodes_;
  std::vector<double> points_;           // permuted rows, leaf-contiguous
  std::vector<std::uint32_t> to_original_;
};

}  // namespace bknn
