#pragma once

#include "ctvol/mesh.h"

#include <optional>
#include <span>
#include <vector>

namespace ctvol {

/// Augmented merge tree: one parent per vertex, kNoId at the root.
/// Join trees point downward (root = global minimum), split trees upward.
struct MergeTree
{
  std::vector<Id> parent;
  Id root = kNoId;
};

MergeTree buildJoinTree(const TopologyGraph& graph, const VertexOrder& order);
MergeTree buildSplitTree(const TopologyGraph& graph, const VertexOrder& order);

struct Superarc
{
  Id lo = kNoId; // supernode id of the lower end
  Id hi = kNoId; // supernode id of the upper end
};

/// Contour tree with full augmentation.
///
/// Supernodes are numbered by ascending vertex rank; superarcs by (lo, hi).
/// The tree is rooted at the global maximum: every other supernode has a
/// parent arc leading toward it, and that parent arc is also the canonical arc
/// the supernode is assigned to. The root is assigned to its lowest-numbered arc.
class ContourTree
{
public:
  std::size_t supernodeCount() const { return supernodes_.size(); }
  std::size_t superarcCount() const { return superarcs_.size(); }
  std::size_t vertexCount() const { return arcOf_.size(); }

  Id supernodeVertex(Id s) const { return supernodes_[s]; }
  double supernodeValue(Id s) const { return values_[supernodes_[s]]; }
  const Superarc& superarc(Id a) const { return superarcs_[a]; }
  double arcLowValue(Id a) const { return supernodeValue(superarcs_[a].lo); }
  double arcHighValue(Id a) const { return supernodeValue(superarcs_[a].hi); }

  /// Regular vertices interior to arc a, ascending in the vertex order.
  std::span<const Id> regulars(Id a) const
  {
    return {regularIndices_.data() + regularOffsets_[a], regularOffsets_[a + 1] - regularOffsets_[a]};
  }

  Id arcOf(Id v) const { return arcOf_[v]; }
  /// Supernode id of vertex v, or kNoId for regular vertices.
  Id supernodeOf(Id v) const { return supernodeOf_[v]; }
  double value(Id v) const { return values_[v]; }
  std::span<const double> values() const { return values_; }

  std::span<const Id> upArcs(Id s) const { return upArcs_[s]; }
  std::span<const Id> downArcs(Id s) const { return downArcs_[s]; }
  std::size_t degree(Id s) const { return upArcs_[s].size() + downArcs_[s].size(); }

  Id root() const { return root_; }
  /// Arc from s toward the root (kNoId for the root itself).
  Id parentArc(Id s) const { return parentArc_[s]; }
  /// The end of arc a that is farther from the root.
  Id childEnd(Id a) const;
  Id parentEnd(Id a) const;
  bool childIsLow(Id a) const { return childEnd(a) == superarcs_[a].lo; }
  /// Supernodes ordered so that every node appears before its parent.
  std::span<const Id> postorder() const { return postorder_; }
  /// Number of arcs between s and the root.
  std::size_t depth(Id s) const { return depth_[s]; }
  /// Arcs whose parent end is s.
  std::vector<Id> childArcs(Id s) const;

  /// Arc at the other end of a from supernode s.
  Id otherEnd(Id a, Id s) const { return superarcs_[a].lo == s ? superarcs_[a].hi : superarcs_[a].lo; }

  /// Canonical arc (parent arc rule) a supernode is counted with.
  Id canonicalArc(Id s) const { return s == root_ ? rootArc_ : parentArc_[s]; }

  friend ContourTree mergeTrees(const MergeTree& join, const MergeTree& split, const VertexOrder& order,
                                std::span<const double> values);

private:
  void finalize(const VertexOrder& order);

  std::vector<double> values_;
  std::vector<Id> supernodes_;
  std::vector<Id> supernodeOf_;
  std::vector<Superarc> superarcs_;
  std::vector<std::size_t> regularOffsets_;
  std::vector<Id> regularIndices_;
  std::vector<Id> arcOf_;
  std::vector<std::vector<Id>> upArcs_;
  std::vector<std::vector<Id>> downArcs_;
  Id root_ = kNoId;
  Id rootArc_ = kNoId;
  std::vector<Id> parentArc_;
  std::vector<Id> postorder_;
  std::vector<std::size_t> depth_;
};

/// Leaf-pruning merge of augmented join and split trees over the same vertices.
/// Throws std::logic_error when the inputs are inconsistent.
ContourTree mergeTrees(const MergeTree& join, const MergeTree& split, const VertexOrder& order,
                       std::span<const double> values);

/// Graph -> join/split -> merged tree. The graph must be connected.
ContourTree buildContourTree(const TopologyGraph& graph, const VertexOrder& order, std::span<const double> values);
ContourTree buildContourTree(const TetMesh& mesh);

/// Arc whose value interval holds h along the monotone walk from the seed.
/// Intervals are [lo, hi) so a supernode value selects the arc above it.
/// Returns nullopt when h is unreachable or when the walk would have to choose
/// between several arcs (branching saddle on the way).
std::optional<Id> superarcAtValue(const ContourTree& tree, Id seedVertex, double h);

/// Arc holding level h on the tree path between the positions of two vertices
/// with value(below) <= h < value(above), e.g. the two ends of a mesh edge
/// crossing h. The path between such vertices is monotone so the answer is unique.
Id superarcBetween(const ContourTree& tree, Id below, Id above, double h);

/// Local extrema of the field on the graph under the (value, index) order.
struct ExtremaCount
{
  std::size_t minima = 0;
  std::size_t maxima = 0;
};
ExtremaCount countLocalExtrema(const TopologyGraph& graph, const VertexOrder& order);

} // namespace ctvol
