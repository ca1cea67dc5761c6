#pragma once

#include "ctvol/contour_tree.h"

#include <span>
#include <vector>

namespace ctvol {

/// Weights seen from both ends of every superarc.
///
/// Built from one scalar per arc, the weight of everything on the child side
/// of the arc's parent end (the amount pruning the arc would remove). Looking
/// from the child end toward the root gives the total minus the child's
/// other subtrees.
class DirectedWeights
{
public:
  DirectedWeights(const ContourTree& tree, std::span<const double> pruneWeights);

  /// Weight of the region reached from supernode s through arc a.
  double from(Id s, Id a) const;
  double total() const { return total_; }

private:
  const ContourTree& tree_;
  std::vector<double> prune_;
  std::vector<double> childSum_; // per supernode: sum over child arcs
  double total_ = 0.0;
};

struct Branch
{
  std::vector<Id> superarcs;  // monotone path, ascending in value
  Id low = kNoId;             // supernode at the bottom
  Id high = kNoId;            // supernode at the top
  Id parent = kNoId;          // rank of the parent branch (kNoId for the master)
  Id attachment = kNoId;      // supernode shared with the parent
  double weight = 0.0;        // region removed by pruning this branch; total for the master
  std::size_t rank = 0;
  Id maxSuperarc = kNoId;
};

struct BranchDecomposition
{
  std::vector<Branch> branches;  // by rank; master first
  std::vector<Id> branchOfArc;   // rank of the branch owning each superarc
};

/// Best-up/best-down branch decomposition. Every supernode with arcs on both
/// sides joins its heaviest upward and heaviest downward arc; maximal chains of
/// such joins are the branches. The master branch has the largest score (see
/// branchScore); the rest hang off it breadth-first and are ranked by weight,
/// ties going to the larger max superarc id.
BranchDecomposition decompose(const ContourTree& tree, std::span<const double> pruneWeights);

/// Smallest weight seen looking into a monotone path from its two ends; leaf
/// ends count as the whole domain.
double branchScore(const ContourTree& tree, const DirectedWeights& weights, std::span<const Id> ascendingArcs);

/// First k branches by rank (all when k exceeds the count).
std::vector<Branch> topBranches(const BranchDecomposition& d, std::size_t k);

} // namespace ctvol
