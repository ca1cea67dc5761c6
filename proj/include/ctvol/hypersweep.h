#pragma once

#include "ctvol/contour_tree.h"
#include "ctvol/cubic.h"
#include "ctvol/geometry.h"

#include <span>
#include <vector>

namespace ctvol {

/// Coefficient changes of one tet's V(h) as the sweep passes A, B, C, D:
/// piece-after minus piece-before, with 0 below A and the constant total above D.
std::array<CubicDD, 4> tetDeltas(const TetSpline& spline);

/// Sum of all tet deltas at each vertex, reduced in ascending tet order.
std::vector<CubicDD> computeDeltas(const TetMesh& mesh, const VertexOrder& order,
                                            std::span<const TetSpline> splines);

/// Volume function of one superarc.
struct SuperarcVolume
{
  Id arc = kNoId;
  /// Volume on the lower side of the contour at level h on this arc; the
  /// breakpoints are the values of the arc's regular vertices.
  PiecewiseCubic lowerSide;
  /// One-sided limits of lowerSide at the arc's end values.
  double weightAtBottom = 0.0;
  double weightAtTop = 0.0;
  /// Volume cut off at the parent end: everything on the child side.
  double pruneWeight = 0.0;
  /// The piece of lowerSide next to the parent end.
  CubicDD parentEndPiece;
};

struct VolumeSweep
{
  std::vector<SuperarcVolume> arcs;
  /// Sum of every vertex delta; a constant polynomial up to rounding.
  CubicDD rootFunction;
  double totalVolume = 0.0;
};

/// Leaf-to-root accumulation of vertex deltas over the tree rooted at the
/// global maximum. Arcs whose child end is their upper end are reported
/// through total minus child side.
VolumeSweep sweepVolumes(const ContourTree& tree, std::span<const CubicDD> deltas);

/// Regular-node-count weights.
struct NodeCountWeight
{
  /// Regular vertices plus canonically assigned supernodes, per arc.
  std::vector<std::size_t> perArc;
  /// Vertices on the child side of each arc's parent end.
  std::vector<std::size_t> pruneWeight;
};

NodeCountWeight countRegularNodes(const ContourTree& tree);

} // namespace ctvol
