#pragma once

#include "ctvol/contour_tree.h"
#include "ctvol/mesh.h"

#include <array>
#include <map>
#include <vector>

namespace ctvol::oracle {

/// Convex region {f <= h} of one tet as an explicit face list.
struct ClippedPolytope
{
  std::vector<Vec3> vertices;
  std::vector<std::vector<std::size_t>> faces;

  double volume() const;
};

ClippedPolytope clipTet(const std::array<Vec3, 4>& p, const std::array<double, 4>& f, double h);

/// Volume of {f <= h} inside the tet, measured on the clipped polytope.
double clipVolume(const std::array<Vec3, 4>& p, const std::array<double, 4>& f, double h);

/// Area of the cross-section polygon {f = h}.
double clipArea(const std::array<Vec3, 4>& p, const std::array<double, 4>& f, double h);

/// Volume of the part of the domain on the lower side of the contour that sits
/// at level h on superarc `arc`. Built from the tree's vertex partition and
/// clipVolume alone; intended for small meshes.
double regionVolume(const TetMesh& mesh, const ContourTree& tree, Id arc, double h);

/// Counts level-set components at h by union-find over tets that straddle h,
/// joined through shared faces that also straddle it. Vertices with f <= h are
/// on the lower side.
class ContourCounter
{
public:
  explicit ContourCounter(const TetMesh& mesh);
  std::size_t count(double h) const;

private:
  const TetMesh& mesh_;
  std::vector<std::pair<std::size_t, std::size_t>> faceNeighbors_;
  std::vector<std::array<Id, 3>> sharedFaces_;
};

std::size_t referenceContourCount(const TetMesh& mesh, double h);

} // namespace ctvol::oracle
