#pragma once

#include "ctvol/contour_tree.h"
#include "ctvol/mesh.h"

#include <filesystem>
#include <string>
#include <vector>

namespace ctvol {

/// Unshared triangles from marching tetrahedra. Each triangle records the tet
/// it came from and, once labelled, the superarc of its contour.
struct TriangleSoup
{
  std::vector<Vec3> positions;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<Id> sourceTet;
  std::vector<Id> superarc;
  /// Set when h lies outside the field range; the soup is then empty.
  bool outOfRange = false;

  std::size_t triangleCount() const { return triangles.size(); }
  double area() const;
};

/// Level set {f = h} with vertices at f <= h on the lower side. Triangles are
/// wound so their normals point toward increasing f and appear in tet order.
TriangleSoup marchTets(const TetMesh& mesh, double h);

/// Labels every triangle with the superarc holding its contour.
void labelSuperarcs(TriangleSoup& soup, const TetMesh& mesh, const ContourTree& tree, double h);

/// Triangles of the single contour on arc `arc` at level h. Throws
/// std::invalid_argument when h lies outside the arc's [lo, hi) interval.
TriangleSoup extractSuperarcContour(const TetMesh& mesh, const ContourTree& tree, Id arc, double h);

/// Triangle soup with coincident vertices merged.
struct WeldedSurface
{
  std::vector<Vec3> positions;
  std::vector<std::array<std::size_t, 3>> triangles;
};

/// Merges vertices closer than `tolerance` (per coordinate, after snapping
/// to a grid of that spacing) and drops triangles that collapse.
WeldedSurface weld(const TriangleSoup& soup, double tolerance = 1e-9);

long long eulerCharacteristic(const WeldedSurface& surface);
std::size_t componentCount(const WeldedSurface& surface);
/// Every edge is shared by exactly two triangles.
bool isClosedManifold(const WeldedSurface& surface);

/// One OBJ group per superarc label, optionally with a material per group.
struct ObjGroup
{
  std::string name;
  std::string material;
  const TriangleSoup* soup = nullptr;
};
void writeObj(const std::filesystem::path& path, const std::vector<ObjGroup>& groups,
              const std::string& mtlLibrary = {});
void writeObj(const std::filesystem::path& path, const TriangleSoup& soup);

/// Flat diffuse materials branch_0 .. branch_<count-1>, cycling a fixed palette.
void writeBranchMtl(const std::filesystem::path& path, std::size_t count);

struct ObjData
{
  std::vector<Vec3> positions;
  std::vector<std::array<std::size_t, 3>> triangles; // 0-based
};
ObjData readObj(const std::filesystem::path& path);

} // namespace ctvol
