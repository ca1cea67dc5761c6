#pragma once

#include "ctvol/vec3.h"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctvol {

using Id = std::int64_t;
inline constexpr Id kNoId = -1;

using Tet = std::array<Id, 4>;

/// Malformed input text; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Connectivity problems: indices out of range, repeated vertices, degenerate tets.
class StructuralError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise unusable scalar data.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Tetrahedral mesh carrying one scalar value per vertex.
struct TetMesh
{
  std::vector<Vec3> positions;
  std::vector<double> values;
  std::vector<Tet> tets;

  std::size_t vertexCount() const { return positions.size(); }
  std::size_t tetCount() const { return tets.size(); }

  std::array<Vec3, 4> tetPositions(std::size_t t) const;
  std::array<double, 4> tetValues(std::size_t t) const;
  double tetVolume(std::size_t t) const;
  double totalVolume() const;
};

/// Checks every TetMesh invariant and throws the matching error type.
/// Degenerate tets are reported together, by index.
void validate(const TetMesh& mesh);

/// Where the scalar field comes from when reading a TetGen pair.
struct FieldSource
{
  std::optional<std::filesystem::path> valuesFile;
  std::optional<std::size_t> attribute;

  static FieldSource file(std::filesystem::path p) { return {std::move(p), std::nullopt}; }
  static FieldSource attr(std::size_t k) { return {std::nullopt, k}; }
};

TetMesh loadTetgen(const std::filesystem::path& nodePath, const std::filesystem::path& elePath,
                   const FieldSource& field);

/// Writes a .node/.ele pair (1-based, values as attribute 0).
void writeTetgen(const TetMesh& mesh, const std::filesystem::path& nodePath,
                 const std::filesystem::path& elePath);

std::vector<double> readValuesFile(const std::filesystem::path& path);
std::vector<double> readRawGrid(const std::filesystem::path& path, std::size_t expectedCount);

struct GridDims
{
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;
  std::size_t count() const { return nx * ny * nz; }
};

/// Kuhn split of every grid cube into six positively oriented tets sharing the
/// (0,0,0)-(1,1,1) diagonal. Values are x-fastest.
TetMesh gridToTets(const GridDims& dims, std::span<const double> values, const Vec3& spacing = {1, 1, 1});

/// Per-vertex sorted neighbour lists in prefix (CSR) layout.
struct TopologyGraph
{
  std::vector<std::size_t> neighborOffsets;
  std::vector<Id> neighborIndices;

  std::size_t vertexCount() const { return neighborOffsets.empty() ? 0 : neighborOffsets.size() - 1; }
  std::span<const Id> neighbors(Id v) const
  {
    return {neighborIndices.data() + neighborOffsets[v], neighborOffsets[v + 1] - neighborOffsets[v]};
  }
  std::size_t degree(Id v) const { return neighborOffsets[v + 1] - neighborOffsets[v]; }
  std::size_t edgeCount() const { return neighborIndices.size() / 2; }
};

TopologyGraph buildTopologyGraph(const TetMesh& mesh);

/// True iff every vertex is reachable from vertex 0.
bool isConnected(const TopologyGraph& graph);

/// Total order on vertices by (value, index).
struct VertexOrder
{
  std::vector<Id> sortIndex;
  std::vector<Id> rank;

  std::size_t size() const { return sortIndex.size(); }
  bool less(Id u, Id v) const { return rank[u] < rank[v]; }
};

VertexOrder buildVertexOrder(std::span<const double> values);
inline VertexOrder buildVertexOrder(const TetMesh& mesh) { return buildVertexOrder(mesh.values); }

} // namespace ctvol
