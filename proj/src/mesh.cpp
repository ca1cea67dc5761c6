#include "ctvol/mesh.h"

#include "ctvol/compensated.h"
#include "ctvol/parallel.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctvol {

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
  : std::runtime_error(file + ":" + std::to_string(line) + ": " + what)
  , line_(line)
{
}

std::array<Vec3, 4> TetMesh::tetPositions(std::size_t t) const
{
  const Tet& k = tets[t];
  return {positions[k[0]], positions[k[1]], positions[k[2]], positions[k[3]]};
}

std::array<double, 4> TetMesh::tetValues(std::size_t t) const
{
  const Tet& k = tets[t];
  return {values[k[0]], values[k[1]], values[k[2]], values[k[3]]};
}

double TetMesh::tetVolume(std::size_t t) const
{
  const auto p = tetPositions(t);
  return ctvol::tetVolume(p[0], p[1], p[2], p[3]);
}

double TetMesh::totalVolume() const
{
  DoubleDouble sum;
  for (std::size_t t = 0; t < tets.size(); ++t)
    sum += tetVolume(t);
  return sum.value();
}

namespace {

bool isDegenerate(const std::array<Vec3, 4>& p)
{
  double longest = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      longest = std::max(longest, norm(p[i] - p[j]));
  const double det = std::abs(tripleProduct(p[0], p[1], p[2], p[3]));
  // flatness relative to the longest edge cubed
  return !(det > 1e-14 * longest * longest * longest);
}

} // namespace

void validate(const TetMesh& mesh)
{
  const std::size_t n = mesh.vertexCount();
  if (mesh.values.size() != n)
    throw DataError("value count " + std::to_string(mesh.values.size()) + " does not match vertex count " +
                    std::to_string(n));
  for (std::size_t v = 0; v < n; ++v) {
    if (!std::isfinite(mesh.values[v]))
      throw DataError("non-finite value at vertex " + std::to_string(v));
    const Vec3& p = mesh.positions[v];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      throw DataError("non-finite position at vertex " + std::to_string(v));
  }

  std::vector<std::size_t> degenerate;
  for (std::size_t t = 0; t < mesh.tetCount(); ++t) {
    const Tet& k = mesh.tets[t];
    for (int i = 0; i < 4; ++i) {
      if (k[i] < 0 || static_cast<std::size_t>(k[i]) >= n)
        throw StructuralError("tet " + std::to_string(t) + " references vertex " + std::to_string(k[i]) +
                              " outside [0, " + std::to_string(n) + ")");
      for (int j = 0; j < i; ++j)
        if (k[i] == k[j])
          throw StructuralError("tet " + std::to_string(t) + " repeats vertex " + std::to_string(k[i]));
    }
    if (isDegenerate(mesh.tetPositions(t)))
      degenerate.push_back(t);
  }
  if (!degenerate.empty()) {
    std::ostringstream msg;
    msg << degenerate.size() << " degenerate (zero-volume) tet(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(degenerate.size(), 32); ++i)
      msg << ' ' << degenerate[i];
    if (degenerate.size() > 32)
      msg << " ...";
    throw StructuralError(msg.str());
  }
}

TetMesh gridToTets(const GridDims& dims, std::span<const double> values, const Vec3& spacing)
{
  if (dims.nx < 2 || dims.ny < 2 || dims.nz < 2)
    throw std::invalid_argument("gridToTets: every dimension must be at least 2");
  if (values.size() != dims.count())
    throw std::invalid_argument("gridToTets: expected " + std::to_string(dims.count()) + " values, got " +
                                std::to_string(values.size()));

  TetMesh mesh;
  mesh.values.assign(values.begin(), values.end());
  mesh.positions.reserve(dims.count());
  for (std::size_t k = 0; k < dims.nz; ++k)
    for (std::size_t j = 0; j < dims.ny; ++j)
      for (std::size_t i = 0; i < dims.nx; ++i)
        mesh.positions.emplace_back(i * spacing.x, j * spacing.y, k * spacing.z);

  const auto index = [&](std::size_t i, std::size_t j, std::size_t k) {
    return static_cast<Id>((k * dims.ny + j) * dims.nx + i);
  };

  static constexpr std::array<std::array<int, 3>, 6> kPerms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  mesh.tets.reserve(6 * (dims.nx - 1) * (dims.ny - 1) * (dims.nz - 1));
  for (std::size_t k = 0; k + 1 < dims.nz; ++k)
    for (std::size_t j = 0; j + 1 < dims.ny; ++j)
      for (std::size_t i = 0; i + 1 < dims.nx; ++i)
        for (const auto& perm : kPerms) {
          std::array<std::size_t, 3> c{i, j, k};
          Tet tet;
          tet[0] = index(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            ++c[perm[step]];
            tet[step + 1] = index(c[0], c[1], c[2]);
          }
          const auto& p = mesh.positions;
          if (tripleProduct(p[tet[0]], p[tet[1]], p[tet[2]], p[tet[3]]) < 0)
            std::swap(tet[1], tet[2]);
          mesh.tets.push_back(tet);
        }
  return mesh;
}

TopologyGraph buildTopologyGraph(const TetMesh& mesh)
{
  static constexpr std::array<std::array<int, 2>, 6> kEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  const std::size_t n = mesh.vertexCount();

  // 12 directed half-edges per tet, each tet owning its own slots
  std::vector<std::pair<Id, Id>> half(12 * mesh.tetCount());
  parallelFor(mesh.tetCount(), [&](std::size_t t) {
    const Tet& k = mesh.tets[t];
    for (std::size_t e = 0; e < 6; ++e) {
      const Id u = k[kEdges[e][0]];
      const Id v = k[kEdges[e][1]];
      half[12 * t + 2 * e] = {u, v};
      half[12 * t + 2 * e + 1] = {v, u};
    }
  });
  std::sort(half.begin(), half.end());
  half.erase(std::unique(half.begin(), half.end()), half.end());

  TopologyGraph g;
  g.neighborOffsets.assign(n + 1, 0);
  for (const auto& [u, v] : half)
    ++g.neighborOffsets[u + 1];
  for (std::size_t v = 0; v < n; ++v)
    g.neighborOffsets[v + 1] += g.neighborOffsets[v];
  g.neighborIndices.resize(half.size());
  std::transform(half.begin(), half.end(), g.neighborIndices.begin(), [](const auto& e) { return e.second; });
  return g;
}

bool isConnected(const TopologyGraph& graph)
{
  const std::size_t n = graph.vertexCount();
  if (n == 0)
    return true;
  std::vector<char> seen(n, 0);
  std::vector<Id> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Id v = stack.back();
    stack.pop_back();
    for (Id u : graph.neighbors(v))
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
  }
  return reached == n;
}

VertexOrder buildVertexOrder(std::span<const double> values)
{
  VertexOrder order;
  const std::size_t n = values.size();
  order.sortIndex.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    order.sortIndex[i] = static_cast<Id>(i);
  std::stable_sort(order.sortIndex.begin(), order.sortIndex.end(),
                   [&](Id a, Id b) { return values[a] < values[b]; });
  order.rank.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    order.rank[order.sortIndex[i]] = static_cast<Id>(i);
  return order;
}

} // namespace ctvol
