#include "ctvol/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ctvol::oracle {

namespace {

constexpr std::array<std::array<std::size_t, 3>, 4> kFaces{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
constexpr std::array<std::array<std::size_t, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Vec3 centroid(const std::vector<Vec3>& pts)
{
  Vec3 c;
  for (const Vec3& p : pts)
    c += p;
  return c * (1.0 / static_cast<double>(pts.size()));
}

/// Orders coplanar points of a convex polygon by angle around their centroid.
std::vector<Vec3> orderPolygon(std::vector<Vec3> pts)
{
  if (pts.size() < 3)
    return pts;
  const Vec3 c = centroid(pts);
  Vec3 normal;
  for (std::size_t i = 0; i < pts.size() && norm(normal) == 0.0; ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Vec3 n = cross(pts[i] - c, pts[j] - c);
      if (norm(n) > norm(normal))
        normal = n;
    }
  if (norm(normal) == 0.0)
    return pts;
  const Vec3 u = pts[0] - c;
  const Vec3 v = cross(normal, u);
  std::vector<std::pair<double, Vec3>> keyed;
  for (const Vec3& p : pts)
    keyed.emplace_back(std::atan2(dot(p - c, v), dot(p - c, u)), p);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec3> out;
  for (const auto& [angle, p] : keyed)
    out.push_back(p);
  return out;
}

double polygonArea(const std::vector<Vec3>& ordered)
{
  if (ordered.size() < 3)
    return 0.0;
  const Vec3 c = centroid(ordered);
  double area = 0.0;
  for (std::size_t i = 0; i < ordered.size(); ++i)
    area += 0.5 * norm(cross(ordered[i] - c, ordered[(i + 1) % ordered.size()] - c));
  return area;
}

} // namespace

double ClippedPolytope::volume() const
{
  if (vertices.size() < 4)
    return 0.0;
  const Vec3 c = centroid(vertices);
  double vol = 0.0;
  for (const auto& face : faces)
    for (std::size_t i = 1; i + 1 < face.size(); ++i)
      vol += std::abs(tripleProduct(c, vertices[face[0]], vertices[face[i]], vertices[face[i + 1]])) / 6.0;
  return vol;
}

ClippedPolytope clipTet(const std::array<Vec3, 4>& p, const std::array<double, 4>& f, double h)
{
  std::vector<Vec3> pool(p.begin(), p.end());
  std::vector<double> val(f.begin(), f.end());
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> crossings;
  const auto crossing = [&](std::size_t i, std::size_t j) {
    const auto key = std::minmax(i, j);
    if (auto it = crossings.find(key); it != crossings.end())
      return it->second;
    const std::size_t a = key.first, b = key.second;
    const double t = (h - val[a]) / (val[b] - val[a]);
    pool.push_back(pool[a] + (pool[b] - pool[a]) * t);
    val.push_back(h);
    crossings.emplace(key, pool.size() - 1);
    return pool.size() - 1;
  };

  std::vector<std::vector<std::size_t>> faces;
  for (const auto& tri : kFaces) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t i = tri[k], j = tri[(k + 1) % 3];
      const bool inI = val[i] <= h, inJ = val[j] <= h;
      if (inJ) {
        if (!inI)
          out.push_back(crossing(i, j));
        out.push_back(j);
      } else if (inI) {
        out.push_back(crossing(i, j));
      }
    }
    if (out.size() >= 3)
      faces.push_back(std::move(out));
  }

  // cap face through the crossing points
  if (crossings.size() >= 3) {
    std::vector<std::size_t> cap;
    for (const auto& [key, idx] : crossings)
      cap.push_back(idx);
    std::vector<Vec3> pts;
    for (std::size_t idx : cap)
      pts.push_back(pool[idx]);
    const auto ordered = orderPolygon(pts);
    std::vector<std::size_t> face;
    for (const Vec3& q : ordered)
      for (std::size_t idx : cap)
        if (pool[idx] == q) {
          face.push_back(idx);
          break;
        }
    faces.push_back(std::move(face));
  }

  // keep only referenced vertices
  ClippedPolytope poly;
  std::vector<std::size_t> remap(pool.size(), SIZE_MAX);
  for (auto& face : faces) {
    for (auto& idx : face) {
      if (remap[idx] == SIZE_MAX) {
        remap[idx] = poly.vertices.size();
        poly.vertices.push_back(pool[idx]);
      }
      idx = remap[idx];
    }
  }
  poly.faces = std::move(faces);
  return poly;
}

double clipVolume(const std::array<Vec3, 4>& p, const std::array<double, 4>& f, double h)
{
  const double lo = *std::min_element(f.begin(), f.end());
  const double hi = *std::max_element(f.begin(), f.end());
  if (h < lo)
    return 0.0;
  if (h >= hi)
    return std::abs(tripleProduct(p[0], p[1], p[2], p[3])) / 6.0;
  return clipTet(p, f, h).volume();
}

double clipArea(const std::array<Vec3, 4>& p, const std::array<double, 4>& f, double h)
{
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < 4; ++i)
    if (f[i] == h)
      pts.push_back(p[i]);
  for (const auto& e : kTetEdges) {
    const double fa = f[e[0]] - h, fb = f[e[1]] - h;
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const double t = -fa / (fb - fa);
      pts.push_back(p[e[0]] + (p[e[1]] - p[e[0]]) * t);
    }
  }
  return polygonArea(orderPolygon(std::move(pts)));
}

double regionVolume(const TetMesh& mesh, const ContourTree& tree, Id arc, double h)
{
  const std::size_t n = mesh.vertexCount();
  std::vector<char> lower(n, 0);

  // supernodes reachable from the arc's lower end without crossing the arc
  std::vector<char> seen(tree.supernodeCount(), 0);
  std::vector<Id> stack{tree.superarc(arc).lo};
  seen[tree.superarc(arc).lo] = 1;
  std::vector<Id> arcs;
  while (!stack.empty()) {
    const Id s = stack.back();
    stack.pop_back();
    lower[tree.supernodeVertex(s)] = 1;
    for (const auto list : {tree.upArcs(s), tree.downArcs(s)})
      for (Id a : list) {
        if (a == arc)
          continue;
        const Id t = tree.otherEnd(a, s);
        if (seen[t])
          continue;
        seen[t] = 1;
        arcs.push_back(a);
        stack.push_back(t);
      }
  }
  for (Id a : arcs)
    for (Id r : tree.regulars(a))
      lower[r] = 1;
  for (Id r : tree.regulars(arc))
    if (tree.value(r) <= h)
      lower[r] = 1;

  double volume = 0.0;
  for (std::size_t t = 0; t < mesh.tetCount(); ++t) {
    const Tet& k = mesh.tets[t];
    const int inside = lower[k[0]] + lower[k[1]] + lower[k[2]] + lower[k[3]];
    if (inside == 0)
      continue;
    volume += inside == 4 ? mesh.tetVolume(t) : clipVolume(mesh.tetPositions(t), mesh.tetValues(t), h);
  }
  return volume;
}

ContourCounter::ContourCounter(const TetMesh& mesh) : mesh_(mesh)
{
  std::vector<std::pair<std::array<Id, 3>, std::size_t>> faces;
  faces.reserve(4 * mesh.tetCount());
  for (std::size_t t = 0; t < mesh.tetCount(); ++t)
    for (const auto& tri : kFaces) {
      std::array<Id, 3> key{mesh.tets[t][tri[0]], mesh.tets[t][tri[1]], mesh.tets[t][tri[2]]};
      std::sort(key.begin(), key.end());
      faces.emplace_back(key, t);
    }
  std::sort(faces.begin(), faces.end());
  for (std::size_t i = 0; i + 1 < faces.size(); ++i)
    if (faces[i].first == faces[i + 1].first) {
      faceNeighbors_.emplace_back(faces[i].second, faces[i + 1].second);
      sharedFaces_.push_back(faces[i].first);
    }
}

std::size_t ContourCounter::count(double h) const
{
  const auto& values = mesh_.values;
  const std::size_t nt = mesh_.tetCount();
  std::vector<char> straddles(nt, 0);
  std::vector<std::size_t> parent(nt);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  std::size_t components = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    int below = 0;
    for (Id v : mesh_.tets[t])
      below += values[v] <= h;
    straddles[t] = below > 0 && below < 4;
    components += straddles[t];
  }
  for (std::size_t i = 0; i < faceNeighbors_.size(); ++i) {
    const auto [s, t] = faceNeighbors_[i];
    if (!straddles[s] || !straddles[t])
      continue;
    int below = 0;
    for (Id v : sharedFaces_[i])
      below += values[v] <= h;
    if (below == 0 || below == 3)
      continue;
    const std::size_t a = find(s), b = find(t);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

std::size_t referenceContourCount(const TetMesh& mesh, double h) { return ContourCounter(mesh).count(h); }

} // namespace ctvol::oracle
