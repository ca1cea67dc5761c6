#include "ctvol/isosurface.h"

#include "ctvol/geometry.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ctvol {

namespace {

/// Level-h point on the edge between two mesh vertices, computed from the
/// lower-indexed end so shared edges give identical coordinates.
Vec3 edgePoint(const TetMesh& mesh, Id u, Id v, double h)
{
  if (u > v)
    std::swap(u, v);
  const double fu = mesh.values[u], fv = mesh.values[v];
  return lerp(mesh.positions[u], mesh.positions[v], (h - fu) / (fv - fu));
}

/// Appends the 0, 1 or 2 triangles of tet t.
void marchOne(const TetMesh& mesh, std::size_t t, double h, TriangleSoup& soup)
{
  const Tet& tet = mesh.tets[t];
  std::array<Id, 4> below{}, above{};
  std::size_t nb = 0, na = 0;
  for (Id v : tet)
    (mesh.values[v] <= h ? below[nb++] : above[na++]) = v;
  if (nb == 0 || na == 0)
    return;

  std::vector<Vec3> poly;
  if (nb == 1) {
    for (std::size_t i = 0; i < 3; ++i)
      poly.push_back(edgePoint(mesh, below[0], above[i], h));
  } else if (na == 1) {
    for (std::size_t i = 0; i < 3; ++i)
      poly.push_back(edgePoint(mesh, below[i], above[0], h));
  } else {
    poly = {edgePoint(mesh, below[0], above[0], h), edgePoint(mesh, below[0], above[1], h),
            edgePoint(mesh, below[1], above[1], h), edgePoint(mesh, below[1], above[0], h)};
  }

  const Vec3 g = linearGradient(mesh.tetPositions(t), mesh.tetValues(t));
  const bool flip = dot(cross(poly[1] - poly[0], poly[2] - poly[0]), g) < 0;
  const std::size_t base = soup.positions.size();
  soup.positions.insert(soup.positions.end(), poly.begin(), poly.end());
  const auto emit = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (flip)
      std::swap(b, c);
    soup.triangles.push_back({base + a, base + b, base + c});
    soup.sourceTet.push_back(static_cast<Id>(t));
    soup.superarc.push_back(kNoId);
  };
  emit(0, 1, 2);
  if (poly.size() == 4)
    emit(0, 2, 3);
}

bool outsideRange(const TetMesh& mesh, double h)
{
  if (mesh.values.empty())
    return true;
  const auto [lo, hi] = std::minmax_element(mesh.values.begin(), mesh.values.end());
  return h < *lo || h >= *hi;
}

/// Arc of the contour crossing tet t at level h: take the highest vertex at
/// or below h and the lowest above it; they share an edge of the tet.
Id tetArc(const TetMesh& mesh, const ContourTree& tree, std::size_t t, double h)
{
  Id below = kNoId, above = kNoId;
  const auto& f = mesh.values;
  for (Id v : mesh.tets[t]) {
    if (f[v] <= h) {
      if (below == kNoId || f[v] > f[below] || (f[v] == f[below] && v > below))
        below = v;
    } else if (above == kNoId || f[v] < f[above] || (f[v] == f[above] && v < above)) {
      above = v;
    }
  }
  return superarcBetween(tree, below, above, h);
}

} // namespace

double TriangleSoup::area() const
{
  double sum = 0.0;
  for (const auto& tri : triangles)
    sum += 0.5 * norm(cross(positions[tri[1]] - positions[tri[0]], positions[tri[2]] - positions[tri[0]]));
  return sum;
}

TriangleSoup marchTets(const TetMesh& mesh, double h)
{
  TriangleSoup soup;
  if (outsideRange(mesh, h)) {
    soup.outOfRange = true;
    return soup;
  }
  for (std::size_t t = 0; t < mesh.tetCount(); ++t)
    marchOne(mesh, t, h, soup);
  return soup;
}

void labelSuperarcs(TriangleSoup& soup, const TetMesh& mesh, const ContourTree& tree, double h)
{
  Id lastTet = kNoId, lastArc = kNoId;
  for (std::size_t i = 0; i < soup.triangles.size(); ++i) {
    if (soup.sourceTet[i] != lastTet) {
      lastTet = soup.sourceTet[i];
      lastArc = tetArc(mesh, tree, static_cast<std::size_t>(lastTet), h);
    }
    soup.superarc[i] = lastArc;
  }
}

TriangleSoup extractSuperarcContour(const TetMesh& mesh, const ContourTree& tree, Id arc, double h)
{
  if (arc < 0 || static_cast<std::size_t>(arc) >= tree.superarcCount())
    throw std::invalid_argument("extractSuperarcContour: no such superarc");
  const double lo = tree.arcLowValue(arc), hi = tree.arcHighValue(arc);
  if (!(h >= lo && h < hi)) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "extractSuperarcContour: isovalue %.17g outside superarc %lld range [%.17g, %.17g)",
                  h, static_cast<long long>(arc), lo, hi);
    throw std::invalid_argument(msg);
  }

  TriangleSoup soup;
  const auto& f = mesh.values;
  for (std::size_t t = 0; t < mesh.tetCount(); ++t) {
    const Tet& k = mesh.tets[t];
    int nb = 0;
    for (Id v : k)
      nb += f[v] <= h;
    if (nb == 0 || nb == 4)
      continue;
    if (tetArc(mesh, tree, t, h) != arc)
      continue;
    const std::size_t first = soup.triangles.size();
    marchOne(mesh, t, h, soup);
    for (std::size_t i = first; i < soup.triangles.size(); ++i)
      soup.superarc[i] = arc;
  }
  return soup;
}

WeldedSurface weld(const TriangleSoup& soup, double tolerance)
{
  if (!(tolerance > 0))
    throw std::invalid_argument("weld: tolerance must be positive");
  using Key = std::array<long long, 3>;
  struct KeyHash
  {
    std::size_t operator()(const Key& k) const
    {
      std::size_t h = 1469598103934665603ull;
      for (long long c : k)
        h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_map<Key, std::size_t, KeyHash> cells;
  WeldedSurface out;
  std::vector<std::size_t> remap(soup.positions.size());
  const auto snap = [&](double c) { return static_cast<long long>(std::llround(c / tolerance)); };
  for (std::size_t i = 0; i < soup.positions.size(); ++i) {
    const Vec3& p = soup.positions[i];
    const Key base{snap(p.x), snap(p.y), snap(p.z)};
    std::size_t found = SIZE_MAX;
    // search the cell and its 26 neighbours
    for (long long dx = -1; dx <= 1 && found == SIZE_MAX; ++dx)
      for (long long dy = -1; dy <= 1 && found == SIZE_MAX; ++dy)
        for (long long dz = -1; dz <= 1 && found == SIZE_MAX; ++dz) {
          const auto it = cells.find({base[0] + dx, base[1] + dy, base[2] + dz});
          if (it == cells.end())
            continue;
          const Vec3 d = out.positions[it->second] - p;
          if (std::abs(d.x) <= tolerance && std::abs(d.y) <= tolerance && std::abs(d.z) <= tolerance)
            found = it->second;
        }
    if (found == SIZE_MAX) {
      found = out.positions.size();
      out.positions.push_back(p);
      cells.emplace(base, found);
    }
    remap[i] = found;
  }
  for (const auto& tri : soup.triangles) {
    const std::array<std::size_t, 3> t{remap[tri[0]], remap[tri[1]], remap[tri[2]]};
    if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
      out.triangles.push_back(t);
  }
  return out;
}

namespace {

std::map<std::pair<std::size_t, std::size_t>, int> edgeUse(const WeldedSurface& s)
{
  std::map<std::pair<std::size_t, std::size_t>, int> use;
  for (const auto& t : s.triangles)
    for (std::size_t k = 0; k < 3; ++k)
      ++use[std::minmax(t[k], t[(k + 1) % 3])];
  return use;
}

} // namespace

long long eulerCharacteristic(const WeldedSurface& surface)
{
  std::vector<char> used(surface.positions.size(), 0);
  for (const auto& t : surface.triangles)
    for (std::size_t v : t)
      used[v] = 1;
  const long long v = std::count(used.begin(), used.end(), 1);
  const long long e = static_cast<long long>(edgeUse(surface).size());
  return v - e + static_cast<long long>(surface.triangles.size());
}

std::size_t componentCount(const WeldedSurface& surface)
{
  std::vector<std::size_t> parent(surface.positions.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> used(surface.positions.size(), 0);
  for (const auto& t : surface.triangles) {
    for (std::size_t v : t)
      used[v] = 1;
    parent[find(t[1])] = find(t[0]);
    parent[find(t[2])] = find(t[0]);
  }
  std::size_t roots = 0;
  for (std::size_t v = 0; v < parent.size(); ++v)
    roots += used[v] && find(v) == v;
  return roots;
}

bool isClosedManifold(const WeldedSurface& surface)
{
  for (const auto& [edge, n] : edgeUse(surface))
    if (n != 2)
      return false;
  return true;
}

void writeObj(const std::filesystem::path& path, const std::vector<ObjGroup>& groups, const std::string& mtlLibrary)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << "# isosurface\n";
  if (!mtlLibrary.empty())
    out << "mtllib " << mtlLibrary << "\n";
  char buf[96];
  std::size_t offset = 1;
  for (const ObjGroup& g : groups) {
    if (g.soup == nullptr || g.soup->triangles.empty())
      continue;
    out << "o " << g.name << "\n";
    if (!g.material.empty())
      out << "usemtl " << g.material << "\n";
    for (const Vec3& p : g.soup->positions) {
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
      out << buf;
    }
    for (const auto& t : g.soup->triangles)
      out << "f " << t[0] + offset << ' ' << t[1] + offset << ' ' << t[2] + offset << "\n";
    offset += g.soup->positions.size();
  }
  if (!out)
    throw std::runtime_error("error writing " + path.string());
}

void writeObj(const std::filesystem::path& path, const TriangleSoup& soup)
{
  writeObj(path, {ObjGroup{"isosurface", {}, &soup}});
}

void writeBranchMtl(const std::filesystem::path& path, std::size_t count)
{
  static constexpr std::array<std::array<double, 3>, 8> kPalette{{{0.85, 0.15, 0.15},
                                                                  {0.15, 0.45, 0.85},
                                                                  {0.20, 0.70, 0.25},
                                                                  {0.95, 0.60, 0.10},
                                                                  {0.60, 0.30, 0.75},
                                                                  {0.10, 0.70, 0.70},
                                                                  {0.85, 0.40, 0.65},
                                                                  {0.55, 0.55, 0.55}}};
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  char buf[96];
  for (std::size_t r = 0; r < count; ++r) {
    const auto& c = kPalette[r % kPalette.size()];
    std::snprintf(buf, sizeof buf, "newmtl branch_%zu\nKd %.2f %.2f %.2f\n", r, c[0], c[1], c[2]);
    out << buf;
  }
  if (!out)
    throw std::runtime_error("error writing " + path.string());
}

ObjData readObj(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  ObjData data;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag))
      continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z))
        throw ParseError(path.string(), lineNo, "bad vertex");
      data.positions.push_back(p);
    } else if (tag == "f") {
      std::array<std::size_t, 3> t{};
      for (auto& idx : t) {
        std::string tok;
        if (!(ls >> tok))
          throw ParseError(path.string(), lineNo, "face needs three vertices");
        const long long i = std::stoll(tok.substr(0, tok.find('/')));
        if (i < 1 || static_cast<std::size_t>(i) > data.positions.size())
          throw ParseError(path.string(), lineNo, "face index out of range");
        idx = static_cast<std::size_t>(i - 1);
      }
      data.triangles.push_back(t);
    }
  }
  return data;
}

} // namespace ctvol
