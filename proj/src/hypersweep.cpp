#include "ctvol/hypersweep.h"

#include "ctvol/parallel.h"

#include <stdexcept>

namespace ctvol {

std::array<CubicDD, 4> tetDeltas(const TetSpline& spline)
{
  const auto& p = spline.pieces;
  return {p[0], p[1] - p[0], p[2] - p[1], CubicDD::constant(spline.totalVolume) - p[2]};
}

std::vector<CubicDD> computeDeltas(const TetMesh& mesh, const VertexOrder& order,
                                            std::span<const TetSpline> splines)
{
  if (splines.size() != mesh.tetCount())
    throw std::invalid_argument("computeDeltas: one spline per tet required");
  const std::size_t n = mesh.vertexCount();

  // vertex -> (tet, slot in sweep order), grouped by vertex and ascending by tet
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const Tet& tet : mesh.tets)
    for (Id v : tet)
      ++offsets[v + 1];
  for (std::size_t v = 0; v < n; ++v)
    offsets[v + 1] += offsets[v];
  std::vector<std::pair<std::uint32_t, std::uint8_t>> incident(offsets[n]);
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t t = 0; t < mesh.tetCount(); ++t) {
      const auto sorted = sortTetVertices(mesh.tets[t], order);
      for (std::uint8_t slot = 0; slot < 4; ++slot)
        incident[cursor[sorted[slot]]++] = {static_cast<std::uint32_t>(t), slot};
    }
  }

  std::vector<CubicDD> deltas(n);
  parallelFor(n, [&](std::size_t v) {
    CubicDD sum;
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      const auto [t, slot] = incident[i];
      sum += tetDeltas(splines[t])[slot];
    }
    deltas[v] = sum;
  });
  return deltas;
}

VolumeSweep sweepVolumes(const ContourTree& tree, std::span<const CubicDD> deltas)
{
  if (deltas.size() != tree.vertexCount())
    throw std::invalid_argument("sweepVolumes: tree and deltas cover different vertex sets");

  const std::size_t sn = tree.supernodeCount();
  const std::size_t na = tree.superarcCount();

  CubicDD total;
  for (const auto& d : deltas)
    total += d;

  // subtree[s]: deltas of s and everything hanging below it (away from the root)
  std::vector<CubicDD> subtree(sn);
  std::vector<CubicDD> arcTotal(na);
  for (Id s : tree.postorder()) {
    CubicDD acc = deltas[tree.supernodeVertex(s)];
    for (Id a : tree.childArcs(s))
      acc += arcTotal[a];
    subtree[s] = acc;
    if (const Id a = tree.parentArc(s); a != kNoId) {
      for (Id r : tree.regulars(a))
        acc += deltas[r];
      arcTotal[a] = acc;
    }
  }

  VolumeSweep out;
  out.rootFunction = total;
  out.totalVolume = out.rootFunction(tree.supernodeValue(tree.root()));
  out.arcs.resize(na);
  for (std::size_t ai = 0; ai < na; ++ai) {
    const Id a = static_cast<Id>(ai);
    const auto regs = tree.regulars(a);
    const std::size_t m = regs.size();
    std::vector<double> breaks(m);
    for (std::size_t i = 0; i < m; ++i)
      breaks[i] = tree.value(regs[i]);

    std::vector<CubicDD> pieces(m + 1);
    CubicDD acc = subtree[tree.childEnd(a)];
    if (tree.childIsLow(a)) {
      // piece i holds the child subtree plus the regulars below breakpoint i
      pieces[0] = acc;
      for (std::size_t i = 0; i < m; ++i) {
        acc += deltas[regs[i]];
        pieces[i + 1] = acc;
      }
    } else {
      // child side lies above: lower side = total - (child subtree + regulars above)
      pieces[m] = total - acc;
      for (std::size_t i = m; i-- > 0;) {
        acc += deltas[regs[i]];
        pieces[i] = total - acc;
      }
    }

    SuperarcVolume& sv = out.arcs[ai];
    sv.arc = a;
    const double lo = tree.arcLowValue(a), hi = tree.arcHighValue(a);
    sv.weightAtBottom = pieces.front()(lo);
    sv.weightAtTop = pieces.back()(hi);
    const CubicDD& childSide = arcTotal[a];
    if (tree.childIsLow(a)) {
      sv.parentEndPiece = pieces.back();
      sv.pruneWeight = childSide(hi);
    } else {
      sv.parentEndPiece = pieces.front();
      sv.pruneWeight = childSide(lo);
    }
    sv.lowerSide = PiecewiseCubic(std::move(breaks), std::move(pieces));
  }
  return out;
}

NodeCountWeight countRegularNodes(const ContourTree& tree)
{
  const std::size_t na = tree.superarcCount();
  NodeCountWeight w;
  w.perArc.assign(na, 0);
  w.pruneWeight.assign(na, 0);
  for (std::size_t a = 0; a < na; ++a)
    w.perArc[a] = tree.regulars(static_cast<Id>(a)).size();
  for (std::size_t s = 0; s < tree.supernodeCount(); ++s)
    if (const Id a = tree.canonicalArc(static_cast<Id>(s)); a != kNoId)
      ++w.perArc[a];

  std::vector<std::size_t> subtree(tree.supernodeCount(), 0);
  for (Id s : tree.postorder()) {
    std::size_t count = 1;
    for (Id a : tree.childArcs(s))
      count += w.pruneWeight[a];
    subtree[s] = count;
    if (const Id a = tree.parentArc(s); a != kNoId)
      w.pruneWeight[a] = count + tree.regulars(a).size();
  }
  return w;
}

} // namespace ctvol
