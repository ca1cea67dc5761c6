#include "ctvol/verify.h"

#include "ctvol/contour_tree.h"
#include "ctvol/decomposition.h"
#include "ctvol/geometry.h"
#include "ctvol/hypersweep.h"
#include "ctvol/isosurface.h"
#include "ctvol/oracle.h"
#include "ctvol/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace ctvol::verify {

namespace {

using synthetic::Rng;

/// Tracks the worst error and the case that produced it.
struct Worst
{
  double value = 0.0;
  std::string where;

  void observe(double err, const std::function<std::string()>& describe)
  {
    if (!(err <= value)) { // also catches NaN
      value = std::isnan(err) ? INFINITY : err;
      where = describe();
    }
  }
};

CheckResult finish(std::string name, const Worst& w, double limit)
{
  CheckResult r;
  r.name = std::move(name);
  r.worst = w.value;
  r.limit = limit;
  r.passed = w.value <= limit;
  r.detail = w.where;
  return r;
}

std::string describeCase(const char* fmt, double a, double b)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

VolumeSweep sweepOf(const TetMesh& mesh, const ContourTree& tree)
{
  const VertexOrder order = buildVertexOrder(mesh);
  const auto splines = buildTetSplines(mesh, order);
  return sweepVolumes(tree, computeDeltas(mesh, order, splines));
}

/// Every monotone path from a leaf minimum to a leaf maximum.
std::vector<std::vector<Id>> leafToLeafPaths(const ContourTree& tree)
{
  std::vector<std::vector<Id>> out;
  std::vector<Id> path;
  const std::function<void(Id)> climb = [&](Id s) {
    if (tree.upArcs(s).empty()) {
      if (tree.degree(s) == 1 && !path.empty())
        out.push_back(path);
      return;
    }
    for (Id a : tree.upArcs(s)) {
      path.push_back(a);
      climb(tree.superarc(a).hi);
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < tree.supernodeCount(); ++s)
    if (tree.degree(static_cast<Id>(s)) == 1 && tree.downArcs(static_cast<Id>(s)).empty())
      climb(static_cast<Id>(s));
  return out;
}

/// Structural violations of a decomposition, or empty.
std::string decompositionViolation(const ContourTree& tree, const BranchDecomposition& d,
                                   std::span<const double> weights)
{
  const std::size_t na = tree.superarcCount();
  std::vector<int> seen(na, 0);
  std::size_t masters = 0;
  for (std::size_t r = 0; r < d.branches.size(); ++r) {
    const Branch& b = d.branches[r];
    if (b.rank != r)
      return "rank field out of order";
    if (b.superarcs.empty())
      return "empty branch";
    for (std::size_t i = 0; i < b.superarcs.size(); ++i) {
      const Id a = b.superarcs[i];
      ++seen[a];
      if (d.branchOfArc[a] != static_cast<Id>(r))
        return "branchOfArc disagrees with branch lists";
      if (i > 0 && tree.superarc(b.superarcs[i - 1]).hi != tree.superarc(a).lo)
        return "branch is not a monotone path";
    }
    if (b.low != tree.superarc(b.superarcs.front()).lo || b.high != tree.superarc(b.superarcs.back()).hi)
      return "branch end supernodes wrong";
    if (b.weight < 0)
      return "negative weight";
    if (b.parent == kNoId) {
      ++masters;
      if (r != 0)
        return "master is not rank 0";
      continue;
    }
    if (b.parent < 0 || static_cast<std::size_t>(b.parent) >= d.branches.size() || b.parent == static_cast<Id>(r))
      return "parent out of range";
    const auto onBranch = [&](const Branch& x, Id s) {
      if (x.low == s)
        return true;
      for (Id a : x.superarcs)
        if (tree.superarc(a).hi == s)
          return true;
      return false;
    };
    if (!onBranch(b, b.attachment) || !onBranch(d.branches[b.parent], b.attachment))
      return "attachment not shared with parent";
    if (r > 1) {
      const Branch& prev = d.branches[r - 1];
      if (prev.weight < b.weight || (prev.weight == b.weight && prev.maxSuperarc < b.maxSuperarc))
        return "ranking not descending by weight then max superarc";
    }
  }
  if (masters != 1)
    return "expected exactly one master";
  for (int c : seen)
    if (c != 1)
      return "branches do not partition the superarcs";

  // the master scores at least as well as every leaf-to-leaf monotone path
  const DirectedWeights dw(tree, weights);
  const double masterScore = branchScore(tree, dw, d.branches[0].superarcs);
  for (const auto& path : leafToLeafPaths(tree))
    if (branchScore(tree, dw, path) > masterScore)
      return "a leaf-to-leaf path outscores the master";
  return {};
}

} // namespace

CheckResult splineVsClip(std::uint64_t seed, std::size_t tets, std::size_t levels)
{
  Rng rng(seed);
  Worst w;
  for (std::size_t t = 0; t < tets; ++t) {
    const auto tet = synthetic::randomTet(rng);
    const TetSpline s = buildTetSpline(makeFrame(tet.positions, tet.values));
    const double lo = s.breaks[0], hi = s.breaks[3], span = hi - lo;
    for (std::size_t k = 0; k < levels; ++k) {
      const double h = lo - 0.05 * span + 1.1 * span * (static_cast<double>(k) + 0.5) / static_cast<double>(levels);
      const double ref = oracle::clipVolume(tet.positions, tet.values, h);
      w.observe(std::abs(s(h) - ref) / s.totalVolume,
                [&] { return describeCase("tet %.0f at h=%.17g", static_cast<double>(t), h); });
    }
  }
  return finish("spline-vs-clip", w, 1e-9);
}

CheckResult unitTet()
{
  const std::array<Vec3, 4> p{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  const std::array<double, 4> f{0, 1, 2, 3};
  const TetSpline s = buildTetSpline(makeFrame(p, f));
  Worst w;
  const auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  w.observe(rel(s(1.0), 1.0 / 36.0), [] { return std::string("V(1) vs 1/36"); });
  w.observe(rel(s(0.5), 1.0 / 288.0), [] { return std::string("V(0.5) vs 1/288"); });
  w.observe(rel(s(3.0), 1.0 / 6.0), [] { return std::string("V(3) vs 1/6"); });
  w.observe(rel(s(1.5), oracle::clipVolume(p, f, 1.5)), [] { return std::string("V(1.5) vs clipping"); });
  w.observe(rel(oracle::clipVolume(p, f, 1.0), 1.0 / 36.0), [] { return std::string("clipping V(1) vs 1/36"); });
  return finish("unit-tet", w, 1e-10);
}

CheckResult continuityAndCoarea(std::uint64_t seed, std::size_t tets, std::size_t samplesPerPiece)
{
  Rng rng(seed);
  Worst joins, coarea;
  for (std::size_t t = 0; t < tets; ++t) {
    const auto tet = synthetic::randomTet(rng);
    const TetSpline s = buildTetSpline(makeFrame(tet.positions, tet.values));
    const double vol = s.totalVolume;
    const auto& b = s.breaks;
    joins.observe(std::abs(s.pieces[0](b[1]) - s.pieces[1](b[1])) / vol,
                  [&] { return describeCase("tet %.0f join at hB=%.17g", static_cast<double>(t), b[1]); });
    joins.observe(std::abs(s.pieces[1](b[2]) - s.pieces[2](b[2])) / vol,
                  [&] { return describeCase("tet %.0f join at hC=%.17g", static_cast<double>(t), b[2]); });
    joins.observe(std::abs(s.pieces[0](b[0])) / vol,
                  [&] { return describeCase("tet %.0f at hA=%.17g", static_cast<double>(t), b[0]); });
    joins.observe(std::abs(s.pieces[2](b[3]) - vol) / vol,
                  [&] { return describeCase("tet %.0f at hD=%.17g", static_cast<double>(t), b[3]); });

    const double invGrad = 1.0 / norm(linearGradient(tet.positions, tet.values));
    for (std::size_t k = 0; k < 3; ++k) {
      const double width = b[k + 1] - b[k];
      if (!(width > 0))
        continue;
      const double step = 1e-6 * width;
      for (std::size_t j = 0; j < samplesPerPiece; ++j) {
        const double h = b[k] + width * (static_cast<double>(j) + 0.5) / static_cast<double>(samplesPerPiece);
        const double up = h + step, down = h - step;
        const double fd = (s.pieces[k].evaluate(up) - s.pieces[k].evaluate(down)).value() / (up - down);
        const double ref = oracle::clipArea(tet.positions, tet.values, h) * invGrad;
        coarea.observe(std::abs(fd - ref) / std::abs(ref),
                       [&] { return describeCase("tet %.0f co-area at h=%.17g", static_cast<double>(t), h); });
      }
    }
  }
  CheckResult r = finish("continuity-coarea", coarea, 1e-6);
  if (joins.value > 1e-10) {
    r.passed = false;
    r.worst = joins.value;
    r.limit = 1e-10;
    r.detail = "continuity: " + joins.where;
  } else {
    char buf[96];
    std::snprintf(buf, sizeof buf, "joins worst %.3g (limit 1e-10)", joins.value);
    r.detail = std::string(buf) + (coarea.where.empty() ? "" : "; co-area worst at " + coarea.where);
  }
  return r;
}

CheckResult conservation(std::uint64_t seed, std::size_t grids, std::size_t n)
{
  Rng rng(seed);
  Worst w;
  for (std::size_t g = 0; g < grids; ++g) {
    const TetMesh mesh = synthetic::randomGridMesh({n, n, n}, rng);
    const ContourTree tree = buildContourTree(mesh);
    const VolumeSweep sweep = sweepOf(mesh, tree);
    const double total = mesh.totalVolume();
    w.observe(std::abs(sweep.totalVolume - total) / total,
              [&] { return describeCase("grid %.0f total %.17g", static_cast<double>(g), total); });
  }
  return finish("conservation", w, 1e-9);
}

CheckResult treeContourCounts(std::uint64_t seed, std::size_t grids, std::size_t n, std::size_t thresholds)
{
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Worst w;
  for (std::size_t g = 0; g < grids; ++g) {
    const TetMesh mesh = synthetic::randomGridMesh({n, n, n}, rng);
    const ContourTree tree = buildContourTree(mesh);
    const oracle::ContourCounter counter(mesh);
    const auto [vmin, vmax] = std::minmax_element(mesh.values.begin(), mesh.values.end());
    for (std::size_t k = 0; k < thresholds; ++k) {
      double t = *vmin + (*vmax - *vmin) * u(rng);
      while (std::find(mesh.values.begin(), mesh.values.end(), t) != mesh.values.end())
        t = *vmin + (*vmax - *vmin) * u(rng);
      std::size_t straddling = 0;
      for (std::size_t a = 0; a < tree.superarcCount(); ++a)
        straddling += tree.arcLowValue(static_cast<Id>(a)) <= t && t < tree.arcHighValue(static_cast<Id>(a));
      const std::size_t ref = counter.count(t);
      w.observe(std::abs(static_cast<double>(straddling) - static_cast<double>(ref)), [&] {
        return describeCase("grid %.0f at t=%.17g", static_cast<double>(g), t);
      });
    }
  }
  return finish("tree-contour-counts", w, 0.0);
}

CheckResult hypersweepVsRegion(std::uint64_t seed, std::size_t meshes, std::size_t levels)
{
  Rng rng(seed);
  Worst w;
  for (std::size_t m = 0; m < meshes; ++m) {
    const TetMesh mesh =
        m % 2 == 0 ? synthetic::randomGridMesh({6, 6, 6}, rng) : synthetic::jitteredGridMesh({12, 11, 10}, 0.1, rng);
    const ContourTree tree = buildContourTree(mesh);
    const VolumeSweep sweep = sweepOf(mesh, tree);
    for (std::size_t a = 0; a < tree.superarcCount(); ++a) {
      const Id arc = static_cast<Id>(a);
      const double lo = tree.arcLowValue(arc), hi = tree.arcHighValue(arc);
      if (!(hi > lo))
        continue;
      for (std::size_t k = 0; k < levels; ++k) {
        const double h = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(levels);
        const double ref = oracle::regionVolume(mesh, tree, arc, h);
        const double got = sweep.arcs[a].lowerSide(h);
        w.observe(std::abs(got - ref) / std::abs(ref), [&] {
          return describeCase("mesh %.0f arc at h=%.17g", static_cast<double>(m), h) + " arc " + std::to_string(a);
        });
      }
    }
  }
  return finish("hypersweep-vs-region", w, 1e-8);
}

CheckResult decompositionInvariants(std::uint64_t seed, std::size_t trees)
{
  Rng rng(seed);
  Worst w;
  for (std::size_t i = 0; i < trees; ++i) {
    const TetMesh mesh = synthetic::randomGridMesh({4, 4, 3}, rng);
    const ContourTree tree = buildContourTree(mesh);
    const VolumeSweep sweep = sweepOf(mesh, tree);
    const NodeCountWeight counts = countRegularNodes(tree);
    std::vector<double> vol, cnt;
    for (std::size_t a = 0; a < tree.superarcCount(); ++a) {
      vol.push_back(sweep.arcs[a].pruneWeight);
      cnt.push_back(static_cast<double>(counts.pruneWeight[a]));
    }
    for (const auto* weights : {&vol, &cnt}) {
      const BranchDecomposition d = decompose(tree, *weights);
      std::string bad = decompositionViolation(tree, d, *weights);

      std::vector<double> scaled(*weights);
      for (double& x : scaled)
        x *= 3.0;
      const BranchDecomposition e = decompose(tree, scaled);
      if (bad.empty() && e.branchOfArc != d.branchOfArc)
        bad = "scaling the weights changed the decomposition";
      for (std::size_t r = 0; bad.empty() && r < d.branches.size(); ++r)
        if (d.branches[r].superarcs != e.branches[r].superarcs || d.branches[r].parent != e.branches[r].parent)
          bad = "scaling the weights changed the hierarchy";

      w.observe(bad.empty() ? 0.0 : 1.0, [&] {
        return "tree " + std::to_string(i) + (weights == &vol ? " (volume): " : " (count): ") + bad;
      });
    }
  }
  return finish("decomposition-invariants", w, 0.0);
}

CheckResult countVersusVolume()
{
  const auto strip = synthetic::twoPeakStrip(2, 10.0, 17, 0.1);
  const ContourTree tree = buildContourTree(strip.mesh);
  const VolumeSweep sweep = sweepOf(strip.mesh, tree);
  const NodeCountWeight counts = countRegularNodes(tree);
  std::vector<double> vol, cnt;
  for (std::size_t a = 0; a < tree.superarcCount(); ++a) {
    vol.push_back(sweep.arcs[a].pruneWeight);
    cnt.push_back(static_cast<double>(counts.pruneWeight[a]));
  }
  const Id largeArc = tree.parentArc(tree.supernodeOf(strip.largePeak)) != kNoId
                          ? tree.parentArc(tree.supernodeOf(strip.largePeak))
                          : tree.canonicalArc(tree.supernodeOf(strip.largePeak));
  const auto rankOf = [&](const std::vector<double>& weights) {
    return decompose(tree, weights).branchOfArc[largeArc];
  };
  const Id byVolume = rankOf(vol), byCount = rankOf(cnt);
  Worst w;
  w.observe(byVolume == 0 && byCount == 1 ? 0.0 : 1.0, [&] {
    return "large-volume peak ranked " + std::to_string(byVolume) + " by volume, " + std::to_string(byCount) +
           " by count";
  });
  CheckResult r = finish("count-vs-volume", w, 0.0);
  if (r.passed)
    r.detail = "large-volume peak ranked 0 by volume, 1 by count";
  return r;
}

CheckResult isosurfaceTopology()
{
  Worst w;
  const GridDims dims{17, 17, 17};
  const TetMesh sphere = synthetic::fieldGridMesh(dims, [](const Vec3& p) {
    const Vec3 d = p - Vec3{8, 8, 8};
    return dot(d, d);
  });
  const WeldedSurface s = weld(marchTets(sphere, 25.5));
  const long long chi = eulerCharacteristic(s);
  w.observe(chi == 2 && isClosedManifold(s) && componentCount(s) == 1 ? 0.0 : 1.0,
            [&] { return "sphere: chi " + std::to_string(chi) + ", components " + std::to_string(componentCount(s)); });

  const TetMesh bumps = synthetic::fieldGridMesh(dims, [](const Vec3& p) {
    const Vec3 a = p - Vec3{5, 8, 8}, b = p - Vec3{11.5, 8, 8};
    return std::exp(-dot(a, a) / 9.0) + 0.8 * std::exp(-dot(b, b) / 9.0);
  });
  const ContourTree tree = buildContourTree(bumps);
  // the two highest leaves are the bump tops; the lower one hangs off the saddle
  const Id top = tree.root();
  Id second = kNoId;
  for (std::size_t s = 0; s + 1 < tree.supernodeCount(); ++s)
    if (tree.upArcs(static_cast<Id>(s)).empty() && (second == kNoId || tree.supernodeValue(static_cast<Id>(s)) >
                                                                           tree.supernodeValue(second)))
      second = static_cast<Id>(s);
  const Id saddle = tree.superarc(tree.downArcs(second)[0]).lo;
  const double h = 0.5 * (tree.supernodeValue(saddle) + tree.supernodeValue(second));
  const std::size_t whole = componentCount(weld(marchTets(bumps, h)));
  const auto arc = superarcAtValue(tree, tree.supernodeVertex(top), h);
  std::size_t filtered = 0;
  bool closed = false;
  if (arc) {
    const WeldedSurface f = weld(extractSuperarcContour(bumps, tree, *arc, h));
    filtered = componentCount(f);
    closed = isClosedManifold(f) && eulerCharacteristic(f) == 2;
  }
  w.observe(whole == 2 && filtered == 1 && closed ? 0.0 : 1.0, [&] {
    return "two bumps at h=" + std::to_string(h) + ": " + std::to_string(whole) + " components unfiltered, " +
           std::to_string(filtered) + " filtered";
  });
  CheckResult r = finish("isosurface-topology", w, 0.0);
  if (r.passed)
    r.detail = "sphere chi 2 closed; two-bump filter keeps 1 of 2 components";
  return r;
}

std::vector<CheckResult> runAll(std::uint64_t seed, std::size_t tets)
{
  return {splineVsClip(seed, tets),
          unitTet(),
          continuityAndCoarea(seed + 1, std::max<std::size_t>(1, tets / 10)),
          conservation(seed + 2),
          treeContourCounts(seed + 3),
          hypersweepVsRegion(seed + 4),
          decompositionInvariants(seed + 5),
          countVersusVolume(),
          isosurfaceTopology()};
}

std::string format(const CheckResult& r)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s worst=%.3g limit=%.3g", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst,
                r.limit);
  return r.detail.empty() ? buf : std::string(buf) + " (" + r.detail + ")";
}

} // namespace ctvol::verify
