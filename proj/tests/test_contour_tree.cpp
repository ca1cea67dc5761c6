#include "ctvol/contour_tree.h"
#include "ctvol/oracle.h"
#include "ctvol/synthetic.h"

#include "doctest.h"
#include "test_support.h"

#include <cmath>
#include <set>

using namespace ctvol;

namespace {

ContourTree treeOf(const TopologyGraph& g, const std::vector<double>& values)
{
  return buildContourTree(g, buildVertexOrder(values), values);
}

/// Vertex pairs (low, high) of every superarc.
std::set<std::pair<Id, Id>> arcVertexPairs(const ContourTree& t)
{
  std::set<std::pair<Id, Id>> out;
  for (std::size_t a = 0; a < t.superarcCount(); ++a)
    out.emplace(t.supernodeVertex(t.superarc(a).lo), t.supernodeVertex(t.superarc(a).hi));
  return out;
}

/// Components of {rank >= r} read off the join tree against brute force, for every r.
void checkJoinTree(const TopologyGraph& g, const std::vector<double>& values)
{
  const VertexOrder o = buildVertexOrder(values);
  const MergeTree join = buildJoinTree(g, o);
  const MergeTree split = buildSplitTree(g, o);
  const auto n = static_cast<Id>(values.size());
  CHECK(join.root == o.sortIndex.front());
  CHECK(split.root == o.sortIndex.back());
  for (Id r = 0; r < n; ++r) {
    std::size_t fromJoin = 0, fromSplit = 0;
    for (Id v = 0; v < n; ++v) {
      if (o.rank[v] >= r && (join.parent[v] == kNoId || o.rank[join.parent[v]] < r))
        ++fromJoin;
      if (o.rank[v] <= r && (split.parent[v] == kNoId || o.rank[split.parent[v]] > r))
        ++fromSplit;
    }
    CHECK(fromJoin == test::inducedComponents(g, [&](Id v) { return o.rank[v] >= r; }));
    CHECK(fromSplit == test::inducedComponents(g, [&](Id v) { return o.rank[v] <= r; }));
  }
}

/// Y-shaped graph: c(0) - s(1) - a1(2) - a(3) and s - b1(2.5) - b(4).
struct YGraph
{
  static constexpr Id c = 0, s = 1, a1 = 2, a = 3, b1 = 4, b = 5;
  TopologyGraph graph = test::graphFromEdges(6, {{c, s}, {s, a1}, {a1, a}, {s, b1}, {b1, b}});
  std::vector<double> values{0, 1, 2, 3, 2.5, 4};
};

/// Superarcs whose [lo, hi) holds t.
std::size_t straddling(const ContourTree& tree, double t)
{
  std::size_t n = 0;
  for (std::size_t a = 0; a < tree.superarcCount(); ++a)
    n += tree.arcLowValue(a) <= t && t < tree.arcHighValue(a);
  return n;
}

} // namespace

TEST_CASE("path with increasing values has one arc")
{
  const ContourTree t = treeOf(test::pathGraph(3), {1, 2, 3});
  REQUIRE(t.supernodeCount() == 2);
  REQUIRE(t.superarcCount() == 1);
  CHECK(t.supernodeVertex(0) == 0);
  CHECK(t.supernodeVertex(1) == 2);
  CHECK(t.regulars(0).size() == 1);
  CHECK(t.regulars(0)[0] == 1);
  CHECK(t.arcOf(1) == 0);
  CHECK(t.supernodeOf(1) == kNoId);
  CHECK(t.root() == 1);
}

TEST_CASE("W-shaped path: merge trees match superlevel and sublevel union-find")
{
  const std::vector<double> values{1, 3, 0, 4, 2};
  const TopologyGraph g = test::pathGraph(5);
  checkJoinTree(g, values);
  const ContourTree t = treeOf(g, values);
  // a path graph is its own contour tree
  CHECK(t.supernodeCount() == 5);
  CHECK(arcVertexPairs(t) == std::set<std::pair<Id, Id>>{{0, 1}, {2, 1}, {2, 3}, {4, 3}});
}

TEST_CASE("merge trees match union-find on random graphs")
{
  synthetic::Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const TetMesh m = synthetic::randomGridMesh({4, 4, 3}, rng);
    checkJoinTree(buildTopologyGraph(m), m.values);
  }
}

TEST_CASE("K4 star: single tet is one monotone arc")
{
  const TetMesh m = test::singleTetMesh({0.3, 0.1, 0.7, 0.5});
  const ContourTree t = buildContourTree(m);
  REQUIRE(t.supernodeCount() == 2);
  REQUIRE(t.superarcCount() == 1);
  CHECK(t.supernodeVertex(0) == 1);
  CHECK(t.supernodeVertex(1) == 2);
  const auto regs = t.regulars(0);
  REQUIRE(regs.size() == 2);
  CHECK(regs[0] == 0); // ascending by value
  CHECK(regs[1] == 3);
}

TEST_CASE("split tree of f is the join tree of -f")
{
  synthetic::Rng rng(9);
  const TetMesh m = synthetic::randomGridMesh({5, 4, 4}, rng);
  const TopologyGraph g = buildTopologyGraph(m);
  std::vector<double> neg(m.values.size());
  std::transform(m.values.begin(), m.values.end(), neg.begin(), [](double v) { return -v; });
  const MergeTree split = buildSplitTree(g, buildVertexOrder(m.values));
  const MergeTree join = buildJoinTree(g, buildVertexOrder(neg));
  CHECK(split.parent == join.parent);
  CHECK(split.root == join.root);
}

TEST_CASE("negating the field mirrors the contour tree")
{
  synthetic::Rng rng(10);
  const TetMesh m = synthetic::randomGridMesh({5, 5, 4}, rng);
  TetMesh n = m;
  for (double& v : n.values)
    v = -v;
  const ContourTree t = buildContourTree(m);
  const ContourTree u = buildContourTree(n);
  CHECK(t.supernodeCount() == u.supernodeCount());
  CHECK(t.superarcCount() == u.superarcCount());
  std::set<std::pair<Id, Id>> mirrored;
  for (const auto& [lo, hi] : arcVertexPairs(u))
    mirrored.emplace(hi, lo);
  CHECK(arcVertexPairs(t) == mirrored);
}

TEST_CASE("leaves are exactly the local extrema on a random 5^3 grid")
{
  synthetic::Rng rng(21);
  const TetMesh m = synthetic::randomGridMesh({5, 5, 5}, rng);
  const TopologyGraph g = buildTopologyGraph(m);
  const VertexOrder o = buildVertexOrder(m.values);
  const ContourTree t = buildContourTree(g, o, m.values);
  const ExtremaCount ex = countLocalExtrema(g, o);
  std::size_t upLeaves = 0, downLeaves = 0;
  for (std::size_t s = 0; s < t.supernodeCount(); ++s) {
    if (t.degree(s) != 1)
      continue;
    (t.upArcs(s).empty() ? upLeaves : downLeaves) += 1;
  }
  CHECK(upLeaves == ex.maxima);
  CHECK(downLeaves == ex.minima);
}

TEST_CASE("monotone field gives two supernodes and one arc")
{
  const TetMesh m = synthetic::fieldGridMesh({5, 4, 3}, [](const Vec3& p) { return p.x + 10 * p.y + 100 * p.z; });
  const ContourTree t = buildContourTree(m);
  CHECK(t.supernodeCount() == 2);
  CHECK(t.superarcCount() == 1);
  CHECK(t.regulars(0).size() == m.vertexCount() - 2);
}

TEST_CASE("two maxima over one minimum give four supernodes and three arcs")
{
  const YGraph y;
  const ContourTree t = treeOf(y.graph, y.values);
  REQUIRE(t.supernodeCount() == 4);
  REQUIRE(t.superarcCount() == 3);
  CHECK(arcVertexPairs(t) == std::set<std::pair<Id, Id>>{{YGraph::c, YGraph::s}, {YGraph::s, YGraph::a},
                                                         {YGraph::s, YGraph::b}});
  const Id sNode = t.supernodeOf(YGraph::s);
  CHECK(t.upArcs(sNode).size() == 2);
  CHECK(t.downArcs(sNode).size() == 1);
  CHECK(t.supernodeVertex(t.root()) == YGraph::b);
  CHECK(t.arcOf(YGraph::a1) == t.arcOf(YGraph::a));
  CHECK(t.arcOf(YGraph::b1) != t.arcOf(YGraph::a1));
}

TEST_CASE("tree shape invariants on the Y graph")
{
  const YGraph y;
  const ContourTree t = treeOf(y.graph, y.values);
  // rooted at the global maximum; every other node reaches it through parent arcs
  for (std::size_t s = 0; s < t.supernodeCount(); ++s) {
    Id x = static_cast<Id>(s);
    std::size_t steps = 0;
    while (x != t.root()) {
      x = t.parentEnd(t.parentArc(x));
      ++steps;
    }
    CHECK(steps == t.depth(s));
  }
  // postorder lists children before parents
  std::vector<std::size_t> pos(t.supernodeCount());
  for (std::size_t i = 0; i < t.postorder().size(); ++i)
    pos[t.postorder()[i]] = i;
  for (std::size_t a = 0; a < t.superarcCount(); ++a)
    CHECK(pos[t.childEnd(a)] < pos[t.parentEnd(a)]);
}

TEST_CASE("9^3 distance field has the centre minimum and eight corner maxima")
{
  const TetMesh m = synthetic::fieldGridMesh({9, 9, 9}, [](const Vec3& p) { return norm(p - Vec3{4, 4, 4}); });
  const ContourTree t = buildContourTree(m);
  std::size_t leaves = 0;
  for (std::size_t s = 0; s < t.supernodeCount(); ++s)
    leaves += t.degree(s) == 1;
  CHECK(leaves == 9);
  CHECK(t.supernodeVertex(0) == (4 * 9 + 4) * 9 + 4);
}

TEST_CASE("superarcAtValue walks monotonically and refuses ambiguous walks")
{
  const YGraph y;
  const ContourTree t = treeOf(y.graph, y.values);
  const Id arcCS = t.parentArc(t.supernodeOf(YGraph::c));
  const Id arcSA = t.arcOf(YGraph::a1);
  const Id arcSB = t.arcOf(YGraph::b1);

  CHECK(superarcAtValue(t, YGraph::c, 0.5) == arcCS);
  CHECK(superarcAtValue(t, YGraph::c, 0.0) == arcCS);
  CHECK_FALSE(superarcAtValue(t, YGraph::c, 2.0).has_value()); // both upper arcs hold 2
  CHECK_FALSE(superarcAtValue(t, YGraph::c, 1.0).has_value()); // the saddle value opens both upper arcs
  CHECK(superarcAtValue(t, YGraph::a, 1.5) == arcSA);
  CHECK(superarcAtValue(t, YGraph::a, 0.5) == arcCS);
  CHECK_FALSE(superarcAtValue(t, YGraph::a, 3.5).has_value());
  CHECK(superarcAtValue(t, YGraph::a1, 2.9) == arcSA);
  CHECK(superarcAtValue(t, YGraph::b1, 1.0) == arcSB);
  CHECK(superarcAtValue(t, YGraph::b1, 3.9) == arcSB);
}

TEST_CASE("superarcBetween picks the arc on the monotone path")
{
  const YGraph y;
  const ContourTree t = treeOf(y.graph, y.values);
  CHECK(superarcBetween(t, YGraph::s, YGraph::a1, 1.5) == t.arcOf(YGraph::a1));
  CHECK(superarcBetween(t, YGraph::c, YGraph::s, 0.5) == t.arcOf(YGraph::c));
  CHECK(superarcBetween(t, YGraph::b1, YGraph::b, 3.0) == t.arcOf(YGraph::b1));
  CHECK(superarcBetween(t, YGraph::c, YGraph::b, 2.0) == t.arcOf(YGraph::b1));
}

TEST_CASE("every vertex lies on exactly one arc and arcs partition the vertices")
{
  synthetic::Rng rng(31);
  const TetMesh m = synthetic::randomGridMesh({6, 5, 4}, rng);
  const ContourTree t = buildContourTree(m);
  std::size_t regular = 0;
  for (std::size_t a = 0; a < t.superarcCount(); ++a) {
    const auto regs = t.regulars(a);
    regular += regs.size();
    for (Id v : regs) {
      CHECK(t.arcOf(v) == static_cast<Id>(a));
      CHECK(t.value(v) >= t.arcLowValue(a));
      CHECK(t.value(v) <= t.arcHighValue(a));
    }
  }
  CHECK(regular + t.supernodeCount() == m.vertexCount());
  CHECK(t.superarcCount() + 1 == t.supernodeCount());
}

TEST_CASE("straddling superarcs count the contours of random grids")
{
  synthetic::Rng rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    const TetMesh m = synthetic::randomGridMesh({6, 6, 6}, rng);
    const ContourTree t = buildContourTree(m);
    const oracle::ContourCounter counter(m);
    std::vector<double> sorted = m.values;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 10; i + 10 < sorted.size(); i += 17) {
      const double h = 0.5 * (sorted[i] + sorted[i + 1]);
      CHECK(straddling(t, h) == counter.count(h));
    }
  }
}

TEST_CASE("disconnected graph is rejected")
{
  const std::vector<double> values{0, 1, 2, 3};
  CHECK_THROWS_AS(treeOf(test::graphFromEdges(4, {{0, 1}, {2, 3}}), values), StructuralError);
}
