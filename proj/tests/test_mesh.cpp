#include "ctvol/mesh.h"
#include "ctvol/synthetic.h"

#include "doctest.h"
#include "test_support.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <set>

using namespace ctvol;
using ctvol::test::TempDir;
using ctvol::test::writeText;

namespace {

const char* kNode1 = "# unit tet plus apex\n"
                     "5 3 1 0\n"
                     "1 0 0 0 0.5\n"
                     "2 1 0 0 1.5\n"
                     "\n"
                     "3 0 1 0 2.5  # trailing comment\n"
                     "4 0 0 1 3.5\n"
                     "5 1 1 1 4.5\n";
const char* kEle1 = "2 4 0\n"
                    "1 1 2 3 4\n"
                    "2 2 3 4 5\n";

} // namespace

TEST_CASE("loadTetgen reads a 1-based pair with an attribute column")
{
  TempDir dir;
  writeText(dir / "m.node", kNode1);
  writeText(dir / "m.ele", kEle1);
  const TetMesh m = loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(0));
  REQUIRE(m.vertexCount() == 5);
  REQUIRE(m.tetCount() == 2);
  CHECK(m.tets[0] == Tet{0, 1, 2, 3});
  CHECK(m.tets[1] == Tet{1, 2, 3, 4});
  CHECK(m.values == std::vector<double>{0.5, 1.5, 2.5, 3.5, 4.5});
  CHECK(m.positions[4].x == 1.0);
  CHECK(m.tetVolume(0) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("loadTetgen reads a 0-based pair with a separate values file")
{
  TempDir dir;
  writeText(dir / "m.node", "4 3 0 1\n0 0 0 0 7\n1 1 0 0 7\n2 0 1 0 7\n3 0 0 1 7\n");
  writeText(dir / "m.ele", "1 4 1\n0 0 1 2 3 9\n");
  writeText(dir / "m.val", "# values\n-1\n2e-3\n3\n+4\n");
  const TetMesh m = loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::file(dir / "m.val"));
  CHECK(m.tets[0] == Tet{0, 1, 2, 3});
  CHECK(m.values == std::vector<double>{-1, 2e-3, 3, 4});
}

TEST_CASE("loadTetgen reports the line of a malformed header")
{
  TempDir dir;
  writeText(dir / "m.node", "# comment\n\nfour 3 1 0\n");
  writeText(dir / "m.ele", kEle1);
  try {
    loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(0));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("loadTetgen reports the line of a short point row")
{
  TempDir dir;
  writeText(dir / "m.node", "2 3 1 0\n1 0 0 0 1\n2 0 0 1\n");
  writeText(dir / "m.ele", "0 4 0\n");
  try {
    loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(0));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("loadTetgen rejects out-of-range tet indices")
{
  TempDir dir;
  writeText(dir / "m.node", kNode1);
  writeText(dir / "m.ele", "1 4 0\n1 1 2 3 6\n");
  CHECK_THROWS_AS(loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(0)), StructuralError);
}

TEST_CASE("loadTetgen rejects NaN values")
{
  TempDir dir;
  writeText(dir / "m.node", "4 3 1 0\n1 0 0 0 1\n2 1 0 0 nan\n3 0 1 0 1\n4 0 0 1 1\n");
  writeText(dir / "m.ele", "1 4 0\n1 1 2 3 4\n");
  CHECK_THROWS_AS(loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(0)), DataError);
}

TEST_CASE("loadTetgen rejects degenerate tets")
{
  TempDir dir;
  writeText(dir / "m.node", "4 3 1 0\n1 0 0 0 1\n2 1 0 0 2\n3 0 1 0 3\n4 1 1 0 4\n");
  writeText(dir / "m.ele", "1 4 0\n1 1 2 3 4\n");
  CHECK_THROWS_AS(loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(0)), StructuralError);
}

TEST_CASE("loadTetgen needs exactly one field source")
{
  TempDir dir;
  writeText(dir / "m.node", kNode1);
  writeText(dir / "m.ele", kEle1);
  CHECK_THROWS_AS(loadTetgen(dir / "m.node", dir / "m.ele", FieldSource{}), std::invalid_argument);
  CHECK_THROWS_AS(loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::attr(1)), ParseError);
}

TEST_CASE("values file with the wrong count is a structural error")
{
  TempDir dir;
  writeText(dir / "m.node", kNode1);
  writeText(dir / "m.ele", kEle1);
  writeText(dir / "m.val", "1\n2\n3\n");
  CHECK_THROWS_AS(loadTetgen(dir / "m.node", dir / "m.ele", FieldSource::file(dir / "m.val")), StructuralError);
}

TEST_CASE("writeTetgen round trip is exact")
{
  synthetic::Rng rng(7);
  const TetMesh m = synthetic::jitteredGridMesh({4, 3, 5}, 0.2, rng);
  TempDir dir;
  writeTetgen(m, dir / "r.node", dir / "r.ele");
  const TetMesh r = loadTetgen(dir / "r.node", dir / "r.ele", FieldSource::attr(0));
  CHECK(r.tets == m.tets);
  CHECK(r.values == m.values);
  for (std::size_t v = 0; v < m.vertexCount(); ++v) {
    CHECK(r.positions[v].x == m.positions[v].x);
    CHECK(r.positions[v].y == m.positions[v].y);
    CHECK(r.positions[v].z == m.positions[v].z);
  }
}

TEST_CASE("readRawGrid decodes little-endian doubles and checks the size")
{
  TempDir dir;
  const std::vector<double> vals{1.25, -3.0, 1e300};
  {
    std::ofstream out(dir / "g.raw", std::ios::binary);
    for (double d : vals) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, 8);
      for (int b = 0; b < 8; ++b)
        out.put(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
  CHECK(readRawGrid(dir / "g.raw", 3) == vals);
  CHECK_THROWS_AS(readRawGrid(dir / "g.raw", 4), StructuralError);
}

TEST_CASE("validate catches each invariant")
{
  TetMesh m = test::singleTetMesh({0, 1, 2, 3});
  CHECK_NOTHROW(validate(m));

  TetMesh repeated = m;
  repeated.tets[0] = {0, 1, 1, 3};
  CHECK_THROWS_AS(validate(repeated), StructuralError);

  TetMesh inf = m;
  inf.values[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(inf), DataError);

  TetMesh shortValues = m;
  shortValues.values.pop_back();
  CHECK_THROWS_AS(validate(shortValues), DataError);
}

TEST_CASE("gridToTets on one cube gives six unit-sum tets")
{
  const std::vector<double> vals(8, 0.0);
  const TetMesh m = gridToTets({2, 2, 2}, vals);
  REQUIRE(m.tetCount() == 6);
  double sum = 0;
  for (std::size_t t = 0; t < 6; ++t) {
    const auto p = m.tetPositions(t);
    // positively oriented: signed volume > 0
    CHECK(tripleProduct(p[0], p[1], p[2], p[3]) > 0);
    CHECK(m.tetVolume(t) == doctest::Approx(1.0 / 6.0));
    sum += m.tetVolume(t);
  }
  CHECK(sum == doctest::Approx(1.0));
  // all six share the main diagonal
  for (const Tet& k : m.tets) {
    CHECK(std::find(k.begin(), k.end(), 0) != k.end());
    CHECK(std::find(k.begin(), k.end(), 7) != k.end());
  }
}

TEST_CASE("gridToTets on two cubes gives twelve tets with conforming faces")
{
  const std::vector<double> vals(12, 0.0);
  const TetMesh m = gridToTets({3, 2, 2}, vals, {2.0, 1.0, 0.5});
  REQUIRE(m.tetCount() == 12);
  CHECK(m.totalVolume() == doctest::Approx(2.0));
  // conforming: every interior face is shared by exactly two tets, boundary faces by one
  std::map<std::array<Id, 3>, int> faces;
  for (const Tet& k : m.tets)
    for (int skip = 0; skip < 4; ++skip) {
      std::array<Id, 3> f;
      int j = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip)
          f[j++] = k[i];
      std::sort(f.begin(), f.end());
      ++faces[f];
    }
  std::size_t shared = 0, boundary = 0;
  for (const auto& [f, n] : faces) {
    CHECK(n <= 2);
    (n == 2 ? shared : boundary) += 1;
  }
  // each cube: 12 boundary triangles on its 6 faces; the 2 cubes share 2 triangles
  CHECK(boundary == 20);
  CHECK(shared == 6 + 6 + 2);
}

TEST_CASE("gridToTets rejects bad input")
{
  CHECK_THROWS_AS(gridToTets({1, 2, 2}, std::vector<double>(4)), std::invalid_argument);
  CHECK_THROWS_AS(gridToTets({2, 2, 2}, std::vector<double>(7)), std::invalid_argument);
}

TEST_CASE("topology graph of a single tet is K4")
{
  const TopologyGraph g = buildTopologyGraph(test::singleTetMesh({0, 1, 2, 3}));
  REQUIRE(g.vertexCount() == 4);
  CHECK(g.edgeCount() == 6);
  for (Id v = 0; v < 4; ++v)
    CHECK(g.degree(v) == 3);
}

TEST_CASE("two tets sharing a face give the shared vertices degree 4")
{
  TetMesh m;
  m.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  m.values = {0, 1, 2, 3, 4};
  m.tets = {{0, 1, 2, 3}, {1, 2, 3, 4}};
  const TopologyGraph g = buildTopologyGraph(m);
  CHECK(g.edgeCount() == 9);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(4) == 3);
  for (Id v = 1; v <= 3; ++v)
    CHECK(g.degree(v) == 4);
}

TEST_CASE("topology graph edge set equals the union of tet edges")
{
  synthetic::Rng rng(3);
  const TetMesh m = synthetic::jitteredGridMesh({5, 4, 3}, 0.3, rng);
  const TopologyGraph g = buildTopologyGraph(m);

  std::set<std::pair<Id, Id>> expected;
  for (const Tet& k : m.tets)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j)
          expected.emplace(k[i], k[j]);

  std::set<std::pair<Id, Id>> actual;
  for (Id v = 0; v < static_cast<Id>(g.vertexCount()); ++v) {
    const auto nb = g.neighbors(v);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
    for (Id u : nb) {
      CHECK(u != v);
      actual.emplace(v, u);
    }
  }
  CHECK(actual == expected);
  CHECK(isConnected(g));
}

TEST_CASE("isConnected detects a split graph")
{
  CHECK(isConnected(test::pathGraph(5)));
  CHECK_FALSE(isConnected(test::graphFromEdges(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("vertex order breaks ties by index")
{
  const std::vector<double> vals{2.0, 1.0, 2.0, 1.0, 0.5};
  const VertexOrder o = buildVertexOrder(vals);
  CHECK(o.sortIndex == std::vector<Id>{4, 1, 3, 0, 2});
  for (std::size_t i = 0; i < o.size(); ++i)
    CHECK(o.rank[o.sortIndex[i]] == static_cast<Id>(i));
  CHECK(o.less(1, 3));
  CHECK(o.less(0, 2));
  CHECK_FALSE(o.less(2, 0));
}

TEST_CASE("vertex order is a permutation with inverse rank on random data")
{
  synthetic::Rng rng(11);
  std::vector<double> vals = synthetic::randomValues(500, rng);
  for (std::size_t i = 0; i < vals.size(); i += 7)
    vals[i] = 0.25; // plenty of ties
  const VertexOrder o = buildVertexOrder(vals);
  for (std::size_t i = 0; i < o.size(); ++i) {
    CHECK(o.rank[o.sortIndex[i]] == static_cast<Id>(i));
    if (i > 0) {
      const Id a = o.sortIndex[i - 1], b = o.sortIndex[i];
      CHECK((vals[a] < vals[b] || (vals[a] == vals[b] && a < b)));
    }
  }
}
