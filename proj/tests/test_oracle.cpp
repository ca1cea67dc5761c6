#include "ctvol/contour_tree.h"
#include "ctvol/oracle.h"
#include "ctvol/synthetic.h"

#include "doctest.h"
#include "test_support.h"

#include <cmath>

using namespace ctvol;

TEST_CASE("clipped volume is complementary under negation")
{
  synthetic::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto t = synthetic::randomTet(rng);
    std::array<double, 4> neg;
    for (int k = 0; k < 4; ++k)
      neg[k] = -t.values[k];
    const double total = tetVolume(t.positions[0], t.positions[1], t.positions[2], t.positions[3]);
    for (int k = 0; k <= 20; ++k) {
      const double h = -0.1 + 1.2 * k / 20;
      const double sum = oracle::clipVolume(t.positions, t.values, h) + oracle::clipVolume(t.positions, neg, -h);
      CHECK(std::abs(sum - total) <= 1e-12);
    }
  }
}

TEST_CASE("clipped volume is monotone and bounded")
{
  synthetic::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto t = synthetic::randomTet(rng);
    const double total = tetVolume(t.positions[0], t.positions[1], t.positions[2], t.positions[3]);
    double prev = 0;
    for (int k = 0; k <= 100; ++k) {
      const double v = oracle::clipVolume(t.positions, t.values, -0.01 + 1.02 * k / 100);
      CHECK(v >= prev - 1e-15);
      CHECK(v <= total * (1 + 1e-12));
      prev = v;
    }
    CHECK(prev == doctest::Approx(total));
  }
}

TEST_CASE("clipped polytope has four to six vertices and matching volume")
{
  synthetic::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto t = synthetic::randomTet(rng);
    std::array<double, 4> sorted = t.values;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < 3; ++k) {
      const double h = 0.5 * (sorted[k] + sorted[k + 1]);
      const auto poly = oracle::clipTet(t.positions, t.values, h);
      CHECK(poly.vertices.size() >= 4);
      CHECK(poly.vertices.size() <= 6);
      CHECK(poly.volume() == doctest::Approx(oracle::clipVolume(t.positions, t.values, h)));
    }
  }
}

TEST_CASE("cross-section area equals |grad f| times the volume derivative")
{
  synthetic::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto t = synthetic::randomTet(rng);
    const auto& p = t.positions;
    const auto& f = t.values;
    // gradient from the 3x3 system of edge differences
    const Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0], e3 = p[3] - p[0];
    const double det = dot(e1, cross(e2, e3));
    const Vec3 g = (cross(e2, e3) * (f[1] - f[0]) + cross(e3, e1) * (f[2] - f[0]) + cross(e1, e2) * (f[3] - f[0])) *
                   (1.0 / det);
    std::array<double, 4> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < 3; ++k) {
      if (sorted[k + 1] - sorted[k] < 1e-3)
        continue;
      const double h = 0.5 * (sorted[k] + sorted[k + 1]);
      const double step = 1e-6 * (sorted[k + 1] - sorted[k]);
      const double dv = (oracle::clipVolume(p, f, h + step) - oracle::clipVolume(p, f, h - step)) / (2 * step);
      const double area = oracle::clipArea(p, f, h);
      CHECK(std::abs(area - norm(g) * dv) <= 1e-4 * std::max(area, 1e-6));
    }
  }
}

TEST_CASE("contour counter on known fields")
{
  const TetMesh sphere = synthetic::fieldGridMesh({9, 9, 9}, [](const Vec3& p) { return dot(p - Vec3{4, 4, 4}, p - Vec3{4, 4, 4}); });
  CHECK(oracle::referenceContourCount(sphere, 5.5) == 1);
  CHECK(oracle::referenceContourCount(sphere, -1.0) == 0);
  // past the face centres the level set splits into the eight corner pieces
  CHECK(oracle::referenceContourCount(sphere, 47.5) == 8);

  const TetMesh ramp = synthetic::fieldGridMesh({4, 4, 4}, [](const Vec3& p) { return p.x; });
  CHECK(oracle::referenceContourCount(ramp, 1.5) == 1);
}

TEST_CASE("region volume on a monotone mesh is the whole sublevel volume")
{
  const TetMesh m = synthetic::fieldGridMesh({4, 3, 3}, [](const Vec3& p) { return p.x + 0.1 * p.y + 0.01 * p.z; });
  const ContourTree t = buildContourTree(m);
  REQUIRE(t.superarcCount() == 1);
  for (double h : {0.3, 1.05, 2.7}) {
    double expected = 0;
    for (std::size_t k = 0; k < m.tetCount(); ++k)
      expected += oracle::clipVolume(m.tetPositions(k), m.tetValues(k), h);
    CHECK(oracle::regionVolume(m, t, 0, h) == doctest::Approx(expected).epsilon(1e-12));
  }
}
