#include "ctvol/synthetic.h"

#include <algorithm>
#include <cmath>

namespace ctvol::synthetic {

namespace {

Vec3 gridPoint(std::size_t index, const GridDims& dims)
{
  const std::size_t i = index % dims.nx;
  const std::size_t j = (index / dims.nx) % dims.ny;
  const std::size_t k = index / (dims.nx * dims.ny);
  return {static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)};
}

} // namespace

RandomTet randomTet(Rng& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    RandomTet t;
    for (auto& p : t.positions)
      p = {u(rng), u(rng), u(rng)};
    for (double& v : t.values)
      v = u(rng);
    if (tetVolume(t.positions[0], t.positions[1], t.positions[2], t.positions[3]) > 1e-6)
      return t;
  }
}

std::vector<double> randomValues(std::size_t count, Rng& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(count);
  for (double& x : v)
    x = u(rng);
  return v;
}

TetMesh randomGridMesh(const GridDims& dims, Rng& rng)
{
  const auto values = randomValues(dims.count(), rng);
  return gridToTets(dims, values);
}

TetMesh fieldGridMesh(const GridDims& dims, const std::function<double(const Vec3&)>& f, const Vec3& spacing)
{
  std::vector<double> values(dims.count());
  for (std::size_t v = 0; v < values.size(); ++v) {
    const Vec3 g = gridPoint(v, dims);
    values[v] = f({g.x * spacing.x, g.y * spacing.y, g.z * spacing.z});
  }
  return gridToTets(dims, values, spacing);
}

TetMesh jitteredGridMesh(const GridDims& dims, double jitter, Rng& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Bump
  {
    Vec3 centre;
    double amplitude;
    double radius;
  };
  const Vec3 extent{static_cast<double>(dims.nx - 1), static_cast<double>(dims.ny - 1),
                    static_cast<double>(dims.nz - 1)};
  const double scale = std::max({extent.x, extent.y, extent.z});
  std::vector<Bump> bumps(8);
  for (Bump& b : bumps) {
    b.centre = {u(rng) * extent.x, u(rng) * extent.y, u(rng) * extent.z};
    b.amplitude = u(rng) * 2.0 - 1.0;
    b.radius = scale * (0.08 + 0.15 * u(rng));
  }

  std::vector<double> values(dims.count());
  TetMesh mesh = gridToTets(dims, values);
  for (std::size_t v = 0; v < mesh.vertexCount(); ++v) {
    const Vec3 g = gridPoint(v, dims);
    const bool interior = g.x > 0 && g.y > 0 && g.z > 0 && g.x < extent.x && g.y < extent.y && g.z < extent.z;
    Vec3 p = g;
    if (interior)
      p += Vec3{u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5} * (2.0 * jitter);
    mesh.positions[v] = p;
    double f = 1e-6 * u(rng);
    for (const Bump& b : bumps) {
      const Vec3 d = p - b.centre;
      f += b.amplitude * std::exp(-dot(d, d) / (b.radius * b.radius));
    }
    mesh.values[v] = f;
  }
  validate(mesh);
  return mesh;
}

TwoPeakMesh twoPeakStrip(std::size_t largeCubes, double largeLength, std::size_t smallCubes, double smallLength)
{
  const GridDims dims{largeCubes + smallCubes + 1, 2, 2};
  std::vector<double> xs(dims.nx);
  for (std::size_t i = 0; i < dims.nx; ++i)
    xs[i] = i <= largeCubes ? -largeLength * static_cast<double>(largeCubes - i)
                            : smallLength * static_cast<double>(i - largeCubes);
  const double leftSpan = largeLength * static_cast<double>(largeCubes);
  const double rightSpan = smallLength * static_cast<double>(smallCubes);

  std::vector<double> values(dims.count());
  TwoPeakMesh out;
  out.mesh = gridToTets(dims, values);
  for (std::size_t v = 0; v < out.mesh.vertexCount(); ++v) {
    const Vec3 g = gridPoint(v, dims);
    const double x = xs[static_cast<std::size_t>(g.x)];
    out.mesh.positions[v] = {x, g.y, g.z};
    const double along = x < 0 ? -x / leftSpan : 0.9 * x / rightSpan;
    out.mesh.values[v] = along + 1e-3 * (g.y + 2.0 * g.z);
    if (g.y == 1 && g.z == 1 && g.x == 0)
      out.largePeak = static_cast<Id>(v);
    if (g.y == 1 && g.z == 1 && static_cast<std::size_t>(g.x) == dims.nx - 1)
      out.smallPeak = static_cast<Id>(v);
  }
  validate(out.mesh);
  return out;
}

} // namespace ctvol::synthetic
