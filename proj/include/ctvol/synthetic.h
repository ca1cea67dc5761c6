#pragma once

#include "ctvol/mesh.h"

#include <functional>
#include <random>

namespace ctvol::synthetic {

using Rng = std::mt19937_64;

/// Uniform random vertices in the unit cube and values in [0, 1); rejects
/// numerically flat tets.
struct RandomTet
{
  std::array<Vec3, 4> positions;
  std::array<double, 4> values;
};
RandomTet randomTet(Rng& rng);

std::vector<double> randomValues(std::size_t count, Rng& rng);

/// Kuhn-split grid carrying i.i.d. uniform values.
TetMesh randomGridMesh(const GridDims& dims, Rng& rng);

/// Kuhn-split grid with field f(position).
TetMesh fieldGridMesh(const GridDims& dims, const std::function<double(const Vec3&)>& f,
                      const Vec3& spacing = {1, 1, 1});

/// Kuhn-split grid whose interior vertices are displaced by up to `jitter`
/// grid spacings, carrying a sum of random Gaussian bumps plus a little noise.
TetMesh jitteredGridMesh(const GridDims& dims, double jitter, Rng& rng);

/// Unit-cross-section strip of Kuhn cubes along x with its lowest point in
/// the middle slice and one peak at each end. The left half has `largeCubes`
/// cubes of length `largeLength`; the right half `smallCubes` of length
/// `smallLength`. With few large cubes and many small ones the left peak
/// owns the volume and the right peak owns the vertices.
struct TwoPeakMesh
{
  TetMesh mesh;
  Id largePeak = kNoId; // vertex at the top of the large-volume side
  Id smallPeak = kNoId;
};
TwoPeakMesh twoPeakStrip(std::size_t largeCubes, double largeLength, std::size_t smallCubes, double smallLength);

} // namespace ctvol::synthetic
