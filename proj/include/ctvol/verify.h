#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctvol::verify {

/// Outcome of one property check: the worst observed error against its limit.
struct CheckResult
{
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double limit = 0.0;
  std::string detail;
};

/// Analytic tet volume against polytope clipping, |error| / tet volume.
CheckResult splineVsClip(std::uint64_t seed, std::size_t tets, std::size_t levels = 64);

/// Unit tet (0,0,0),(1,0,0),(0,1,0),(0,0,1) with values 0,1,2,3.
CheckResult unitTet();

/// Piece joins at hB, hC and central differences of V against clipped area / |grad f|.
CheckResult continuityAndCoarea(std::uint64_t seed, std::size_t tets, std::size_t samplesPerPiece = 16);

/// Sum of all vertex deltas at the global maximum against the mesh volume.
CheckResult conservation(std::uint64_t seed, std::size_t grids = 10, std::size_t n = 8);

/// Superarcs straddling t against a direct count of contours at t.
CheckResult treeContourCounts(std::uint64_t seed, std::size_t grids = 20, std::size_t n = 8,
                              std::size_t thresholds = 16);

/// Every superarc volume function against region clipping at interior isovalues.
CheckResult hypersweepVsRegion(std::uint64_t seed, std::size_t meshes = 4, std::size_t levels = 8);

/// Partition, monotonicity, attachment, ranking, scale invariance and
/// maximality of the master over every leaf-to-leaf monotone path.
CheckResult decompositionInvariants(std::uint64_t seed, std::size_t trees = 20);

/// Two-peak strip: volume ranks the large-volume peak first, count second.
CheckResult countVersusVolume();

/// Sphere-like field closes with Euler characteristic 2; superarc filtering
/// above the saddle of two bumps leaves one closed component.
CheckResult isosurfaceTopology();

std::vector<CheckResult> runAll(std::uint64_t seed, std::size_t tets);

std::string format(const CheckResult& r);

} // namespace ctvol::verify
