#pragma once

#include "ctvol/cubic.h"
#include "ctvol/mesh.h"

#include <array>
#include <vector>

namespace ctvol {

/// alpha*h^2 + beta*h + gamma; cross-section area of the middle range.
struct QuadraticPoly
{
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  constexpr double operator()(double h) const { return (alpha * h + beta) * h + gamma; }
};

/// A tet relabelled A,B,C,D by ascending vertex order, plus the contour
/// geometry at the two middle values.
///
/// The contour through B (value hB) is triangle B,E,F with E on AD and F on AC.
/// The contour through C (value hC) is triangle C,G,H with G on AD and H on BD.
/// Between them every level cuts the quad P(BD) Q(AD) R(AC) S(BC); the sides
/// PQ, PS, RQ, RS keep fixed directions, so the angle theta at P equals the
/// angle at H in CGH and the angle phi at R equals the angle at F in BEF.
struct TetFrame
{
  std::array<Id, 4> vertex{};  // mesh ids (or slot indices for standalone tets), ascending
  std::array<Vec3, 4> p{};     // A, B, C, D
  std::array<double, 4> h{};   // hA <= hB <= hC <= hD
  Vec3 E, F, G, H;

  double BE = 0, EF = 0, BF = 0; // contour BEF side lengths
  double HG = 0, GC = 0, HC = 0; // contour CGH side lengths
  double sinTheta = 0;           // at H between HG and HC
  double sinPhi = 0;             // at F between FE and FB
  double delta = 0;              // distance between the planes of BEF and CGH
  double kappa = 0;              // 1/|grad f|, the co-area factor
  double areaBEF = 0, areaCGH = 0;
  double volumeABEF = 0, volumeDCGH = 0;
  double totalVolume = 0;
};

/// Gradient of the linear interpolant of h over a non-degenerate tet.
Vec3 linearGradient(const std::array<Vec3, 4>& p, const std::array<double, 4>& h);

/// Mesh ids of tet t sorted by rank in the global order.
std::array<Id, 4> sortTetVertices(const Tet& tet, const VertexOrder& order);

TetFrame makeFrame(const TetMesh& mesh, std::size_t tet, const VertexOrder& order);
/// Standalone tet; equal values are ordered by slot index.
TetFrame makeFrame(const std::array<Vec3, 4>& positions, const std::array<double, 4>& values);

/// V on [hA, hB]: Volume(ABEF) * ((h - hA) / (hB - hA))^3.
CubicDD lowRangePiece(const TetFrame& f);
/// V on [hC, hD]: total - Volume(DCGH) * ((hD - h) / (hD - hC))^3.
CubicDD highRangePiece(const TetFrame& f);
/// Area(PQRS) on [hB, hC] in standard form.
QuadraticPoly midRangeArea(const TetFrame& f);
/// V on [hB, hC]: kappa * integral of the quad area plus Volume(ABEF).
CubicDD midRangePiece(const TetFrame& f);

/// Cumulative sublevel volume V(h) of one tet as three cubic pieces.
/// V is 0 below hA and the full volume from hD on; zero-width pieces never
/// evaluate (right-continuous at shared values).
struct TetSpline
{
  std::array<double, 4> breaks{};
  std::array<CubicDD, 3> pieces{};
  double totalVolume = 0.0;

  /// 0, 1, 2 for the pieces; -1 below hA; 3 at or above hD.
  int pieceIndex(double h) const;
  double operator()(double h) const;
};

TetSpline buildTetSpline(const TetFrame& f);
TetSpline buildTetSpline(const TetMesh& mesh, std::size_t tet, const VertexOrder& order);
std::vector<TetSpline> buildTetSplines(const TetMesh& mesh, const VertexOrder& order);

/// Piecewise-quadratic cross-section area of the level set at h.
double areaAt(const TetFrame& f, double h);

} // namespace ctvol
