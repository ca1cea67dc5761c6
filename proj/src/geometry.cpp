#include "ctvol/geometry.h"

#include "ctvol/parallel.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctvol {

namespace {

/// Point where the linear interpolant along p->q reaches level h.
Vec3 levelPoint(const Vec3& p, double hp, const Vec3& q, double hq, double h)
{
  const double span = hq - hp;
  const double t = span > 0 ? (h - hp) / span : 0.0;
  return lerp(p, q, t);
}

double sinBetween(const Vec3& u, const Vec3& v)
{
  const double denom = norm(u) * norm(v);
  return denom > 0 ? std::min(1.0, norm(cross(u, v)) / denom) : 0.0;
}

/// Coefficients of the quad area in s = (h - hB)/(hC - hB):
///   |PQ| = (1-s) BE + s HG,  |PS| = s HC,  |RQ| = (1-s) EF + s GC,  |RS| = (1-s) BF
///   Area = 1/2 sin(theta) |PQ||PS| + 1/2 sin(phi) |RQ||RS| = q0 + q1 s + q2 s^2
std::array<double, 3> quadAreaInS(const TetFrame& f)
{
  const double t = 0.5 * f.sinTheta * f.HC;
  const double r = 0.5 * f.sinPhi * f.BF;
  return {r * f.EF, t * f.BE + r * (f.GC - 2.0 * f.EF), t * (f.HG - f.BE) - r * (f.GC - f.EF)};
}

TetFrame frameFromSorted(const std::array<Id, 4>& ids, const std::array<Vec3, 4>& p, const std::array<double, 4>& h)
{
  TetFrame f;
  f.vertex = ids;
  f.p = p;
  f.h = h;
  const Vec3 &A = p[0], &B = p[1], &C = p[2], &D = p[3];
  const double hA = h[0], hB = h[1], hC = h[2], hD = h[3];

  f.totalVolume = tetVolume(A, B, C, D);
  f.E = levelPoint(A, hA, D, hD, hB);
  f.F = levelPoint(A, hA, C, hC, hB);
  f.G = levelPoint(A, hA, D, hD, hC);
  f.H = levelPoint(B, hB, D, hD, hC);

  f.BE = norm(f.E - B);
  f.EF = norm(f.E - f.F);
  f.BF = norm(B - f.F);
  f.HG = norm(f.G - f.H);
  f.GC = norm(f.G - C);
  f.HC = norm(C - f.H);

  // Side directions of the moving quad, each the sum of two parallel, equally oriented vectors.
  const Vec3 dirPQ = (f.E - B) + (f.G - f.H);
  const Vec3 dirPS = C - f.H;
  const Vec3 dirRQ = (f.E - f.F) + (f.G - C);
  const Vec3 dirRS = B - f.F;
  f.sinTheta = sinBetween(dirPQ, dirPS);
  f.sinPhi = sinBetween(dirRQ, dirRS);

  f.areaBEF = 0.5 * norm(cross(B - f.F, f.E - f.F));
  f.areaCGH = 0.5 * norm(cross(f.G - f.H, C - f.H));
  f.volumeABEF = tetVolume(A, B, f.E, f.F);
  f.volumeDCGH = tetVolume(D, C, f.G, f.H);

  if (hD > hA) {
    const Vec3 g = linearGradient(p, h);
    const double gnorm = norm(g);
    const Vec3 n = g * (1.0 / gnorm);
    f.delta = std::abs(dot(n, B) - dot(n, f.H));
    f.kappa = hC > hB ? f.delta / (hC - hB) : 1.0 / gnorm;
  }
  return f;
}

} // namespace

Vec3 linearGradient(const std::array<Vec3, 4>& p, const std::array<double, 4>& h)
{
  const Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0], e3 = p[3] - p[0];
  const double det = dot(e1, cross(e2, e3));
  return (cross(e2, e3) * (h[1] - h[0]) + cross(e3, e1) * (h[2] - h[0]) + cross(e1, e2) * (h[3] - h[0])) *
         (1.0 / det);
}


std::array<Id, 4> sortTetVertices(const Tet& tet, const VertexOrder& order)
{
  std::array<Id, 4> ids = tet;
  std::sort(ids.begin(), ids.end(), [&](Id a, Id b) { return order.rank[a] < order.rank[b]; });
  return ids;
}

TetFrame makeFrame(const TetMesh& mesh, std::size_t tet, const VertexOrder& order)
{
  const auto ids = sortTetVertices(mesh.tets[tet], order);
  std::array<Vec3, 4> p;
  std::array<double, 4> h;
  for (int i = 0; i < 4; ++i) {
    p[i] = mesh.positions[ids[i]];
    h[i] = mesh.values[ids[i]];
  }
  return frameFromSorted(ids, p, h);
}

TetFrame makeFrame(const std::array<Vec3, 4>& positions, const std::array<double, 4>& values)
{
  std::array<Id, 4> ids{0, 1, 2, 3};
  std::stable_sort(ids.begin(), ids.end(), [&](Id a, Id b) { return values[a] < values[b]; });
  std::array<Vec3, 4> p;
  std::array<double, 4> h;
  for (int i = 0; i < 4; ++i) {
    p[i] = positions[ids[i]];
    h[i] = values[ids[i]];
  }
  return frameFromSorted(ids, p, h);
}

CubicDD lowRangePiece(const TetFrame& f)
{
  const double width = f.h[1] - f.h[0];
  if (!(width > 0))
    return CubicDD::constant(f.volumeABEF);
  const double k = f.volumeABEF / (width * width * width);
  return CubicDD::fromShifted(f.h[0], 0.0, 0.0, 0.0, k);
}

CubicDD highRangePiece(const TetFrame& f)
{
  const double width = f.h[3] - f.h[2];
  if (!(width > 0))
    return CubicDD::constant(f.totalVolume);
  // total - k (hD - h)^3 = total + k (h - hD)^3
  const double k = f.volumeDCGH / (width * width * width);
  return CubicDD::fromShifted(f.h[3], f.totalVolume, 0.0, 0.0, k);
}

QuadraticPoly midRangeArea(const TetFrame& f)
{
  const double hB = f.h[1];
  const double w = f.h[2] - f.h[1];
  if (!(w > 0))
    return {0.0, 0.0, f.areaBEF};

  const auto [q0, q1, q2] = quadAreaInS(f);

  QuadraticPoly area;
  area.alpha = q2 / (w * w);
  area.beta = q1 / w - 2.0 * q2 * hB / (w * w);
  area.gamma = q0 - q1 * hB / w + q2 * hB * hB / (w * w);
  return area;
}

CubicDD midRangePiece(const TetFrame& f)
{
  const double hB = f.h[1];
  const double w = f.h[2] - hB;
  if (!(w > 0))
    return CubicDD::constant(f.volumeABEF);
  // kappa * integral of the area from hB, plus V(hB) = Volume(ABEF)
  const auto [q0, q1, q2] = quadAreaInS(f);
  return CubicDD::fromShifted(hB, f.volumeABEF, f.kappa * q0, f.kappa * q1 / (2.0 * w),
                              f.kappa * q2 / (3.0 * w * w));
}

int TetSpline::pieceIndex(double h) const
{
  if (h < breaks[0])
    return -1;
  if (h >= breaks[3])
    return 3;
  if (h < breaks[1])
    return 0;
  if (h < breaks[2])
    return 1;
  return 2;
}

double TetSpline::operator()(double h) const
{
  const int i = pieceIndex(h);
  if (i < 0)
    return 0.0;
  if (i > 2)
    return totalVolume;
  return pieces[i](h);
}

TetSpline buildTetSpline(const TetFrame& f)
{
  TetSpline s;
  s.breaks = f.h;
  s.totalVolume = f.totalVolume;
  s.pieces = {lowRangePiece(f), midRangePiece(f), highRangePiece(f)};
  return s;
}

TetSpline buildTetSpline(const TetMesh& mesh, std::size_t tet, const VertexOrder& order)
{
  return buildTetSpline(makeFrame(mesh, tet, order));
}

std::vector<TetSpline> buildTetSplines(const TetMesh& mesh, const VertexOrder& order)
{
  std::vector<TetSpline> out(mesh.tetCount());
  parallelFor(mesh.tetCount(), [&](std::size_t t) { out[t] = buildTetSpline(mesh, t, order); });
  return out;
}

double areaAt(const TetFrame& f, double h)
{
  const auto& b = f.h;
  if (h < b[0] || h > b[3])
    return 0.0;
  if (h < b[1]) {
    const double r = (h - b[0]) / (b[1] - b[0]);
    return f.areaBEF * r * r;
  }
  if (h < b[2])
    return midRangeArea(f)(h);
  if (!(b[3] - b[2] > 0))
    return 0.0;
  const double t = (b[3] - h) / (b[3] - b[2]);
  return f.areaCGH * t * t;
}

} // namespace ctvol
