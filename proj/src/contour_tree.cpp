#include "ctvol/contour_tree.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ctvol {

namespace {

class UnionFind
{
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Id{0}); }

  Id find(Id v)
  {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  /// Attaches root a under root b.
  void attach(Id a, Id b) { parent_[a] = b; }

private:
  std::vector<Id> parent_;
};

/// Sweep in the order given by `sequence`, merging each vertex with the
/// components of its already-swept neighbours.
MergeTree sweep(const TopologyGraph& graph, const VertexOrder& order, bool descending)
{
  const std::size_t n = graph.vertexCount();
  MergeTree tree;
  tree.parent.assign(n, kNoId);
  UnionFind uf(n);
  std::vector<Id> tail(n); // most recently swept vertex of each component (valid at roots)

  for (std::size_t i = 0; i < n; ++i) {
    const Id v = order.sortIndex[descending ? n - 1 - i : i];
    tail[v] = v;
    Id rootV = v;
    for (Id u : graph.neighbors(v)) {
      const bool swept = descending ? order.rank[u] > order.rank[v] : order.rank[u] < order.rank[v];
      if (!swept)
        continue;
      const Id rootU = uf.find(u);
      if (rootU == rootV)
        continue;
      tree.parent[tail[rootU]] = v;
      uf.attach(rootU, rootV);
    }
    tail[rootV] = v;
  }
  if (n > 0)
    tree.root = order.sortIndex[descending ? 0 : n - 1];
  return tree;
}

} // namespace

MergeTree buildJoinTree(const TopologyGraph& graph, const VertexOrder& order) { return sweep(graph, order, true); }

MergeTree buildSplitTree(const TopologyGraph& graph, const VertexOrder& order) { return sweep(graph, order, false); }

Id ContourTree::childEnd(Id a) const
{
  const Superarc& arc = superarcs_[a];
  return parentArc_[arc.lo] == a ? arc.lo : arc.hi;
}

Id ContourTree::parentEnd(Id a) const
{
  const Superarc& arc = superarcs_[a];
  return parentArc_[arc.lo] == a ? arc.hi : arc.lo;
}

std::vector<Id> ContourTree::childArcs(Id s) const
{
  std::vector<Id> out;
  for (const auto* list : {&downArcs_[s], &upArcs_[s]})
    for (Id a : *list)
      if (a != parentArc_[s])
        out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

ContourTree mergeTrees(const MergeTree& join, const MergeTree& split, const VertexOrder& order,
                       std::span<const double> values)
{
  const std::size_t n = join.parent.size();
  if (split.parent.size() != n || order.size() != n || values.size() != n)
    throw std::logic_error("mergeTrees: join tree, split tree, order and values disagree on vertex count");

  std::vector<Id> parentJ = join.parent;
  std::vector<Id> parentS = split.parent;
  std::vector<Id> countJ(n, 0), countS(n, 0), xorJ(n, 0), xorS(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (const Id p = parentJ[v]; p != kNoId) {
      ++countJ[p];
      xorJ[p] ^= static_cast<Id>(v);
    }
    if (const Id p = parentS[v]; p != kNoId) {
      ++countS[p];
      xorS[p] ^= static_cast<Id>(v);
    }
  }

  std::vector<std::vector<Id>> up(n), down(n);
  std::vector<Id> leaves;
  for (std::size_t v = 0; v < n; ++v)
    if (countJ[v] + countS[v] == 1)
      leaves.push_back(static_cast<Id>(v));

  std::size_t edges = 0;
  std::vector<char> removed(n, 0);
  while (edges + 1 < n) {
    if (leaves.empty())
      throw std::logic_error("mergeTrees: ran out of leaves; join and split trees are inconsistent");
    const Id v = leaves.back();
    leaves.pop_back();
    if (removed[v] || countJ[v] + countS[v] != 1)
      continue;
    removed[v] = 1;

    Id u = kNoId;
    if (countJ[v] == 0) {
      // upper leaf: its neighbour is the join-tree parent below it
      u = parentJ[v];
      if (u == kNoId || order.rank[u] > order.rank[v])
        throw std::logic_error("mergeTrees: upper leaf without a lower join neighbour");
      --countJ[u];
      xorJ[u] ^= v;
      const Id c = xorS[v];
      const Id p = parentS[v];
      parentS[c] = p;
      if (p != kNoId)
        xorS[p] ^= v ^ c;
      up[u].push_back(v);
      down[v].push_back(u);
    } else {
      u = parentS[v];
      if (u == kNoId || order.rank[u] < order.rank[v])
        throw std::logic_error("mergeTrees: lower leaf without an upper split neighbour");
      --countS[u];
      xorS[u] ^= v;
      const Id c = xorJ[v];
      const Id p = parentJ[v];
      parentJ[c] = p;
      if (p != kNoId)
        xorJ[p] ^= v ^ c;
      up[v].push_back(u);
      down[u].push_back(v);
    }
    ++edges;
    if (countJ[u] + countS[u] == 1)
      leaves.push_back(u);
  }

  ContourTree tree;
  tree.values_.assign(values.begin(), values.end());
  tree.supernodeOf_.assign(n, kNoId);
  tree.arcOf_.assign(n, kNoId);
  for (std::size_t i = 0; i < n; ++i) {
    const Id v = order.sortIndex[i];
    if (!(up[v].size() == 1 && down[v].size() == 1)) {
      tree.supernodeOf_[v] = static_cast<Id>(tree.supernodes_.size());
      tree.supernodes_.push_back(v);
    }
  }

  struct RawArc
  {
    Id lo, hi;
    std::vector<Id> regular;
  };
  std::vector<RawArc> raw;
  for (std::size_t s = 0; s < tree.supernodes_.size(); ++s) {
    const Id v = tree.supernodes_[s];
    for (Id w : up[v]) {
      RawArc arc{static_cast<Id>(s), kNoId, {}};
      while (tree.supernodeOf_[w] == kNoId) {
        arc.regular.push_back(w);
        w = up[w].front();
      }
      arc.hi = tree.supernodeOf_[w];
      raw.push_back(std::move(arc));
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const RawArc& a, const RawArc& b) { return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi); });

  const std::size_t sn = tree.supernodes_.size();
  tree.upArcs_.assign(sn, {});
  tree.downArcs_.assign(sn, {});
  tree.regularOffsets_.assign(1, 0);
  for (std::size_t a = 0; a < raw.size(); ++a) {
    tree.superarcs_.push_back({raw[a].lo, raw[a].hi});
    tree.upArcs_[raw[a].lo].push_back(static_cast<Id>(a));
    tree.downArcs_[raw[a].hi].push_back(static_cast<Id>(a));
    for (Id r : raw[a].regular) {
      tree.arcOf_[r] = static_cast<Id>(a);
      tree.regularIndices_.push_back(r);
    }
    tree.regularOffsets_.push_back(tree.regularIndices_.size());
  }
  if (sn > 0 && tree.superarcs_.size() != sn - 1)
    throw std::logic_error("mergeTrees: result is not a tree");

  tree.finalize(order);
  return tree;
}

void ContourTree::finalize(const VertexOrder&)
{
  const std::size_t sn = supernodes_.size();
  parentArc_.assign(sn, kNoId);
  depth_.assign(sn, 0);
  postorder_.clear();
  if (sn == 0)
    return;
  root_ = static_cast<Id>(sn - 1); // highest rank: global maximum

  std::vector<Id> bfs{root_};
  std::vector<char> seen(sn, 0);
  seen[root_] = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    const Id s = bfs[i];
    for (const auto* list : {&downArcs_[s], &upArcs_[s]})
      for (Id a : *list) {
        const Id t = otherEnd(a, s);
        if (seen[t])
          continue;
        seen[t] = 1;
        parentArc_[t] = a;
        depth_[t] = depth_[s] + 1;
        bfs.push_back(t);
      }
  }
  if (bfs.size() != sn)
    throw std::logic_error("ContourTree: supernode graph is disconnected");
  postorder_.assign(bfs.rbegin(), bfs.rend());

  rootArc_ = kNoId;
  for (const auto* list : {&downArcs_[root_], &upArcs_[root_]})
    for (Id a : *list)
      if (rootArc_ == kNoId || a < rootArc_)
        rootArc_ = a;
  for (std::size_t s = 0; s < sn; ++s)
    arcOf_[supernodes_[s]] = canonicalArc(static_cast<Id>(s));
}

ContourTree buildContourTree(const TopologyGraph& graph, const VertexOrder& order, std::span<const double> values)
{
  if (!isConnected(graph))
    throw StructuralError("topology graph is disconnected; the contour tree needs a connected domain");
  return mergeTrees(buildJoinTree(graph, order), buildSplitTree(graph, order), order, values);
}

ContourTree buildContourTree(const TetMesh& mesh)
{
  return buildContourTree(buildTopologyGraph(mesh), buildVertexOrder(mesh), mesh.values);
}

namespace {

bool arcHolds(const ContourTree& tree, Id a, double h)
{
  return tree.arcLowValue(a) <= h && h < tree.arcHighValue(a);
}

void collectFromNode(const ContourTree& tree, Id s, double h, std::vector<Id>& found)
{
  const bool upward = h >= tree.supernodeValue(s);
  for (Id a : upward ? tree.upArcs(s) : tree.downArcs(s)) {
    if (arcHolds(tree, a, h))
      found.push_back(a);
    else
      collectFromNode(tree, tree.otherEnd(a, s), h, found);
  }
}

} // namespace

std::optional<Id> superarcAtValue(const ContourTree& tree, Id seedVertex, double h)
{
  std::vector<Id> found;
  if (const Id s = tree.supernodeOf(seedVertex); s != kNoId) {
    collectFromNode(tree, s, h, found);
  } else {
    const Id a = tree.arcOf(seedVertex);
    if (arcHolds(tree, a, h))
      return a;
    const Superarc& arc = tree.superarc(a);
    collectFromNode(tree, h >= tree.arcHighValue(a) ? arc.hi : arc.lo, h, found);
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.size() != 1)
    return std::nullopt;
  return found.front();
}

Id superarcBetween(const ContourTree& tree, Id below, Id above, double h)
{
  const Id nodeB = tree.supernodeOf(below);
  const Id nodeA = tree.supernodeOf(above);
  const Id arcB = tree.arcOf(below);
  const Id arcA = tree.arcOf(above);

  if (nodeB == kNoId && nodeA == kNoId && arcB == arcA)
    return arcB;
  if (nodeB == kNoId && h < tree.arcHighValue(arcB))
    return arcB;

  // the monotone path leaves a regular start through its upper end and
  // enters a regular target through its lower end
  Id x = nodeB != kNoId ? nodeB : tree.superarc(arcB).hi;
  Id y = nodeA != kNoId ? nodeA : tree.superarc(arcA).lo;

  std::size_t dx = tree.depth(x), dy = tree.depth(y);
  std::vector<Id> path;
  const auto climb = [&](Id& s, std::size_t& d) {
    const Id a = tree.parentArc(s);
    path.push_back(a);
    s = tree.otherEnd(a, s);
    --d;
  };
  while (dx > dy)
    climb(x, dx);
  while (dy > dx)
    climb(y, dy);
  while (x != y) {
    climb(x, dx);
    climb(y, dy);
  }
  for (Id a : path)
    if (arcHolds(tree, a, h))
      return a;
  if (nodeA == kNoId && h >= tree.arcLowValue(arcA))
    return arcA;
  throw std::logic_error("superarcBetween: no arc on the path holds the level; vertices are not a monotone pair");
}

ExtremaCount countLocalExtrema(const TopologyGraph& graph, const VertexOrder& order)
{
  ExtremaCount out;
  for (std::size_t v = 0; v < graph.vertexCount(); ++v) {
    bool isMin = true, isMax = true;
    for (Id u : graph.neighbors(static_cast<Id>(v))) {
      if (order.rank[u] < order.rank[v])
        isMin = false;
      else
        isMax = false;
    }
    out.minima += isMin;
    out.maxima += isMax;
  }
  return out;
}

} // namespace ctvol
