#include "ctvol/decomposition.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ctvol {

DirectedWeights::DirectedWeights(const ContourTree& tree, std::span<const double> pruneWeights)
  : tree_(tree)
  , prune_(pruneWeights.begin(), pruneWeights.end())
  , childSum_(tree.supernodeCount(), 0.0)
{
  if (prune_.size() != tree.superarcCount())
    throw std::invalid_argument("DirectedWeights: one weight per superarc required");
  for (std::size_t a = 0; a < prune_.size(); ++a)
    childSum_[tree.parentEnd(static_cast<Id>(a))] += prune_[a];
  if (tree.supernodeCount() > 0)
    total_ = childSum_[tree.root()];
}

double DirectedWeights::from(Id s, Id a) const
{
  if (tree_.parentEnd(a) == s)
    return prune_[a];
  return total_ - childSum_[s];
}

double branchScore(const ContourTree& tree, const DirectedWeights& weights, std::span<const Id> ascendingArcs)
{
  const Id first = ascendingArcs.front();
  const Id last = ascendingArcs.back();
  const Id bottom = tree.superarc(first).lo;
  const Id top = tree.superarc(last).hi;
  double score = weights.total();
  if (tree.degree(bottom) > 1)
    score = std::min(score, weights.from(bottom, first));
  if (tree.degree(top) > 1)
    score = std::min(score, weights.from(top, last));
  return score;
}

BranchDecomposition decompose(const ContourTree& tree, std::span<const double> pruneWeights)
{
  const DirectedWeights weights(tree, pruneWeights);
  const std::size_t sn = tree.supernodeCount();
  const std::size_t na = tree.superarcCount();

  const auto heaviest = [&](Id s, std::span<const Id> arcs) {
    Id best = kNoId;
    for (Id a : arcs)
      if (best == kNoId || weights.from(s, a) > weights.from(s, best) ||
          (weights.from(s, a) == weights.from(s, best) && a > best))
        best = a;
    return best;
  };
  std::vector<Id> bestUp(sn, kNoId), bestDown(sn, kNoId);
  for (std::size_t s = 0; s < sn; ++s) {
    const Id id = static_cast<Id>(s);
    if (!tree.upArcs(id).empty() && !tree.downArcs(id).empty()) {
      bestUp[s] = heaviest(id, tree.upArcs(id));
      bestDown[s] = heaviest(id, tree.downArcs(id));
    }
  }

  // chains: arc a continues upward through its top node when it is that node's best down arc
  const auto next = [&](Id a) {
    const Id hi = tree.superarc(a).hi;
    return bestDown[hi] == a ? bestUp[hi] : kNoId;
  };
  const auto prev = [&](Id a) {
    const Id lo = tree.superarc(a).lo;
    return bestUp[lo] == a ? bestDown[lo] : kNoId;
  };

  struct Chain
  {
    std::vector<Id> arcs;
    double score;
    Id maxArc;
  };
  std::vector<Chain> chains;
  std::vector<Id> chainOf(na, kNoId);
  for (std::size_t ai = 0; ai < na; ++ai) {
    const Id a = static_cast<Id>(ai);
    if (prev(a) != kNoId)
      continue;
    Chain c;
    for (Id x = a; x != kNoId; x = next(x)) {
      chainOf[x] = static_cast<Id>(chains.size());
      c.arcs.push_back(x);
    }
    c.score = branchScore(tree, weights, c.arcs);
    c.maxArc = *std::max_element(c.arcs.begin(), c.arcs.end());
    chains.push_back(std::move(c));
  }
  if (std::find(chainOf.begin(), chainOf.end(), kNoId) != chainOf.end())
    throw std::logic_error("decompose: branch chains do not cover every superarc");

  BranchDecomposition out;
  if (chains.empty())
    return out;

  std::size_t master = 0;
  for (std::size_t i = 1; i < chains.size(); ++i)
    if (chains[i].score > chains[master].score ||
        (chains[i].score == chains[master].score && chains[i].maxArc > chains[master].maxArc))
      master = i;

  // breadth-first hierarchy from the master through shared supernodes
  std::vector<Id> parentChain(chains.size(), kNoId), attach(chains.size(), kNoId);
  std::vector<double> weight(chains.size(), 0.0);
  std::vector<char> placed(chains.size(), 0);
  std::vector<std::size_t> queue{master};
  placed[master] = 1;
  weight[master] = weights.total();
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const std::size_t b = queue[qi];
    std::vector<Id> nodes{tree.superarc(chains[b].arcs.front()).lo};
    for (Id a : chains[b].arcs)
      nodes.push_back(tree.superarc(a).hi);
    for (Id s : nodes) {
      std::vector<Id> arcsAt(tree.downArcs(s).begin(), tree.downArcs(s).end());
      arcsAt.insert(arcsAt.end(), tree.upArcs(s).begin(), tree.upArcs(s).end());
      std::sort(arcsAt.begin(), arcsAt.end());
      for (Id a : arcsAt) {
        const std::size_t c = static_cast<std::size_t>(chainOf[a]);
        if (placed[c])
          continue;
        placed[c] = 1;
        parentChain[c] = static_cast<Id>(b);
        attach[c] = s;
        double w = 0.0;
        for (Id x : arcsAt)
          if (chainOf[x] == static_cast<Id>(c))
            w += weights.from(s, x);
        weight[c] = w;
        queue.push_back(c);
      }
    }
  }

  std::vector<std::size_t> ranked(chains.size());
  for (std::size_t i = 0; i < ranked.size(); ++i)
    ranked[i] = i;
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t x, std::size_t y) {
    if ((x == master) != (y == master))
      return x == master;
    if (weight[x] != weight[y])
      return weight[x] > weight[y];
    return chains[x].maxArc > chains[y].maxArc;
  });
  std::vector<Id> rankOf(chains.size());
  for (std::size_t r = 0; r < ranked.size(); ++r)
    rankOf[ranked[r]] = static_cast<Id>(r);

  out.branches.resize(chains.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const std::size_t c = ranked[r];
    Branch& br = out.branches[r];
    br.superarcs = chains[c].arcs;
    br.low = tree.superarc(br.superarcs.front()).lo;
    br.high = tree.superarc(br.superarcs.back()).hi;
    br.parent = parentChain[c] == kNoId ? kNoId : rankOf[parentChain[c]];
    br.attachment = attach[c];
    br.weight = weight[c];
    br.rank = r;
    br.maxSuperarc = chains[c].maxArc;
  }
  out.branchOfArc.resize(na);
  for (std::size_t a = 0; a < na; ++a)
    out.branchOfArc[a] = rankOf[chainOf[a]];
  return out;
}

std::vector<Branch> topBranches(const BranchDecomposition& d, std::size_t k)
{
  if (k == 0)
    throw std::invalid_argument("topBranches: k must be at least 1");
  const std::size_t n = std::min(k, d.branches.size());
  return {d.branches.begin(), d.branches.begin() + static_cast<std::ptrdiff_t>(n)};
}

} // namespace ctvol
