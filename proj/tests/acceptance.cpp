#include "ctvol/synthetic.h"
#include "ctvol/verify.h"

#include "test_support.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

#ifndef CT_BINARY
#error "CT_BINARY must name the ct executable"
#endif

using namespace ctvol;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240521;

struct Outcome
{
  bool passed = false;
  std::string detail;
};

Outcome fromCheck(const verify::CheckResult& r) { return {r.passed, verify::format(r)}; }

double secondsSince(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

int runCt(const std::string& args)
{
  const std::string cmd = std::string(CT_BINARY) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

Outcome splineCriterion()
{
  const auto start = Clock::now();
  const verify::CheckResult r = verify::splineVsClip(kSeed, 1000, 64);
  const double secs = secondsSince(start);
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.2fs of 10s", secs);
  return {r.passed && secs < 10.0, verify::format(r) + buf};
}

Outcome determinismCriterion()
{
  test::TempDir dir;
  synthetic::Rng rng(kSeed);
  writeTetgen(synthetic::jitteredGridMesh({22, 21, 20}, 0.3, rng), dir / "m.node", dir / "m.ele");
  const std::string input = "--node " + quoted(dir / "m.node") + " --ele " + quoted(dir / "m.ele") + " --field-attr 0";
  const std::vector<std::pair<std::string, int>> runs{{"a1", 1}, {"a8", 8}, {"b1", 1}, {"b8", 8}};
  for (const auto& [name, threads] : runs)
    if (runCt("run " + input + " --threads " + std::to_string(threads) + " --out " + quoted(dir / name)) != 0)
      return {false, "ct run failed for --threads " + std::to_string(threads)};
  std::size_t compared = 0;
  for (const char* file : {"tree.json", "weights.csv", "branches.json"}) {
    const std::string ref = test::readText(dir / "a1" / file);
    if (ref.empty())
      return {false, std::string(file) + " missing"};
    for (const auto& [name, threads] : runs) {
      if (name == "a1")
        continue;
      if (test::readText(dir / name / file) != ref)
        return {false, std::string(file) + " differs in run " + name};
      ++compared;
    }
  }
  return {true, std::to_string(compared) + " comparisons against the first --threads 1 run, all byte-identical"};
}

Outcome performanceCriterion()
{
  test::TempDir dir;
  synthetic::Rng rng(kSeed + 1);
  const TetMesh mesh = synthetic::jitteredGridMesh({47, 47, 47}, 0.3, rng);
  writeTetgen(mesh, dir / "big.node", dir / "big.ele");
  const auto start = Clock::now();
  const int rc = runCt("run --node " + quoted(dir / "big.node") + " --ele " + quoted(dir / "big.ele") +
                       " --field-attr 0 --out " + quoted(dir / "out"));
  const double secs = secondsSince(start);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu vertices, %zu tets, %.2fs of 60s", mesh.vertexCount(), mesh.tetCount(), secs);
  return {rc == 0 && secs < 60.0 && mesh.vertexCount() >= 100000, buf};
}

} // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"per-tet spline vs clipping oracle", splineCriterion},
      {"unit tet derivation", [] { return fromCheck(verify::unitTet()); }},
      {"continuity and co-area", [] { return fromCheck(verify::continuityAndCoarea(kSeed + 2, 1000, 16)); }},
      {"conservation", [] { return fromCheck(verify::conservation(kSeed + 3, 10, 8)); }},
      {"tree correctness", [] { return fromCheck(verify::treeContourCounts(kSeed + 4, 20, 8, 16)); }},
      {"hypersweep vs region oracle", [] { return fromCheck(verify::hypersweepVsRegion(kSeed + 5, 4, 8)); }},
      {"node count vs exact volume ranking", [] { return fromCheck(verify::countVersusVolume()); }},
      {"isosurface topology", [] { return fromCheck(verify::isosurfaceTopology()); }},
      {"determinism across thread counts", determinismCriterion},
      {"performance smoke test", performanceCriterion},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("criterion %zu %s: %s | %s\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
