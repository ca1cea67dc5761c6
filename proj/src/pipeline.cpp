#include "ctvol/pipeline.h"

#include "ctvol/geometry.h"
#include "ctvol/isosurface.h"
#include "ctvol/parallel.h"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

namespace ctvol {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Runs f, rethrowing any failure as a PipelineError for `stage`.
template <class F>
auto inStage(const char* stage, F&& f) -> decltype(f())
{
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

std::string formatDouble(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void writeJson(const nlohmann::json& j, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out)
    throw std::runtime_error("error writing " + path.string());
}

} // namespace

void PipelineConfig::validate() const
{
  const bool tetgen = nodePath.has_value() || elePath.has_value();
  const bool grid = dims.has_value() || rawPath.has_value();
  if (tetgen == grid)
    throw std::invalid_argument("give exactly one input: --node/--ele or --dims/--raw");
  if (tetgen) {
    if (!nodePath || !elePath)
      throw std::invalid_argument("TetGen input needs both --node and --ele");
    if (field.valuesFile.has_value() == field.attribute.has_value())
      throw std::invalid_argument("TetGen input needs exactly one of --field or --field-attr");
  } else {
    if (!dims || !rawPath)
      throw std::invalid_argument("grid input needs both --dims and --raw");
    if (dims->nx < 2 || dims->ny < 2 || dims->nz < 2)
      throw std::invalid_argument("grid dimensions must each be at least 2");
    if (!(spacing.x > 0 && spacing.y > 0 && spacing.z > 0))
      throw std::invalid_argument("grid spacing must be positive");
  }
  if (topK < 1)
    throw std::invalid_argument("--top must be at least 1");
}

PipelineError::PipelineError(std::string stage, const std::string& what)
  : std::runtime_error(stage + ": " + what)
  , stage_(std::move(stage))
{
}

Analysis analyze(const TetMesh& mesh, WeightMethod method)
{
  auto start = Clock::now();
  Analysis a(inStage("construction", [&] {
    const TopologyGraph graph = buildTopologyGraph(mesh);
    const VertexOrder order = buildVertexOrder(mesh);
    return buildContourTree(graph, order, mesh.values);
  }));
  a.times.construction = secondsSince(start);

  start = Clock::now();
  inStage("weights", [&] {
    const VertexOrder order = buildVertexOrder(mesh);
    const auto splines = buildTetSplines(mesh, order);
    const auto deltas = computeDeltas(mesh, order, splines);
    a.volumes = sweepVolumes(a.tree, deltas);
    a.counts = countRegularNodes(a.tree);
    a.pruneWeights.resize(a.tree.superarcCount());
    for (std::size_t i = 0; i < a.pruneWeights.size(); ++i)
      a.pruneWeights[i] = method == WeightMethod::Volume ? a.volumes.arcs[i].pruneWeight
                                                         : static_cast<double>(a.counts.pruneWeight[i]);
  });
  a.times.weights = secondsSince(start);

  start = Clock::now();
  a.branches = inStage("decomposition", [&] { return decompose(a.tree, a.pruneWeights); });
  a.times.decomposition = secondsSince(start);
  return a;
}

BranchContour chooseContour(const ContourTree& tree, const Branch& branch, const std::map<Id, double>& overrides)
{
  for (Id arc : branch.superarcs)
    if (const auto it = overrides.find(arc); it != overrides.end())
      return {arc, it->second};

  if (branch.parent == kNoId) {
    const double h = 0.5 * (tree.supernodeValue(branch.low) + tree.supernodeValue(branch.high));
    for (Id arc : branch.superarcs)
      if (tree.arcLowValue(arc) <= h && h < tree.arcHighValue(arc))
        return {arc, h};
    return {branch.superarcs.front(), h};
  }
  Id arc = branch.superarcs.front();
  if (branch.attachment == branch.high)
    arc = branch.superarcs.back();
  else if (branch.attachment != branch.low)
    for (Id x : branch.superarcs)
      if (tree.superarc(x).lo == branch.attachment)
        arc = x;
  return {arc, 0.5 * (tree.arcLowValue(arc) + tree.arcHighValue(arc))};
}

TetMesh loadInput(const PipelineConfig& config)
{
  if (config.nodePath)
    return loadTetgen(*config.nodePath, *config.elePath, config.field);
  const auto values = readRawGrid(*config.rawPath, config.dims->count());
  TetMesh mesh = gridToTets(*config.dims, values, config.spacing);
  validate(mesh);
  return mesh;
}

void writeTreeJson(const ContourTree& tree, const std::filesystem::path& path)
{
  nlohmann::json supernodes = nlohmann::json::array();
  for (std::size_t s = 0; s < tree.supernodeCount(); ++s) {
    const Id id = static_cast<Id>(s);
    supernodes.push_back({{"id", id}, {"vertex", tree.supernodeVertex(id)}, {"value", tree.supernodeValue(id)}});
  }
  nlohmann::json superarcs = nlohmann::json::array();
  for (std::size_t a = 0; a < tree.superarcCount(); ++a) {
    const Id id = static_cast<Id>(a);
    superarcs.push_back({{"id", id},
                         {"lo", tree.superarc(id).lo},
                         {"hi", tree.superarc(id).hi},
                         {"regularCount", tree.regulars(id).size()}});
  }
  writeJson({{"schema", 1}, {"supernodes", supernodes}, {"superarcs", superarcs}}, path);
}

void writeWeightsCsv(const Analysis& a, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << "superarc,h_lo,h_hi,a,b,c,d,weight\n";
  for (std::size_t i = 0; i < a.tree.superarcCount(); ++i) {
    const Id id = static_cast<Id>(i);
    const CubicPoly p = a.volumes.arcs[i].parentEndPiece.rounded();
    out << id << ',' << formatDouble(a.tree.arcLowValue(id)) << ',' << formatDouble(a.tree.arcHighValue(id)) << ','
        << formatDouble(p.a) << ',' << formatDouble(p.b) << ',' << formatDouble(p.c) << ',' << formatDouble(p.d)
        << ',' << formatDouble(a.pruneWeights[i]) << '\n';
  }
  if (!out)
    throw std::runtime_error("error writing " + path.string());
}

void writeBranchesJson(const BranchDecomposition& d, const std::filesystem::path& path)
{
  nlohmann::json branches = nlohmann::json::array();
  for (const Branch& b : d.branches) {
    nlohmann::json j{{"rank", b.rank}, {"weight", b.weight}, {"superarcs", b.superarcs}};
    j["parent"] = b.parent == kNoId ? nlohmann::json(nullptr) : nlohmann::json(b.parent);
    j["attachmentSupernode"] = b.attachment == kNoId ? nlohmann::json(nullptr) : nlohmann::json(b.attachment);
    branches.push_back(std::move(j));
  }
  writeJson({{"schema", 1}, {"branches", branches}}, path);
}

void writeTetCoefficientsCsv(const TetMesh& mesh, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  const VertexOrder order = buildVertexOrder(mesh);
  const auto splines = buildTetSplines(mesh, order);
  out << "tet,piece,h_lo,h_hi,a,b,c,d\n";
  for (std::size_t t = 0; t < splines.size(); ++t) {
    const TetSpline& s = splines[t];
    for (std::size_t k = 0; k < 3; ++k) {
      const CubicPoly p = s.pieces[k].rounded();
      out << t << ',' << k << ',' << formatDouble(s.breaks[k]) << ',' << formatDouble(s.breaks[k + 1]) << ','
          << formatDouble(p.a) << ',' << formatDouble(p.b) << ',' << formatDouble(p.c) << ',' << formatDouble(p.d)
          << '\n';
    }
  }
}

RunSummary runPipeline(const PipelineConfig& config, std::ostream& log)
{
  inStage("config", [&] { config.validate(); });
  setThreadCount(config.threads > 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency()));

  auto start = Clock::now();
  const TetMesh mesh = inStage("load", [&] { return loadInput(config); });
  const double loadTime = secondsSince(start);

  Analysis a = analyze(mesh, config.weights);
  a.times.load = loadTime;

  inStage("config", [&] {
    for (const auto& [arc, h] : config.isovalues)
      if (arc < 0 || static_cast<std::size_t>(arc) >= a.tree.superarcCount())
        throw std::invalid_argument("--isovalue names superarc " + std::to_string(arc) + " but the tree has " +
                                    std::to_string(a.tree.superarcCount()));
  });

  inStage("output", [&] {
    std::filesystem::create_directories(config.outDir);
    writeTreeJson(a.tree, config.outDir / "tree.json");
    writeWeightsCsv(a, config.outDir / "weights.csv");
    writeBranchesJson(a.branches, config.outDir / "branches.json");
    if (config.tetCoefficientsCsv)
      writeTetCoefficientsCsv(mesh, *config.tetCoefficientsCsv);
    writeBranchMtl(config.outDir / "branches.mtl", topBranches(a.branches, config.topK).size());
  });

  start = Clock::now();
  inStage("extraction", [&] {
    for (const Branch& b : topBranches(a.branches, config.topK)) {
      const BranchContour c = chooseContour(a.tree, b, config.isovalues);
      TriangleSoup soup;
      if (config.isovalues.count(c.superarc) > 0 ||
          (a.tree.arcLowValue(c.superarc) <= c.isovalue && c.isovalue < a.tree.arcHighValue(c.superarc)))
        soup = extractSuperarcContour(mesh, a.tree, c.superarc, c.isovalue);
      const std::string name = "superarc_" + std::to_string(c.superarc);
      const std::string rank = std::to_string(b.rank);
      writeObj(config.outDir / ("branch_" + rank + ".obj"), {ObjGroup{name, "branch_" + rank, &soup}},
               "branches.mtl");
      char line[160];
      std::snprintf(line, sizeof line, "branch %zu: superarc %lld at %.9g, %zu triangles\n", b.rank,
                    static_cast<long long>(c.superarc), c.isovalue, soup.triangleCount());
      log << line;
    }
  });
  a.times.extraction = secondsSince(start);

  RunSummary s;
  s.vertices = mesh.vertexCount();
  s.tets = mesh.tetCount();
  s.supernodes = a.tree.supernodeCount();
  s.superarcs = a.tree.superarcCount();
  s.branches = a.branches.branches.size();
  s.totalVolume = a.volumes.totalVolume;
  s.times = a.times;

  char buf[512];
  std::snprintf(buf, sizeof buf,
                "vertices %zu\ntets %zu\nsupernodes %zu\nsuperarcs %zu\nbranches %zu\n"
                "total volume %.17g (mesh %.17g)\n"
                "time load %.3fs construction %.3fs weights %.3fs decomposition %.3fs extraction %.3fs\n",
                s.vertices, s.tets, s.supernodes, s.superarcs, s.branches, s.totalVolume, mesh.totalVolume(),
                s.times.load, s.times.construction, s.times.weights, s.times.decomposition, s.times.extraction);
  log << buf;
  return s;
}

BenchRow benchmark(const std::string& name, const TetMesh& mesh, WeightMethod method)
{
  const Analysis a = analyze(mesh, method);
  return {name, mesh.vertexCount(), mesh.tetCount(), a.times};
}

void writeBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out)
{
  out << "mesh,vertices,tets,construction,weights,branch_decomposition\n";
  char buf[128];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, ",%zu,%zu,%.6f,%.6f,%.6f\n", r.vertices, r.tets, r.times.construction,
                  r.times.weights, r.times.decomposition);
    out << r.name << buf;
  }
}

} // namespace ctvol
