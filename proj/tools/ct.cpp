#include "ctvol/parallel.h"
#include "ctvol/pipeline.h"
#include "ctvol/synthetic.h"
#include "ctvol/verify.h"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <thread>

namespace {

using namespace ctvol;

struct InputFlags
{
  std::string node, ele, field, raw;
  std::optional<std::size_t> fieldAttr;
  std::vector<std::size_t> dims;
  std::vector<double> spacing;
  std::string weights = "volume";
  std::size_t threads = 0;
  std::uint64_t seed = 0;
};

void addInputFlags(CLI::App* cmd, InputFlags& f)
{
  cmd->add_option("--node", f.node, "TetGen .node file");
  cmd->add_option("--ele", f.ele, "TetGen .ele file");
  cmd->add_option("--field", f.field, "scalar per vertex, one value per line");
  cmd->add_option("--field-attr", f.fieldAttr, "use this .node attribute column as the field");
  cmd->add_option("--dims", f.dims, "grid vertex counts NX NY NZ")->expected(3);
  cmd->add_option("--raw", f.raw, "grid values, little-endian float64, x fastest");
  cmd->add_option("--spacing", f.spacing, "grid spacing SX SY SZ")->expected(3);
  cmd->add_option("--weights", f.weights, "superarc weight")->check(CLI::IsMember({"count", "volume"}));
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
  cmd->add_option("--seed", f.seed, "random seed");
}

PipelineConfig toConfig(const InputFlags& f)
{
  PipelineConfig c;
  if (!f.node.empty())
    c.nodePath = f.node;
  if (!f.ele.empty())
    c.elePath = f.ele;
  if (!f.field.empty())
    c.field.valuesFile = f.field;
  c.field.attribute = f.fieldAttr;
  if (!f.dims.empty())
    c.dims = GridDims{f.dims[0], f.dims[1], f.dims[2]};
  if (!f.raw.empty())
    c.rawPath = f.raw;
  if (!f.spacing.empty())
    c.spacing = {f.spacing[0], f.spacing[1], f.spacing[2]};
  c.weights = f.weights == "count" ? WeightMethod::Count : WeightMethod::Volume;
  c.threads = f.threads;
  c.seed = f.seed;
  return c;
}

std::pair<Id, double> parseIsovalue(const std::string& s)
{
  const auto eq = s.find('=');
  if (eq == std::string::npos)
    throw CLI::ValidationError("--isovalue", "expected SUPERARC=H, got " + s);
  try {
    std::size_t used = 0;
    const long long arc = std::stoll(s.substr(0, eq), &used);
    if (used != eq)
      throw std::invalid_argument(s);
    const std::string rest = s.substr(eq + 1);
    const double h = std::stod(rest, &used);
    if (used != rest.size())
      throw std::invalid_argument(s);
    return {static_cast<Id>(arc), h};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--isovalue", "expected SUPERARC=H, got " + s);
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Contour tree volumes, branch decomposition and flexible isosurfaces"};
  app.require_subcommand(1);

  InputFlags runFlags;
  std::size_t topK = 6;
  std::vector<std::string> isovalues;
  std::string outDir = ".";
  std::string tetCsv;
  auto* run = app.add_subcommand("run", "analyse a mesh and write tree.json, weights.csv, branches.json, branch_<rank>.obj, branches.mtl");
  addInputFlags(run, runFlags);
  run->add_option("--top", topK, "number of branches to extract");
  run->add_option("--isovalue", isovalues, "SUPERARC=H isovalue override (repeatable)");
  run->add_option("--out", outDir, "output directory");
  run->add_option("--dump-tet-coefficients", tetCsv, "also write per-tet spline coefficients to this CSV");

  std::uint64_t verifySeed = 42;
  std::size_t verifyTets = 1000;
  auto* verifyCmd = app.add_subcommand("verify", "run the oracle property suites");
  verifyCmd->add_option("--seed", verifySeed, "random seed");
  verifyCmd->add_option("--tets", verifyTets, "random tets for the spline suite")->check(CLI::PositiveNumber);

  InputFlags benchFlags;
  std::vector<std::size_t> benchSizes{10, 20, 30};
  auto* bench = app.add_subcommand("bench", "per-stage timings as CSV; synthetic jittered grids unless an input is given");
  addInputFlags(bench, benchFlags);
  bench->add_option("--sizes", benchSizes, "edge lengths of the synthetic grids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      PipelineConfig config = toConfig(runFlags);
      config.topK = topK;
      config.outDir = outDir;
      for (const std::string& s : isovalues) {
        const auto [arc, h] = parseIsovalue(s);
        config.isovalues[arc] = h;
      }
      if (!tetCsv.empty())
        config.tetCoefficientsCsv = tetCsv;
      runPipeline(config, std::cout);
      return 0;
    }
    if (verifyCmd->parsed()) {
      bool ok = true;
      for (const auto& r : verify::runAll(verifySeed, verifyTets)) {
        std::cout << verify::format(r) << std::endl;
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
    if (bench->parsed()) {
      PipelineConfig config = toConfig(benchFlags);
      setThreadCount(config.threads > 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency()));
      const WeightMethod method = config.weights;
      std::vector<BenchRow> rows;
      if (config.nodePath || config.dims) {
        config.validate();
        rows.push_back(benchmark("input", loadInput(config), method));
      } else {
        synthetic::Rng rng(benchFlags.seed);
        for (std::size_t n : benchSizes) {
          const TetMesh mesh = synthetic::jitteredGridMesh({n, n, n}, 0.1, rng);
          rows.push_back(benchmark("jittered_" + std::to_string(n), mesh, method));
        }
      }
      writeBenchCsv(rows, std::cout);
      return 0;
    }
  } catch (const PipelineError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
