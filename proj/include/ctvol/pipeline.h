#pragma once

#include "ctvol/contour_tree.h"
#include "ctvol/decomposition.h"
#include "ctvol/hypersweep.h"
#include "ctvol/mesh.h"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ctvol {

enum class WeightMethod { Count, Volume };

struct PipelineConfig
{
  // TetGen input
  std::optional<std::filesystem::path> nodePath;
  std::optional<std::filesystem::path> elePath;
  FieldSource field;
  // grid input
  std::optional<GridDims> dims;
  std::optional<std::filesystem::path> rawPath;
  Vec3 spacing{1, 1, 1};

  WeightMethod weights = WeightMethod::Volume;
  std::size_t topK = 6;
  std::map<Id, double> isovalues; // superarc -> isovalue overrides
  std::filesystem::path outDir = ".";
  std::optional<std::filesystem::path> tetCoefficientsCsv;
  std::size_t threads = 0; // 0: hardware concurrency
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless exactly one input is fully given and topK >= 1.
  void validate() const;
};

/// Failure inside one pipeline stage.
class PipelineError : public std::runtime_error
{
public:
  PipelineError(std::string stage, const std::string& what);
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

struct StageTimes
{
  double load = 0;
  double construction = 0;  // graph, order, join/split, merge
  double weights = 0;       // splines, deltas, hypersweep, counts
  double decomposition = 0;
  double extraction = 0;
};

/// Everything computed from one mesh.
struct Analysis
{
  explicit Analysis(ContourTree t) : tree(std::move(t)) {}

  ContourTree tree;
  VolumeSweep volumes;
  NodeCountWeight counts;
  std::vector<double> pruneWeights; // of the chosen method
  BranchDecomposition branches;
  StageTimes times;
};

Analysis analyze(const TetMesh& mesh, WeightMethod method);

/// Contour picked to display one branch.
struct BranchContour
{
  Id superarc = kNoId;
  double isovalue = 0.0;
};
/// The master branch is cut at the middle of its value range; other branches
/// at the middle of their arc touching the attachment supernode. An override
/// naming one of the branch's superarcs wins.
BranchContour chooseContour(const ContourTree& tree, const Branch& branch, const std::map<Id, double>& overrides);

TetMesh loadInput(const PipelineConfig& config);

void writeTreeJson(const ContourTree& tree, const std::filesystem::path& path);
void writeWeightsCsv(const Analysis& a, const std::filesystem::path& path);
void writeBranchesJson(const BranchDecomposition& d, const std::filesystem::path& path);
void writeTetCoefficientsCsv(const TetMesh& mesh, const std::filesystem::path& path);

struct RunSummary
{
  std::size_t vertices = 0;
  std::size_t tets = 0;
  std::size_t supernodes = 0;
  std::size_t superarcs = 0;
  std::size_t branches = 0;
  double totalVolume = 0.0;
  StageTimes times;
};

/// Load, analyse and write every artifact into config.outDir. Errors are
/// rethrown as PipelineError naming the stage.
RunSummary runPipeline(const PipelineConfig& config, std::ostream& log);

/// Per-stage wall-clock seconds for one mesh, as a CSV row.
struct BenchRow
{
  std::string name;
  std::size_t vertices = 0;
  std::size_t tets = 0;
  StageTimes times;
};
BenchRow benchmark(const std::string& name, const TetMesh& mesh, WeightMethod method);
void writeBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out);

} // namespace ctvol
