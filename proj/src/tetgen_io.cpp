#include "ctvol/mesh.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace ctvol {

namespace {

/// Line reader that skips blank lines and '#' comments, tracking line numbers.
class TokenLines
{
public:
  explicit TokenLines(const std::filesystem::path& path)
    : name_(path.string())
    , in_(path)
  {
    if (!in_)
      throw std::runtime_error("cannot open " + name_);
  }

  /// Next non-empty line split into tokens; false at end of file.
  bool next(std::vector<std::string_view>& tokens)
  {
    while (std::getline(in_, line_)) {
      ++lineNo_;
      if (const auto hash = line_.find('#'); hash != std::string::npos)
        line_.resize(hash);
      tokens.clear();
      std::size_t i = 0;
      while (i < line_.size()) {
        while (i < line_.size() && std::isspace(static_cast<unsigned char>(line_[i])))
          ++i;
        std::size_t j = i;
        while (j < line_.size() && !std::isspace(static_cast<unsigned char>(line_[j])))
          ++j;
        if (j > i)
          tokens.emplace_back(line_.data() + i, j - i);
        i = j;
      }
      if (!tokens.empty())
        return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(name_, lineNo_, what); }

  long long integer(std::string_view tok) const
  {
    long long v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      fail("expected integer, got '" + std::string(tok) + "'");
    return v;
  }

  double real(std::string_view tok) const
  {
    double v = 0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+')
      ++first;
    const auto [p, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      // nan spellings become NaN for the data check
      if (tok == "nan" || tok == "NaN" || tok == "-nan")
        return std::nan("");
      fail("expected number, got '" + std::string(tok) + "'");
    }
    return v;
  }

  std::size_t lineNo() const { return lineNo_; }
  const std::string& name() const { return name_; }

private:
  std::string name_;
  std::ifstream in_;
  std::string line_;
  std::size_t lineNo_ = 0;
};

} // namespace

std::vector<double> readValuesFile(const std::filesystem::path& path)
{
  TokenLines lines(path);
  std::vector<std::string_view> tok;
  std::vector<double> values;
  while (lines.next(tok)) {
    if (tok.size() != 1)
      lines.fail("expected one value per line");
    values.push_back(lines.real(tok[0]));
  }
  return values;
}

std::vector<double> readRawGrid(const std::filesystem::path& path, std::size_t expectedCount)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != expectedCount * 8)
    throw StructuralError(path.string() + ": expected " + std::to_string(expectedCount * 8) + " bytes, found " +
                          std::to_string(bytes.size()));
  std::vector<double> values(expectedCount);
  for (std::size_t i = 0; i < expectedCount; ++i) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b)
      bits = (bits << 8) | bytes[8 * i + b];
    std::memcpy(&values[i], &bits, sizeof(double));
  }
  return values;
}

TetMesh loadTetgen(const std::filesystem::path& nodePath, const std::filesystem::path& elePath,
                   const FieldSource& field)
{
  if (field.valuesFile.has_value() == field.attribute.has_value())
    throw std::invalid_argument("loadTetgen: give exactly one of a values file or a node attribute");

  TetMesh mesh;
  std::vector<std::string_view> tok;
  Id base = 0;

  {
    TokenLines node(nodePath);
    if (!node.next(tok) || tok.size() < 2)
      node.fail("missing header '<#points> <dim> <#attrs> <#markers>'");
    const long long count = node.integer(tok[0]);
    const long long dim = node.integer(tok[1]);
    const long long attrs = tok.size() > 2 ? node.integer(tok[2]) : 0;
    const long long markers = tok.size() > 3 ? node.integer(tok[3]) : 0;
    if (count < 0 || dim != 3 || attrs < 0 || markers < 0 || markers > 1)
      node.fail("bad header values");
    if (field.attribute && static_cast<long long>(*field.attribute) >= attrs)
      node.fail("field attribute " + std::to_string(*field.attribute) + " requested but file declares " +
                std::to_string(attrs));

    mesh.positions.resize(count);
    if (field.attribute)
      mesh.values.resize(count);
    const std::size_t width = 4 + attrs + markers;
    for (long long i = 0; i < count; ++i) {
      if (!node.next(tok))
        node.fail("expected " + std::to_string(count) + " points, file ended after " + std::to_string(i));
      if (tok.size() != width)
        node.fail("expected " + std::to_string(width) + " columns, got " + std::to_string(tok.size()));
      const long long index = node.integer(tok[0]);
      if (i == 0) {
        if (index != 0 && index != 1)
          node.fail("first point index must be 0 or 1");
        base = index;
      }
      if (index - base != i)
        throw StructuralError(node.name() + ":" + std::to_string(node.lineNo()) + ": point index " +
                              std::to_string(index) + " out of sequence");
      mesh.positions[i] = {node.real(tok[1]), node.real(tok[2]), node.real(tok[3])};
      if (field.attribute)
        mesh.values[i] = node.real(tok[4 + *field.attribute]);
    }
  }

  {
    TokenLines ele(elePath);
    if (!ele.next(tok) || tok.size() < 2)
      ele.fail("missing header '<#tets> <nodes-per-tet> <#attrs>'");
    const long long count = ele.integer(tok[0]);
    const long long perTet = ele.integer(tok[1]);
    const long long attrs = tok.size() > 2 ? ele.integer(tok[2]) : 0;
    if (count < 0 || perTet != 4 || attrs < 0)
      ele.fail("bad header values (only 4-node tets are supported)");
    mesh.tets.resize(count);
    const auto n = static_cast<long long>(mesh.positions.size());
    for (long long t = 0; t < count; ++t) {
      if (!ele.next(tok))
        ele.fail("expected " + std::to_string(count) + " tets, file ended after " + std::to_string(t));
      if (tok.size() != static_cast<std::size_t>(5 + attrs))
        ele.fail("expected " + std::to_string(5 + attrs) + " columns, got " + std::to_string(tok.size()));
      for (int c = 0; c < 4; ++c) {
        const long long v = ele.integer(tok[1 + c]) - base;
        if (v < 0 || v >= n)
          throw StructuralError(ele.name() + ":" + std::to_string(ele.lineNo()) + ": tet " + std::to_string(t) +
                                " references vertex " + std::to_string(v + base) + " of a " +
                                std::to_string(n) + "-point mesh");
        mesh.tets[t][c] = v;
      }
    }
  }

  if (field.valuesFile) {
    mesh.values = readValuesFile(*field.valuesFile);
    if (mesh.values.size() != mesh.positions.size())
      throw StructuralError(field.valuesFile->string() + ": " + std::to_string(mesh.values.size()) +
                            " values for " + std::to_string(mesh.positions.size()) + " points");
  }

  validate(mesh);
  return mesh;
}

void writeTetgen(const TetMesh& mesh, const std::filesystem::path& nodePath, const std::filesystem::path& elePath)
{
  std::ofstream node(nodePath);
  node << std::setprecision(17);
  node << mesh.vertexCount() << " 3 1 0\n";
  for (std::size_t v = 0; v < mesh.vertexCount(); ++v) {
    const Vec3& p = mesh.positions[v];
    node << v + 1 << ' ' << p.x << ' ' << p.y << ' ' << p.z << ' ' << mesh.values[v] << '\n';
  }
  std::ofstream ele(elePath);
  ele << mesh.tetCount() << " 4 0\n";
  for (std::size_t t = 0; t < mesh.tetCount(); ++t) {
    const Tet& k = mesh.tets[t];
    ele << t + 1 << ' ' << k[0] + 1 << ' ' << k[1] + 1 << ' ' << k[2] + 1 << ' ' << k[3] + 1 << '\n';
  }
  if (!node || !ele)
    throw std::runtime_error("failed writing " + nodePath.string() + " / " + elePath.string());
}

} // namespace ctvol
