#include "vqc/gates.hpp"

#include <filesystem>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace vqc {

namespace {

ComplexMatrix permutation(int dim, const std::vector<int>& image) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) m(image[col], col) = 1.0;
  return m;
}

}  // namespace

TargetGate toffoli() {
  // |110> <-> |111>
  return {"toffoli", permutation(8, {0, 1, 2, 3, 4, 5, 7, 6}), 3};
}

TargetGate fredkin() {
  // |101> <-> |110>
  return {"fredkin", permutation(8, {0, 1, 2, 3, 4, 6, 5, 7}), 3};
}

TargetGate elementary(std::string_view name) {
  if (name == "H") {
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return {"H", h / std::sqrt(2.0), 1};
  }
  if (name == "CNOT") return {"CNOT", permutation(4, {0, 1, 3, 2}), 2};
  if (name == "I") return {"I", ComplexMatrix::Identity(2, 2), 1};
  throw UnknownGate("unknown elementary gate '" + std::string(name) + "'");
}

TargetGate load_target_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open target matrix file '" + path + "'");
  std::vector<std::vector<Complex<double>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<Complex<double>> row;
    while (ls >> tok) {
      const auto comma = tok.find(',');
      if (comma == std::string::npos) {
        throw ConfigError("target matrix entry '" + tok + "' is not a re,im pair");
      }
      try {
        row.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
      } catch (const std::exception&) {
        throw ConfigError("target matrix entry '" + tok + "' is not numeric");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const auto dim = static_cast<Eigen::Index>(rows.size());
  if (dim == 0) throw ConfigError("target matrix file '" + path + "' is empty");
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != dim) {
      throw DimMismatch("target matrix is not square");
    }
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  }
  const int n = qubit_count(dim);
  if (!is_unitary(m)) throw ConfigError("target matrix in '" + path + "' is not unitary");
  return {path, m, n};
}

TargetGate target_by_name(const std::string& name_or_path) {
  if (name_or_path == "toffoli") return toffoli();
  if (name_or_path == "fredkin") return fredkin();
  if (!std::filesystem::exists(name_or_path)) {
    throw UnknownGate("unknown target '" + name_or_path + "' (not a gate name or matrix file)");
  }
  return load_target_matrix(name_or_path);
}

}  // namespace vqc
