#pragma once

#include <string>
#include <string_view>

#include "vqc/tensor.hpp"

namespace vqc {

struct TargetGate {
  std::string name;
  ComplexMatrix matrix;
  int n = 0;
};

/// Controls on qubits 1 and 2, target on qubit 3.
TargetGate toffoli();
/// Control on qubit 1, swaps qubits 2 and 3.
TargetGate fredkin();
/// "H", "CNOT" (control qubit 1) or "I" (single qubit).
TargetGate elementary(std::string_view name);

/// Reads a square matrix written as rows of whitespace-separated "re,im" pairs.
TargetGate load_target_matrix(const std::string& path);

/// "toffoli", "fredkin", or a path to a matrix file.
TargetGate target_by_name(const std::string& name_or_path);

}  // namespace vqc
