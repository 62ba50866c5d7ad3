#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wforge/tensor.hpp"

namespace wforge {

// One arrangement of qubit groups for a pure k-separable state. The state is
// built as a tensor product of `parts` in order, then `swaps` (1-based qubit
// pairs) are applied first to last. Labels follow the permutation tables, with
// groups separated by '|'.
struct PermutationSpec {
  std::vector<int> parts;
  std::string label;
  std::vector<std::pair<int, int>> swaps;

  int n_qubits() const;
  // max_j 2^{nu_j}: independent copies needed to reach the maximally mixed
  // state of the largest group.
  int copies() const;
  // Final qubit (1-based) of each tensor position after the swaps.
  std::vector<int> qubit_positions() const;
  // Qubit groups after the swaps, each listed in tensor order.
  std::vector<std::vector<int>> groups() const;
  // Index map: amplitude j of the unpermuted product lands at map[j].
  std::vector<std::uint64_t> index_map() const;
};

// Tables of biseparable arrangements for N in {3, 4, 5}.
std::vector<PermutationSpec> permutation_table(int n_qubits);

// All single-qubit parts, no swaps ("1|2|...|N").
PermutationSpec fully_separable_spec(int n_qubits);

// Parses "13|24" style labels into groups of 1-based qubits.
std::vector<std::vector<int>> parse_arrangement(const std::string& label);

// Tensor product of part states followed by the spec's swaps.
StateVector arrange_product(const std::vector<VectorXc>& part_states, const PermutationSpec& spec);

}  // namespace wforge
