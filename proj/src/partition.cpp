#include "wforge/partition.hpp"

#include <algorithm>
#include <numeric>

namespace wforge {

int PermutationSpec::n_qubits() const { return std::accumulate(parts.begin(), parts.end(), 0); }

int PermutationSpec::copies() const {
  int nu = 0;
  for (int p : parts) nu = std::max(nu, p);
  return 1 << nu;
}

std::vector<int> PermutationSpec::qubit_positions() const {
  const int n = n_qubits();
  // content[q] = tensor position currently sitting at qubit q.
  std::vector<int> content(static_cast<std::size_t>(n));
  std::iota(content.begin(), content.end(), 1);
  for (auto [a, b] : swaps) std::swap(content[static_cast<std::size_t>(a - 1)], content[static_cast<std::size_t>(b - 1)]);
  std::vector<int> where(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) where[static_cast<std::size_t>(content[static_cast<std::size_t>(q - 1)] - 1)] = q;
  return where;
}

std::vector<std::vector<int>> PermutationSpec::groups() const {
  const auto where = qubit_positions();
  std::vector<std::vector<int>> out;
  int pos = 0;
  for (int size : parts) {
    std::vector<int> g;
    for (int k = 0; k < size; ++k) g.push_back(where[static_cast<std::size_t>(pos++)]);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::uint64_t> PermutationSpec::index_map() const {
  const int n = n_qubits();
  const std::uint64_t dim = dimension_for_qubits(n);
  std::vector<std::uint64_t> map(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    std::uint64_t idx = j;
    for (auto [a, b] : swaps) idx = swap_index_bits(idx, a, b, n);
    map[j] = idx;
  }
  return map;
}

namespace {

PermutationSpec make(std::vector<int> parts, std::string label, std::vector<std::pair<int, int>> swaps = {}) {
  return PermutationSpec{std::move(parts), std::move(label), std::move(swaps)};
}

}  // namespace

std::vector<PermutationSpec> permutation_table(int n_qubits) {
  switch (n_qubits) {
    case 3:
      return {
          make({1, 2}, "1|23"),
          make({1, 2}, "2|13", {{1, 2}}),
          make({2, 1}, "3|12"),
      };
    case 4:
      return {
          make({1, 3}, "1|234"),
          make({1, 3}, "2|134", {{1, 2}}),
          make({1, 3}, "3|124", {{1, 3}}),
          make({1, 3}, "4|123", {{1, 4}}),
          make({2, 2}, "12|34"),
          make({2, 2}, "13|24", {{2, 3}}),
          make({2, 2}, "14|23", {{2, 4}}),
      };
    case 5:
      // Swap lists are in application order: "S23 S15" applies S15 first.
      return {
          make({1, 4}, "1|2345"),
          make({1, 4}, "2|1345", {{1, 2}}),
          make({1, 4}, "3|1245", {{1, 3}}),
          make({1, 4}, "4|1235", {{1, 4}}),
          make({1, 4}, "5|1234", {{1, 5}}),

          make({2, 3}, "12|345"),
          make({2, 3}, "13|245", {{2, 3}}),
          make({2, 3}, "14|325", {{2, 4}}),
          make({2, 3}, "15|324", {{2, 5}}),
          make({2, 3}, "23|145", {{1, 3}}),
          make({2, 3}, "24|135", {{1, 4}}),
          make({2, 3}, "25|134", {{1, 5}}),
          make({2, 3}, "35|124", {{1, 5}, {2, 3}}),
          make({2, 3}, "45|123", {{1, 5}, {2, 4}}),
          make({2, 3}, "34|125", {{1, 4}, {2, 3}}),

          make({2, 2, 1}, "12|34|5"),
          make({2, 2, 1}, "13|24|5", {{2, 3}}),
          make({2, 2, 1}, "14|32|5", {{2, 4}}),
          make({2, 2, 1}, "15|34|2", {{2, 5}}),
          make({2, 2, 1}, "25|34|1", {{1, 5}}),
          make({2, 2, 1}, "12|45|3", {{3, 5}}),
          make({2, 2, 1}, "12|35|4", {{4, 5}}),
          make({2, 2, 1}, "35|24|1", {{1, 5}, {2, 3}}),
          make({2, 2, 1}, "45|23|1", {{1, 5}, {2, 4}}),
          make({2, 2, 1}, "35|14|2", {{1, 3}, {2, 5}}),
          make({2, 2, 1}, "45|13|2", {{1, 4}, {2, 5}}),
          make({2, 2, 1}, "14|25|3", {{2, 4}, {3, 5}}),
          make({2, 2, 1}, "24|15|3", {{1, 4}, {3, 5}}),
          make({2, 2, 1}, "13|25|4", {{2, 3}, {4, 5}}),
          make({2, 2, 1}, "23|15|4", {{1, 3}, {4, 5}}),
      };
    default:
      throw InvalidInput("no permutation table for " + std::to_string(n_qubits) + " qubits (supported: 3, 4, 5)");
  }
}

PermutationSpec fully_separable_spec(int n_qubits) {
  if (n_qubits < 1) throw InvalidInput("need at least one qubit");
  PermutationSpec s;
  s.parts.assign(static_cast<std::size_t>(n_qubits), 1);
  for (int q = 1; q <= n_qubits; ++q) {
    if (q > 1) s.label += '|';
    s.label += std::to_string(q);
  }
  return s;
}

std::vector<std::vector<int>> parse_arrangement(const std::string& label) {
  std::vector<std::vector<int>> out(1);
  for (char c : label) {
    if (c == '|') {
      out.emplace_back();
    } else if (c >= '1' && c <= '9') {
      out.back().push_back(c - '0');
    } else {
      throw InvalidInput("bad arrangement label '" + label + "'");
    }
  }
  for (const auto& g : out)
    if (g.empty()) throw InvalidInput("empty group in arrangement label '" + label + "'");
  return out;
}

StateVector arrange_product(const std::vector<VectorXc>& part_states, const PermutationSpec& spec) {
  if (part_states.size() != spec.parts.size()) throw InvalidInput("part count does not match spec");
  VectorXc prod = VectorXc::Ones(1);
  for (std::size_t i = 0; i < part_states.size(); ++i) {
    if (part_states[i].size() != (Eigen::Index{1} << spec.parts[i])) throw InvalidInput("part state dimension mismatch");
    prod = kron(prod, part_states[i]);
  }
  VectorXc out(prod.size());
  const auto map = spec.index_map();
  for (Eigen::Index j = 0; j < prod.size(); ++j) out(static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)])) = prod(j);
  return out;
}

}  // namespace wforge
