#include "wforge/pauli.hpp"

#include <algorithm>
#include <utility>

namespace wforge {

Pauli pauli_from_char(char symbol) {
  switch (symbol) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw InvalidInput(std::string("invalid Pauli symbol '") + symbol + "'");
  }
}

char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

PauliString::PauliString(std::string_view labels) : labels_(labels) {
  if (labels_.empty()) throw InvalidInput("Pauli string must cover at least one qubit");
  for (char c : labels_) pauli_from_char(c);
}

PauliString PauliString::identity(int n_qubits) {
  if (n_qubits < 1) throw InvalidInput("Pauli string must cover at least one qubit");
  return PauliString(std::string(static_cast<std::size_t>(n_qubits), 'I'));
}

PauliString PauliString::from_index(std::uint64_t index, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 31) throw InvalidInput("unsupported qubit count");
  if (index >= (std::uint64_t{1} << (2 * n_qubits))) throw InvalidInput("Pauli index out of range");
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = n_qubits - 1; q >= 0; --q) {
    s[static_cast<std::size_t>(q)] = "IXYZ"[index & 3u];
    index >>= 2;
  }
  return PauliString(s);
}

Pauli PauliString::at(int qubit) const {
  if (qubit < 1 || qubit > size()) throw InvalidInput("qubit index out of range");
  return pauli_from_char(labels_[static_cast<std::size_t>(qubit - 1)]);
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  for (char c : labels_) idx = idx * 4 + static_cast<std::uint64_t>(pauli_from_char(c));
  return idx;
}

bool PauliString::is_identity() const {
  return std::all_of(labels_.begin(), labels_.end(), [](char c) { return c == 'I'; });
}

int PauliString::weight() const {
  return static_cast<int>(std::count_if(labels_.begin(), labels_.end(), [](char c) { return c != 'I'; }));
}

PauliString PauliString::with_qubits_swapped(int a, int b) const {
  if (a < 1 || b < 1 || a > size() || b > size()) throw InvalidInput("qubit index out of range");
  PauliString out = *this;
  std::swap(out.labels_[static_cast<std::size_t>(a - 1)], out.labels_[static_cast<std::size_t>(b - 1)]);
  return out;
}

FeatureSet full_feature_set(int n_qubits, bool include_identity) {
  if (n_qubits < 1 || n_qubits > 8) throw ResourceError("full feature set limited to 8 qubits");
  const std::uint64_t count = std::uint64_t{1} << (2 * n_qubits);
  FeatureSet out;
  out.reserve(count);
  for (std::uint64_t i = include_identity ? 0 : 1; i < count; ++i) out.push_back(PauliString::from_index(i, n_qubits));
  return out;
}

FeatureSet parse_feature_set(const std::vector<std::string>& labels) {
  FeatureSet out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    out.emplace_back(l);
    if (out.back().size() != out.front().size()) throw InvalidInput("feature '" + l + "' has a different qubit count");
  }
  return out;
}

}  // namespace wforge
