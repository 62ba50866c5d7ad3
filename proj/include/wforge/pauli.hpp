#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wforge/error.hpp"

namespace wforge {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

Pauli pauli_from_char(char symbol);
char to_char(Pauli p);

// A tensor product of single-qubit Pauli operators over N qubits, written as a
// label such as "XYZ". Qubit 1 is the leftmost symbol. Ordering follows the
// canonical base-4 index (I=0, X=1, Y=2, Z=3, leftmost most significant), which
// for equal lengths coincides with lexicographic order of the labels.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::string_view labels);

  static PauliString identity(int n_qubits);
  static PauliString from_index(std::uint64_t index, int n_qubits);

  int size() const { return static_cast<int>(labels_.size()); }
  // 1-based qubit access.
  Pauli at(int qubit) const;
  const std::string& str() const { return labels_; }
  std::uint64_t index() const;
  bool is_identity() const;
  int weight() const;

  // Label with the symbols of qubits a and b (1-based) exchanged.
  PauliString with_qubits_swapped(int a, int b) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (a.labels_.size() != b.labels_.size()) return a.labels_.size() <=> b.labels_.size();
    return a.labels_.compare(b.labels_) <=> 0;
  }

 private:
  std::string labels_;
};

using FeatureSet = std::vector<PauliString>;

// All 4^N strings in canonical order, optionally without the identity.
FeatureSet full_feature_set(int n_qubits, bool include_identity = true);

FeatureSet parse_feature_set(const std::vector<std::string>& labels);

}  // namespace wforge

template <>
struct std::hash<wforge::PauliString> {
  std::size_t operator()(const wforge::PauliString& p) const noexcept {
    return std::hash<std::string>{}(p.str());
  }
};
