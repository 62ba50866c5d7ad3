#include "test_helpers.hpp"

#include <Eigen/SVD>

#include "wforge/parallel.hpp"
#include "wforge/partition.hpp"
#include "wforge/statesets.hpp"
#include "wforge/witness.hpp"

using namespace wtest;

namespace {

// Schmidt rank across the cut after qubit `k` (1-based) of a pure state.
int schmidt_rank(const StateVector& psi, int n, int k) {
  const Eigen::Index rows = Eigen::Index{1} << k;
  const Eigen::Index cols = Eigen::Index{1} << (n - k);
  MatrixXc m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = psi(r * cols + c);
  Eigen::JacobiSVD<MatrixXc> svd(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 1e-8 ? 1 : 0;
  return rank;
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("seeded streams are reproducible") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  const Rng root(1);
  Rng d1 = root.derive(3), d2 = root.derive(3), d3 = root.derive(4);
  CHECK(d1() == d2());
  CHECK(root.derive(3).key() != d3.key());
  CHECK(root.derive("data").key() != root.derive("svm").key());
}

TEST_CASE("uniform and normal moments") {
  Rng r(8);
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double g = r.normal();
    s += g;
    s2 += g * g;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7u);
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  std::vector<int> out(50);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) { if (i == 5) throw InvalidInput("x"); }), InvalidInput);
}

}

TEST_SUITE("partition") {

TEST_CASE("catalog sizes") {
  CHECK(permutation_table(3).size() == 3);
  CHECK(permutation_table(4).size() == 7);
  CHECK(permutation_table(5).size() == 30);
  CHECK_THROWS_AS(permutation_table(6), InvalidInput);
}

TEST_CASE("every row's swaps reproduce its label") {
  for (int n : {3, 4, 5}) {
    for (const auto& spec : permutation_table(n)) {
      CAPTURE(spec.label);
      auto want = parse_arrangement(spec.label);
      auto got = spec.groups();
      for (auto& g : want) std::sort(g.begin(), g.end());
      for (auto& g : got) std::sort(g.begin(), g.end());
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      CHECK(got == want);
      // Labels are product states across their cut.
      Rng rng(spec.label.size() + static_cast<std::size_t>(n));
      const StateVector psi = random_kseparable_pure(n, spec, rng);
      const DensityMatrix rho = projector(psi);
      const auto groups = spec.groups();
      // Bring the first group to the front with label-permuted Paulis:
      // check <A (x) B> = <A><B> on random operators from each side.
      std::string a(static_cast<std::size_t>(n), 'I'), b(static_cast<std::size_t>(n), 'I'), ab;
      for (int q : groups[0]) a[static_cast<std::size_t>(q - 1)] = 'X';
      for (std::size_t g = 1; g < groups.size(); ++g)
        for (int q : groups[g]) b[static_cast<std::size_t>(q - 1)] = 'Y';
      ab = a;
      for (std::size_t i = 0; i < ab.size(); ++i)
        if (b[i] != 'I') ab[i] = b[i];
      CHECK(expectation(rho, PauliString(ab)) ==
            doctest::Approx(expectation(rho, PauliString(a)) * expectation(rho, PauliString(b))).epsilon(1e-9));
    }
  }
}

TEST_CASE("2|13 is swap(1,2) applied to 1|23") {
  const auto table = permutation_table(3);
  Rng rng(4);
  std::vector<VectorXc> parts{random_pure(1, rng), random_pure(2, rng)};
  const StateVector base = arrange_product(parts, table[0]);
  const StateVector swapped = arrange_product(parts, table[1]);
  CHECK(swapped.isApprox(swap_operator(1, 2, 3) * base));
}

TEST_CASE("fully separable spec and labels") {
  const auto f = fully_separable_spec(4);
  CHECK(f.label == "1|2|3|4");
  CHECK(f.copies() == 2);
  CHECK(parse_arrangement("13|24") == std::vector<std::vector<int>>{{1, 3}, {2, 4}});
  CHECK_THROWS_AS(parse_arrangement("1||2"), InvalidInput);
}

}

TEST_SUITE("statesets") {

TEST_CASE("pauli eigenstates") {
  CHECK(pauli_eigenstates(1).size() == 6);
  const auto e3 = pauli_eigenstates(3);
  CHECK(e3.size() == 216);
  // Index digits pick X+, X-, Y+, Y-, Z+, Z- per qubit, qubit 1 most significant.
  const std::string axes = "XXYYZZ";
  for (std::size_t i = 0; i < e3.size(); i += 17) {
    std::string label;
    int sign = 1;
    for (std::size_t r = i, q = 0; q < 3; ++q, r /= 6) {
      label.insert(label.begin(), axes[r % 6]);
      sign *= (r % 6) % 2 == 0 ? 1 : -1;
    }
    CHECK(expectation_pure(e3[i], PauliString(label)) == doctest::Approx(sign));
  }
}

TEST_CASE("perturbations") {
  Rng rng(1);
  CHECK(perturbation_unitary(2, 0.0, rng).isIdentity(1e-12));
  for (int i = 0; i < 10; ++i) CHECK(is_unitary(perturbation_unitary(3, 0.05, rng)));
  // cos(theta) with density sin(theta)/2 has mean zero.
  double s = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) s += 1.0 - 2.0 * rng.uniform();
  CHECK(std::abs(s / n) < 0.01);
}

TEST_CASE("separable training states") {
  const Rng rng(6);
  CHECK(separable_training_states(3, 5, 0.05, rng).size() == 1296);
  CHECK(separable_training_states(4, 5, 0.05, rng).size() == 7776);
  const auto plain = separable_training_states(3, 0, 0.05, rng);
  const auto eig = pauli_eigenstates(3);
  REQUIRE(plain.size() == eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) CHECK(plain[i].isApprox(eig[i]));
  // Perturbed states stay product states.
  const auto states = separable_training_states(3, 2, 0.05, rng);
  for (std::size_t i = 0; i < states.size(); i += 7)
    for (int k = 1; k < 3; ++k) CHECK(schmidt_rank(states[i], 3, k) == 1);
  // Determinism.
  const auto again = separable_training_states(3, 2, 0.05, rng);
  for (std::size_t i = 0; i < states.size(); ++i) CHECK(states[i] == again[i]);
}

TEST_CASE("five-qubit separable training count") {
  TrainingDataConfig cfg;
  cfg.entangled_count = 1;
  const auto ts = build_training_set(TargetKind::W, 5, parse_feature_set({"ZZZZZ"}), cfg, 3);
  CHECK(ts.count(kSeparableLabel) == 46656);
}

TEST_CASE("entangled training states and targets") {
  const DensityMatrix g = projector(target_state(TargetKind::GHZ, 3));
  const auto ws = entangled_training_states(g, 1000, 0.25);
  CHECK(ws.size() == 1000);
  CHECK(ws.front().isApprox(g));
  CHECK(ws.back().isApprox(werner_state(g, 0.25)));
  const auto one = entangled_training_states(g, 1, 0.25);
  REQUIRE(one.size() == 1);
  CHECK(one[0].isApprox(werner_state(g, 0.25)));
  for (std::size_t i = 0; i < ws.size(); i += 99) CHECK_FALSE(check_density_matrix(ws[i]).has_value());
  CHECK_THROWS_AS(entangled_training_states(g, 10, 1.5), InvalidInput);

  CHECK(target_state(TargetKind::GHZ, 3)(0).real() == doctest::Approx(1 / std::sqrt(2.0)));
  const StateVector w4 = target_state(TargetKind::W, 4);
  CHECK(w4(1).real() == doctest::Approx(0.5));
  CHECK(expectation_pure(w4, PauliString("ZZZZ")) == doctest::Approx(-1.0));
  CHECK(parse_target_kind("ghz") == TargetKind::GHZ);
  CHECK_THROWS_AS(parse_target_kind("bell"), InvalidInput);
}

TEST_CASE("dirichlet weights") {
  Rng rng(12);
  CHECK(dirichlet_weights(0.5, 1, rng)[0] == 1.0);
  double mean0 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto w = dirichlet_weights(1.0, 4, rng);
    mean0 += w[0];
    if (i % 1000 == 0) {
      double s = 0;
      for (double x : w) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
  CHECK(std::abs(mean0 / n - 0.25) < 0.01);
  for (double x : dirichlet_weights(1e4, 4, rng)) CHECK(std::abs(x - 0.25) < 0.05);
  // Tiny alpha must not collapse to NaN.
  for (int i = 0; i < 100; ++i) {
    const auto w = dirichlet_weights(1e-3, 32, rng);
    double s = 0;
    for (double x : w) s += x;
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(dirichlet_weights(0.0, 3, rng), InvalidInput);
}

TEST_CASE("random k-separable states") {
  Rng rng(21);
  const auto t4 = permutation_table(4);
  const auto it = std::find_if(t4.begin(), t4.end(), [](const auto& s) { return s.label == "13|24"; });
  REQUIRE(it != t4.end());
  const StateVector psi = random_kseparable_pure(4, *it, rng);
  CHECK(psi.norm() == doctest::Approx(1.0));
  // Undoing the recorded swap gives a 12|34 product.
  CHECK(schmidt_rank(apply_swap(psi, 2, 3), 4, 2) == 1);
  const StateVector p3 = random_kseparable_pure(3, permutation_table(3)[0], rng);
  CHECK(schmidt_rank(p3, 3, 1) == 1);
}

TEST_CASE("separable test states") {
  const Rng rng(31);
  const auto lo = separable_test_states(3, 1000, 1e-3, rng);
  const auto hi = separable_test_states(3, 1000, 1.0, rng.derive(1));
  double plo = 0, phi = 0;
  const Witness m3 = mermin_witness(3);
  for (std::size_t i = 0; i < lo.size(); ++i) {
    plo += (lo[i] * lo[i]).trace().real();
    phi += (hi[i] * hi[i]).trace().real();
    CHECK(evaluate(m3, lo[i]) >= -1e-9);
    CHECK(evaluate(m3, hi[i]) >= -1e-9);
  }
  CHECK(plo > phi);
  for (std::size_t i = 0; i < lo.size(); i += 50) CHECK_FALSE(check_density_matrix(lo[i]).has_value());
  // Thread count does not change the output.
  const auto par = separable_test_states(3, 20, 0.1, rng, 3);
  const auto seq = separable_test_states(3, 20, 0.1, rng, 1);
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == seq[i]);
}

TEST_CASE("generated separable states respect the Mermin bound") {
  const Witness m4 = mermin_witness(4);
  const auto states = separable_training_states(4, 1, 0.05, Rng(2));
  for (std::size_t i = 0; i < states.size(); i += 5) CHECK(evaluate_pure(m4, states[i]) >= -1e-9);
}

TEST_CASE("training set assembly") {
  const FeatureSet feats = mermin_witness(3).features();
  const auto ts = build_training_set(TargetKind::GHZ, 3, feats, {}, 77);
  CHECK(ts.count(kSeparableLabel) == 1296);
  CHECK(ts.count(kEntangledLabel) == 1000);
  CHECK(ts.count(SampleOrigin::Eigenstate) == 216);
  CHECK(ts.count(SampleOrigin::Perturbed) == 1080);
  CHECK(ts.count(SampleOrigin::Werner) == 1000);
  // Product-state shortcut agrees with the dense expectation.
  const auto states = separable_training_states(3, 5, 0.05, Rng(77));
  REQUIRE(states.size() == 1296);
  for (std::size_t i = 0; i < states.size(); i += 13) {
    const Eigen::VectorXd f = feature_vector_pure(states[i], feats);
    CHECK((f - ts.samples[i].features).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto again = build_training_set(TargetKind::GHZ, 3, feats, {}, 77, 2);
  for (std::size_t i = 0; i < ts.samples.size(); ++i) CHECK(ts.samples[i].features == again.samples[i].features);
  CHECK_NOTHROW(ts.validate_for_training());
}

}
