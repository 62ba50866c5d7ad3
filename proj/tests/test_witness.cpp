#include "test_helpers.hpp"

#include <filesystem>

#include "wforge/io.hpp"
#include "wforge/statesets.hpp"
#include "wforge/witness.hpp"

using namespace wtest;

namespace {

Witness fixture(const char* name) { return read_witness(std::filesystem::path(WFORGE_FIXTURE_DIR) / name); }

Witness ghz4_trained_sample() {
  return make_witness(4, {{"IIII", 4}, {"XXXX", -0.935}, {"XXYY", 1.024}, {"XYXY", 1.023}, {"XYYX", 1.024},
                          {"YXXY", 1.023}, {"YXYX", 1.024}, {"YYXX", 1.021}});
}

}  // namespace

TEST_SUITE("witness") {

TEST_CASE("Mermin witnesses") {
  const Witness m3 = mermin_witness(3);
  CHECK(m3.term_count() == 5);
  CHECK(m3.terms.at(PauliString("III")) == 2);
  CHECK(m3.terms.at(PauliString("XXX")) == -1);
  CHECK(m3.terms.at(PauliString("XYY")) == 1);
  CHECK(m3.terms.at(PauliString("YXY")) == 1);
  CHECK(m3.terms.at(PauliString("YYX")) == 1);

  const Witness m4 = mermin_witness(4);
  CHECK(m4.terms.at(PauliString("XXXX")) == -1);
  for (const char* s : {"XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX"}) CHECK(m4.terms.at(PauliString(s)) == 1);

  const Witness m5 = mermin_witness(5);
  CHECK(m5.features().size() == 16);
  CHECK(m5.terms.at(PauliString("XXXXX")) == -1);
  CHECK(m5.terms.at(PauliString("YYXXX")) == 1);
  CHECK(m5.terms.at(PauliString("XYYYY")) == -1);
  CHECK(m5.terms.at(PauliString("YYYYX")) == -1);
  CHECK_THROWS_AS(mermin_witness(2), InvalidInput);

  for (int n : {3, 4, 5}) {
    const Witness m = mermin_witness(n);
    const DensityMatrix g = projector(ghz(n));
    const double want = std::ldexp(1.0, n - 2) - std::ldexp(1.0, n - 1);
    CHECK(evaluate(m, g) == doctest::Approx(want));
    double oracle = 0;
    for (const auto& [p, c] : m.terms) oracle += c * trace_oracle(g, p.str());
    CHECK(oracle == doctest::Approx(want));
  }
}

TEST_CASE("evaluate") {
  const Witness m3 = mermin_witness(3);
  CHECK(evaluate(m3, maximally_mixed(3)) == doctest::Approx(2.0));
  const Witness fx = fixture("w4_46.json");
  CHECK(evaluate(fx, maximally_mixed(4)) == doctest::Approx(fx.identity_coefficient()));
  CHECK_THROWS_AS(evaluate(m3, maximally_mixed(2)), InvalidInput);
  Rng rng(1);
  const StateVector psi = random_pure(3, rng);
  CHECK(evaluate_pure(m3, psi) == doctest::Approx(evaluate(m3, projector(psi))));
  const MatrixXc op = witness_operator(m3);
  CHECK((psi.adjoint() * op * psi)(0).real() == doctest::Approx(evaluate_pure(m3, psi)));
}

TEST_CASE("hyperplane round trip") {
  Hyperplane zero{Eigen::VectorXd::Zero(0), 1.0, {}};
  const Witness id = from_hyperplane(zero, 3);
  CHECK(id.term_count() == 1);
  CHECK(id.identity_coefficient() == 1.0);

  Rng rng(14);
  const FeatureSet feats = full_feature_set(3, false);
  Hyperplane h{Eigen::VectorXd::Random(static_cast<Eigen::Index>(feats.size())), 0.3, feats};
  const Witness w = from_hyperplane(h, 3);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = random_density(3, rng);
    CHECK(evaluate(w, rho) == doctest::Approx(decision_value(h, {feature_vector(rho, feats), feats})).epsilon(1e-9));
  }
  const Hyperplane back = to_hyperplane(w);
  CHECK(back.weights == h.weights);
  CHECK(back.bias == h.bias);
  const Hyperplane msub = to_hyperplane(mermin_witness(3));
  CHECK(from_hyperplane(msub, 3).term_count() == 5);
}

TEST_CASE("noise tolerance") {
  const Witness m3 = mermin_witness(3);
  const DensityMatrix g = projector(ghz(3));
  const auto scan = noise_tolerance_scan(m3, g);
  CHECK((scan.p_star == doctest::Approx(0.499) || scan.p_star == doctest::Approx(0.5)));
  CHECK(noise_tolerance_analytic(m3, g).p_star == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scan.expectation_at_target == doctest::Approx(-2.0));

  const Witness id = make_witness(3, {{"III", 1.0}});
  CHECK(noise_tolerance_scan(id, g).p_star == 0.0);
  CHECK(noise_tolerance_analytic(id, g).p_star == 0.0);

  const Witness fx = fixture("w4_46.json");
  const DensityMatrix w4 = projector(target_state(TargetKind::W, 4));
  CHECK(noise_tolerance_scan(fx, w4).p_star == doctest::Approx(0.30).epsilon(0.07));

  // Scan and closed form agree within one step; both ignore positive scaling.
  for (const char* f : {"w4_46.json", "w4_38.json", "w4_28.json", "w5_20.json", "w5_180.json"}) {
    const Witness w = fixture(f);
    const DensityMatrix t = projector(target_state(TargetKind::W, w.n_qubits));
    const double s = noise_tolerance_scan(w, t).p_star;
    const double a = noise_tolerance_analytic(w, t).p_star;
    CHECK(std::abs(s - a) <= 0.001 + 1e-12);
    const Witness scaled = normalize(w, BiasTo{3.7});
    CHECK(noise_tolerance_scan(scaled, t).p_star == s);
    CHECK(noise_tolerance_analytic(scaled, t).p_star == doctest::Approx(a).epsilon(1e-12));
  }
  CHECK_THROWS_AS(noise_tolerance_scan(m3, g, 0.0), InvalidInput);
}

TEST_CASE("fidelity tolerance") {
  CHECK(fidelity_noise_tolerance(4) == 4.0 / 15.0);
  CHECK(fidelity_noise_tolerance(5) == 32.0 / 155.0);
  CHECK(fidelity_noise_tolerance(2) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(fidelity_noise_tolerance(1), InvalidInput);
}

TEST_CASE("normalize") {
  const Witness m3 = mermin_witness(3);
  const Witness n1 = normalize(m3, BiasTo{1.0});
  CHECK(n1.identity_coefficient() == 1.0);
  CHECK(n1.terms.at(PauliString("XXX")) == -0.5);
  const Witness m4 = mermin_witness(4);
  const Witness t = normalize(make_witness(4, {{"IIII", 0.9}, {"XXXX", -0.2}}), MatchIdentityOf{&m4});
  CHECK(t.identity_coefficient() == doctest::Approx(4.0));
  CHECK_THROWS_AS(normalize(make_witness(3, {{"XXX", 1.0}}), BiasTo{1.0}), InvalidInput);
  CHECK_THROWS_AS(normalize(m3, BiasTo{-1.0}), InvalidInput);
  Rng rng(6);
  const Witness big = normalize(m3, BiasTo{17.0});
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = random_density(3, rng);
    CHECK(std::signbit(evaluate(big, rho)) == std::signbit(evaluate(m3, rho)));
  }
}

TEST_CASE("percent error against reference coefficients") {
  const Witness m3 = mermin_witness(3);
  const auto self = percent_error_vs(m3, m3);
  CHECK(self.max_abs_error() == 0.0);
  const auto t1 = percent_error_vs(ghz4_trained_sample(), mermin_witness(4));
  CHECK(t1.percent_error.at(PauliString("XXXX")) == doctest::Approx(-6.5).epsilon(0.01));
  CHECK(std::abs(t1.percent_error.at(PauliString("XXXX")) - (-6.46)) < 0.05);
  CHECK(t1.percent_error.at(PauliString("XXYY")) == doctest::Approx(2.4));
  REQUIRE(t1.only_in_reference.size() == 1);
  CHECK(t1.only_in_reference[0].str() == "YYYY");
  const Witness t2 = make_witness(5, {{"IIIII", 8}, {"XXXXX", -1.0013}});
  CHECK(percent_error_vs(t2, mermin_witness(5)).percent_error.at(PauliString("XXXXX")) == doctest::Approx(0.13));
  CHECK_THROWS_AS(percent_error_vs(ghz4_trained_sample(), normalize(mermin_witness(4), BiasTo{1.0})), InvalidInput);
}

TEST_CASE("prune by cutoff") {
  const Witness fx = fixture("w5_180.json");
  CHECK(prune_by_cutoff(fx, 0.0).terms == fx.terms);
  CHECK(prune_by_cutoff(fx, 1e9).term_count() == 1);
  const Witness p = prune_by_cutoff(fx, 0.0004);
  for (const auto& [s, c] : p.terms)
    if (!s.is_identity()) CHECK(std::abs(c) >= 0.0004);
  // Relative to the identity coefficient, so scaling commutes with pruning.
  CHECK(prune_by_cutoff(normalize(fx, BiasTo{5.0}), 0.01).term_count() == prune_by_cutoff(fx, 0.01).term_count());
}

TEST_CASE("fixtures") {
  const std::pair<const char*, std::size_t> files[] = {
      {"w4_46.json", 46}, {"w4_38.json", 38}, {"w4_28.json", 28}, {"w5_20.json", 20}, {"w5_180.json", 180}};
  for (const auto& [f, n] : files) {
    const Witness w = fixture(f);
    CHECK(w.term_count() == n);
    CHECK(w.identity_coefficient() == 1.0);
    CHECK(w.metadata.target == "W");
  }
}

}
