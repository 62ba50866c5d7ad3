#include "test_helpers.hpp"

#include "wforge/rfe.hpp"

using namespace wtest;

namespace {

const TrainingSet& ghz3_data() {
  static const TrainingSet ts = build_training_set(TargetKind::GHZ, 3, mermin_witness(3).features(), {}, 21);
  return ts;
}

RfeConfig ghz3_config() {
  RfeConfig c;
  c.target = TargetKind::GHZ;
  c.target_term_count = 4;
  c.svm.seed = 1;
  c.mso.seed = 2;
  c.mso.restarts = 4;
  c.certificate_samples = 200;
  c.certificate_seed = 3;
  return c;
}

}  // namespace

TEST_SUITE("rfe") {

TEST_CASE("removing the last term leaves the identity") {
  const Witness w = make_witness(3, {{"III", 1.0}, {"XXX", -0.5}});
  const RfeLevel level = rfe_level(w, ghz3_data(), ghz3_config());
  CHECK(level.removed.str() == "XXX");
  CHECK(level.retained.empty());
  CHECK(level.witness.term_count() == 1);
  CHECK(level.tolerance == 0.0);
  REQUIRE(level.candidates.size() == 1);
  CHECK(level.candidates[0].tolerance == 0.0);
}

TEST_CASE("one Mermin term removed") {
  const Witness m3 = mermin_witness(3);
  const RfeOutcome out = rfe_run(m3, ghz3_data(), ghz3_config());
  REQUIRE(out.trace.levels.size() == 1);
  CHECK(out.trace.initial_tolerance == doctest::Approx(0.5));
  const RfeLevel& l = out.trace.levels[0];
  CHECK(l.candidates.size() == 4);
  CHECK(out.witness.term_count() == 4);
  CHECK(out.witness.metadata.provenance == "rfe");
  // Any three-term remainder is strictly weaker than the full Mermin witness.
  CHECK(l.tolerance > 0.0);
  CHECK(l.tolerance < 0.5);
  CHECK_FALSE(out.witness.terms.contains(l.removed));
}

TEST_CASE("stopping rules") {
  const Witness m3 = mermin_witness(3);
  RfeConfig c = ghz3_config();
  c.target_term_count = 5;
  const RfeOutcome same = rfe_run(m3, ghz3_data(), c);
  CHECK(same.trace.levels.empty());
  CHECK(same.witness.terms == m3.terms);

  c.target_term_count.reset();
  c.tolerance_floor = 0.9;
  const RfeOutcome floored = rfe_run(m3, ghz3_data(), c);
  REQUIRE(floored.trace.levels.size() == 1);
  CHECK_FALSE(floored.trace.levels[0].accepted);
  CHECK(floored.witness.terms == m3.terms);

  c.tolerance_floor.reset();
  CHECK_THROWS_AS(rfe_run(m3, ghz3_data(), c), ConfigError);
}

TEST_CASE("deterministic under a fixed seed") {
  const Witness m3 = mermin_witness(3);
  RfeConfig c = ghz3_config();
  c.target_term_count = 3;
  const RfeOutcome a = rfe_run(m3, ghz3_data(), c);
  c.threads = 2;
  const RfeOutcome b = rfe_run(m3, ghz3_data(), c);
  CHECK(a.witness.terms == b.witness.terms);
  REQUIRE(a.trace.levels.size() == b.trace.levels.size());
  for (std::size_t i = 0; i < a.trace.levels.size(); ++i) CHECK(a.trace.levels[i].removed == b.trace.levels[i].removed);
}

}
