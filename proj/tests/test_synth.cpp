#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <set>

#include "seedsynth/linalg.hpp"
#include "seedsynth/rng.hpp"
#include "seedsynth/synth.hpp"

using namespace seedsynth;

namespace {

constexpr double kPi = std::numbers::pi;

UnitaryMatrix cnot_unitary() {
  ComplexMatrix m(4, 4);
  m.at(0, 0) = 1;
  m.at(1, 1) = 1;
  m.at(2, 3) = 1;
  m.at(3, 2) = 1;
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix swap_unitary() {
  ComplexMatrix m(4, 4);
  m.at(0, 0) = 1;
  m.at(1, 2) = 1;
  m.at(2, 1) = 1;
  m.at(3, 3) = 1;
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix realize(const TemplateCatalog& catalog, std::size_t id,
                      Rng& rng) {
  Circuit c = catalog.at(id).skeleton;
  std::vector<double> params(c.param_count());
  for (double& p : params) p = rng.uniform(-kPi, kPi);
  c.set_params(params);
  return evaluate(c);
}

}  // namespace

TEST_CASE("identity solves at the root with one instantiation call") {
  const TemplateCatalog catalog = catalog_for_width(2);
  MetricsContext metrics;
  SearchConfig cfg;
  const SynthesisResult r = synthesize(
      UnitaryMatrix(ComplexMatrix::identity(4)), catalog, cfg, &metrics);
  CHECK(r.template_id == 0);
  CHECK(r.circuit.cnot_count() == 0);
  CHECK(r.instantiation_calls == 1);
  CHECK(metrics.instantiation_calls.load() == 1);
  CHECK(r.strategy == SynthStrategy::root);
}

TEST_CASE("a CNOT target synthesizes with exactly one CNOT") {
  const TemplateCatalog catalog = catalog_for_width(2);
  SearchConfig cfg;
  const SynthesisResult r = synthesize(cnot_unitary(), catalog, cfg);
  CHECK(r.circuit.cnot_count() == 1);
  CHECK(phase_invariant_distance(cnot_unitary(), evaluate(r.circuit)) <=
        cfg.instantiation.epsilon);
}

TEST_CASE("SWAP needs exactly three CNOTs") {
  const TemplateCatalog catalog = catalog_for_width(2);
  SearchConfig cfg;
  const SynthesisResult r = synthesize(swap_unitary(), catalog, cfg);
  CHECK(r.circuit.cnot_count() == 3);
  CHECK(phase_invariant_distance(swap_unitary(), evaluate(r.circuit)) <=
        cfg.instantiation.epsilon);
  // Root, 1- and 2-CNOT templates were all probed on the way down.
  CHECK(r.instantiation_calls == 4);
}

TEST_CASE("every returned circuit meets the epsilon contract") {
  const TemplateCatalog catalog = catalog_for_width(3, 4);
  Rng rng(61);
  SearchConfig cfg;
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t depth = 1 + trial % 3;
    std::vector<std::size_t> ids;
    for (const Template& t : catalog.templates()) {
      if (t.cnot_count() == depth) ids.push_back(t.id);
    }
    const std::size_t id = ids[rng.uniform_int(ids.size())];
    const UnitaryMatrix target = realize(catalog, id, rng);
    cfg.instantiation.rng_seed = trial;
    const SynthesisResult r = synthesize(target, catalog, cfg);
    CHECK(phase_invariant_distance(target, evaluate(r.circuit)) <=
          cfg.instantiation.epsilon);
    CHECK(r.circuit.cnot_count() <= depth);
  }
}

TEST_CASE("seed equal to the solution instantiates once") {
  const TemplateCatalog catalog = catalog_for_width(3, 4);
  Rng rng(62);
  std::vector<std::size_t> deep;
  for (const Template& t : catalog.templates()) {
    if (t.cnot_count() >= 2) deep.push_back(t.id);
  }
  SearchConfig cfg;
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t id = deep[rng.uniform_int(deep.size())];
    const UnitaryMatrix target = realize(catalog, id, rng);
    MetricsContext metrics;
    const SynthesisResult r =
        seeded_synthesize(target, catalog, {id}, cfg, &metrics);
    CHECK(r.instantiation_calls == 1);
    CHECK(r.template_id == id);
    CHECK(metrics.instantiation_calls.load() == 1);
    CHECK(r.strategy == SynthStrategy::seeded);
  }
}

TEST_CASE("over-deep seeds recover the shallower solution via parent moves") {
  const TemplateCatalog catalog = catalog_for_width(3, 4);
  Rng rng(63);
  SearchConfig cfg;
  int parent_wins = 0;
  for (int trial = 0; trial < 8; ++trial) {
    // Target realizable at depth 1; seed one level deeper.
    const auto& kids = catalog.children(0);
    const std::size_t parent_id = kids[rng.uniform_int(kids.size())];
    const auto& grandkids = catalog.children(parent_id);
    const std::size_t seed_id = grandkids[rng.uniform_int(grandkids.size())];

    const UnitaryMatrix target = realize(catalog, parent_id, rng);
    cfg.instantiation.rng_seed = trial;
    const SynthesisResult r =
        seeded_synthesize(target, catalog, {seed_id}, cfg);
    CHECK(phase_invariant_distance(target, evaluate(r.circuit)) <=
          cfg.instantiation.epsilon);
    const std::size_t seed_cnots = catalog.at(seed_id).cnot_count();
    CHECK(r.circuit.cnot_count() <= seed_cnots);
    parent_wins += r.circuit.cnot_count() < seed_cnots ? 1 : 0;
  }
  // Deep templates often realize the shallower target at the seed itself;
  // at least some runs must walk up.
  CHECK(parent_wins > 0);
}

TEST_CASE("seeding with the root matches root-start exactly") {
  const TemplateCatalog catalog = catalog_for_width(2);
  Rng rng(64);
  const UnitaryMatrix target = realize(catalog, 2, rng);
  SearchConfig cfg;
  const SynthesisResult a = synthesize(target, catalog, cfg);
  const SynthesisResult b = seeded_synthesize(target, catalog, {0}, cfg);
  CHECK(a.template_id == b.template_id);
  CHECK(a.instantiation_calls == b.instantiation_calls);
  CHECK(a.cost == b.cost);
  CHECK(a.circuit == b.circuit);
}

TEST_CASE("oracle seeds beat root-start on deep targets") {
  const TemplateCatalog catalog = catalog_for_width(3, 4);
  Rng rng(65);
  SearchConfig cfg;
  std::vector<std::size_t> ids;
  for (const Template& t : catalog.templates()) {
    if (t.cnot_count() >= 2) ids.push_back(t.id);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t id = ids[rng.uniform_int(ids.size())];
    const UnitaryMatrix target = realize(catalog, id, rng);
    cfg.instantiation.rng_seed = 100 + trial;
    const SynthesisResult root = synthesize(target, catalog, cfg);
    const SynthesisResult seeded =
        seeded_synthesize(target, catalog, {id}, cfg);
    CHECK(seeded.instantiation_calls < root.instantiation_calls);
  }
}

TEST_CASE("no-solution carries the best attempt") {
  // K = 0 catalog cannot express a CNOT.
  const TemplateCatalog catalog(2, 0, {QubitTopology::line({0, 1})});
  SearchConfig cfg;
  cfg.instantiation.max_restarts = 2;
  CHECK_THROWS_AS(synthesize(cnot_unitary(), catalog, cfg), NoSolutionError);
  try {
    synthesize(cnot_unitary(), catalog, cfg);
  } catch (const NoSolutionError& e) {
    CHECK(e.best.instantiation_calls == 1);
    CHECK(e.best.cost > 0.1);
  }
}

TEST_CASE("random_seeds samples without replacement deterministically") {
  const TemplateCatalog catalog = catalog_for_width(3, 3);
  const auto a = random_seeds(catalog, 3, 7);
  const auto b = random_seeds(catalog, 3, 7);
  CHECK(a == b);
  CHECK(a.size() == 3);
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 3);

  const auto all = random_seeds(catalog, catalog.size(), 9);
  CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == catalog.size());

  CHECK_THROWS_AS(random_seeds(catalog, catalog.size() + 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_seeds(catalog, 0, 1), std::invalid_argument);

  const auto c = random_seeds(catalog, 3, 8);
  CHECK(a != c);
}

TEST_CASE("frontier tie-breaking is by cnots then id") {
  // All-equal priorities: exercised indirectly through determinism of two
  // identical searches.
  const TemplateCatalog catalog = catalog_for_width(3, 3);
  Rng rng(66);
  const UnitaryMatrix target = realize(catalog, 7, rng);
  SearchConfig cfg;
  const SynthesisResult a = synthesize(target, catalog, cfg);
  const SynthesisResult b = synthesize(target, catalog, cfg);
  CHECK(a.template_id == b.template_id);
  CHECK(a.instantiation_calls == b.instantiation_calls);
  CHECK(a.circuit == b.circuit);
}
