#include <doctest.h>

#include "fixtures.hpp"
#include "mrgnn/error.hpp"
#include "mrgnn/pipeline.hpp"

using namespace mrgnn;

namespace {

PipelineConfig quick(Problem p, std::uint64_t seed) {
  PipelineConfig c;
  c.problem = p;
  c.seed = seed;
  c.samples = 2;
  c.main.max_epochs = 300;
  c.main.lr = 0.02;
  c.local.max_epochs = 150;
  c.anneal.sweeps = 100;
  c.anneal.restarts = 3;
  return c;
}

}  // namespace

TEST_CASE("seed streams are distinct and stable") {
  SeedPlan a{7}, b{7}, c{8};
  CHECK(a.louvain() == b.louvain());
  CHECK(a.louvain() != c.louvain());
  CHECK(a.anneal(0) != a.local(0));
  CHECK(a.anneal(0) != a.anneal(1));
  CHECK(a.main(0) != a.main(1));
}

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::RGnn, Variant::MrGnn, Variant::MrGnnAm}) CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_AS(parse_variant("gnn"), InvalidInput);
}

TEST_CASE("rgnn cuts every edge of a 4-cycle") {
  PipelineConfig c = quick(Problem::MaxCut, 1);
  c.main.lr = 0.05;
  RunReport r = solve_rgnn(Problem::MaxCut, fixtures::cycle(4), c);
  CHECK(r.objective == doctest::Approx(-4.0));
  CHECK(r.metrics.cut_size == 4);
  CHECK(r.time_local_am == 0.0);
  CHECK(r.levels_used.empty());
}

TEST_CASE("multiresolution runs produce consistent reports") {
  Graph g = fixtures::random_graph(120, 0.05, 3);
  PipelineConfig c = quick(Problem::MIS, 2);
  QuboMatrix q = build_qubo(Problem::MIS, g, c.effective_penalty());
  for (Variant v : {Variant::MrGnn, Variant::MrGnnAm}) {
    RunReport r = solve_variant(v, g, c);
    REQUIRE(!r.levels_used.empty());
    CHECK(r.variant == v);
    CHECK(r.solution.size() == 120);
    CHECK(r.objective == doctest::Approx(hamiltonian(q, r.solution)));
    CHECK(r.time_total == doctest::Approx(r.time_local_am + r.time_local_gnn + r.time_main));
    CHECK(r.local_gnn_solutions.size() == r.levels_used.size());
    if (v == Variant::MrGnnAm) {
      CHECK(r.local_am_energies.size() == r.levels_used.size());
      CHECK(r.time_local_am > 0.0);
    } else {
      CHECK(r.local_am_energies.empty());
      CHECK(r.time_local_am == 0.0);
    }
    CHECK(r.sample_index < c.samples);
  }
}

TEST_CASE("mis on two bridged cliques picks one node per clique") {
  Graph g = fixtures::two_cliques(5);
  PipelineConfig c = quick(Problem::MIS, 4);
  c.main.lr = 0.01;
  c.main.max_epochs = 2000;
  RunReport r = solve_mrgnn_am(Problem::MIS, g, c);
  CHECK(r.metrics.violations == 0);
  CHECK(r.metrics.set_size == 2);
}

TEST_CASE("local embeddings change where the main solver starts") {
  Graph g = fixtures::random_graph(80, 0.06, 5);
  PipelineConfig c = quick(Problem::MaxCut, 6);
  c.samples = 1;
  RunReport plain = solve_rgnn(Problem::MaxCut, g, c);
  RunReport multi = solve_mrgnn_am(Problem::MaxCut, g, c);
  REQUIRE(!multi.trace.losses.empty());
  CHECK(multi.trace.losses.front() != plain.trace.losses.front());
}

TEST_CASE("no admissible level falls back to rgnn") {
  Graph g = fixtures::random_graph(60, 0.08, 7);
  PipelineConfig c = quick(Problem::MaxCut, 3);
  c.am_limit = 1;
  RunReport fb = solve_mrgnn_am(Problem::MaxCut, g, c);
  RunReport plain = solve_rgnn(Problem::MaxCut, g, c);
  CHECK(fb.variant == Variant::MrGnnAm);
  CHECK(fb.levels_used.empty());
  CHECK(fb.solution == plain.solution);
}

TEST_CASE("level selection and ablation") {
  Graph g = fixtures::random_graph(150, 0.04, 8);
  PipelineConfig c = quick(Problem::MaxCut, 5);
  Hierarchy h = compress(g, c);
  REQUIRE(!h.levels.empty());
  auto levels = select_levels(h, g, c);
  for (auto l : levels) CHECK(h.levels[l].graph.num_nodes() < 150);

  c.levels.kind = LevelsPolicy::Kind::Explicit;
  c.levels.explicit_levels = {h.levels.size() + 3};
  CHECK_THROWS_AS(select_levels(h, g, c), InvalidInput);
  CHECK_THROWS_AS(level_ablation(Problem::MaxCut, g, c, h.levels.size() + 3, &h), InvalidInput);

  c.levels.kind = LevelsPolicy::Kind::AllSmaller;
  RunReport one = level_ablation(Problem::MaxCut, g, c, levels.front(), &h);
  CHECK(one.levels_used == std::vector<std::size_t>{levels.front()});
  RunReport all = solve_mrgnn_am(Problem::MaxCut, g, c, &h);
  CHECK(level_loss_difference(one, all) == doctest::Approx(std::abs(one.objective - all.objective)));
}

TEST_CASE("runs are deterministic for a fixed seed") {
  Graph g = fixtures::random_graph(90, 0.05, 9);
  PipelineConfig c = quick(Problem::GP, 11);
  RunReport a = solve_mrgnn_am(Problem::GP, g, c);
  RunReport b = solve_mrgnn_am(Problem::GP, g, c);
  CHECK(a.solution == b.solution);
  CHECK(a.trace.losses == b.trace.losses);
  CHECK(a.local_am_energies == b.local_am_energies);
  c.seed = 12;
  CHECK(solve_mrgnn_am(Problem::GP, g, c).trace.losses != a.trace.losses);
}

TEST_CASE("graph descriptor detects regularity") {
  CHECK(describe(fixtures::petersen()).d == 3);
  CHECK(describe(fixtures::path(4)).d == 0);
  CHECK(describe(fixtures::cycle(5), 3, "x").source == "x");
}
