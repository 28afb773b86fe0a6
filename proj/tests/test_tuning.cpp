#include <doctest.h>

#include <sstream>

#include "rssi/error.hpp"
#include "rssi/parallel.hpp"
#include "rssi/tuning.hpp"
#include "support.hpp"

using namespace rssi;

TEST_SUITE("tuning") {

TEST_CASE("published grid sizes") {
  CHECK(paper_grid(ModelKind::tree).size() == 63);
  CHECK(paper_grid(ModelKind::tree).points().size() == 63);
  CHECK(paper_grid(ModelKind::forest).size() == 63 * 6);
  CHECK(paper_grid(ModelKind::linear).size() == 1);
  CHECK(paper_grid(ModelKind::svr).size() == 12);
  CHECK(reduced_grid(ModelKind::tree).size() == 12);
  CHECK(reduced_grid(ModelKind::forest).size() == 36);
}

TEST_CASE("enumeration is lexicographic with the first axis slowest") {
  HyperGrid g{ModelKind::tree, {{"max_depth", {1, 2}}, {"min_samples_leaf", {1, 2, 3}}}};
  const auto pts = g.points();
  REQUIRE(pts.size() == 6);
  CHECK(pts[0][0].second == 1);
  CHECK(pts[0][1].second == 1);
  CHECK(pts[1][1].second == 2);
  CHECK(pts[3][0].second == 2);
  CHECK(pts[3][1].second == 1);
}

TEST_CASE("apply_point routes axes by family") {
  const GridPoint pt{{"max_depth", 7}, {"n_trees", 11}, {"learning_rate", 0.3}};
  const auto f = apply_point({}, ModelKind::forest, pt);
  CHECK(f.forest.tree.max_depth == 7);
  CHECK(f.forest.n_trees == 11);
  CHECK(f.tree.max_depth == TreeParams{}.max_depth);
  const auto g = apply_point({}, ModelKind::gbt, {{"max_depth", 4}, {"learning_rate", 0.3}});
  CHECK(g.gbt.tree.max_depth == 4);
  CHECK(g.gbt.learning_rate == 0.3);
  CHECK_THROWS_AS(apply_point({}, ModelKind::tree, {{"bogus", 1}}), Error);
}

TEST_CASE("single point grid") {
  const auto d = oracle::random_dataset(200, 2, 1, 0.3);
  HyperGrid g{ModelKind::tree, {{"max_depth", {5}}}};
  const auto r = grid_search(d, g, {}, 0.25, 3);
  REQUIRE(r.trials.size() == 1);
  CHECK(r.best_params == r.trials[0].params);
  CHECK(r.best_val_mse == r.trials[0].val_mse);
  CHECK(r.best_configs.tree.max_depth == 5);
}

TEST_CASE("deeper tree wins on nonlinear data") {
  const auto d = oracle::random_dataset(600, 2, 2, 0.1);
  HyperGrid g{ModelKind::tree, {{"max_depth", {1, 20}}}};
  const auto r = grid_search(d, g, {}, 0.25, 3);
  CHECK(r.best_configs.tree.max_depth == 20);
  CHECK(r.trials[1].val_mse < r.trials[0].val_mse);
}

TEST_CASE("best is the minimum and ties keep the first") {
  const auto d = oracle::random_dataset(300, 2, 4, 0.3);
  const auto r = grid_search(d, reduced_grid(ModelKind::tree), {}, 0.25, 9);
  CHECK(r.trials.size() == 12);
  std::size_t first_best = 0;
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    CHECK(r.best_val_mse <= r.trials[i].val_mse);
    if (r.trials[i].val_mse < r.trials[first_best].val_mse) first_best = i;
  }
  CHECK(r.best_params == r.trials[first_best].params);
  // max_depth 20/100/1000 reach the same tree here, so the shallowest wins.
  CHECK(r.best_configs.tree.max_depth == 20);
}

TEST_CASE("parallel and serial searches agree") {
  const auto d = oracle::random_dataset(300, 3, 5, 0.3);
  const auto g = reduced_grid(ModelKind::gbt);
  HyperGrid small{ModelKind::gbt, {g.axes[0], {"n_stages", {5, 20}}, {"learning_rate", {0.1, 0.3}}}};
  const int saved = worker_count();
  set_worker_count(3);
  const auto a = grid_search(d, small, {}, 0.25, 4);
  set_worker_count(saved);
  const auto b = grid_search_serial(d, small, {}, 0.25, 4);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].params == b.trials[i].params);
    CHECK(a.trials[i].val_mse == b.trials[i].val_mse);
  }
  std::ostringstream oa, ob;
  write_trials_csv(oa, small, a, false);
  write_trials_csv(ob, small, b, false);
  CHECK(oa.str() == ob.str());
  CHECK(oa.str().rfind("max_depth,n_stages,learning_rate,val_mae,val_mse\n", 0) == 0);
}

TEST_CASE("bad inputs") {
  const auto d = oracle::random_dataset(50, 2, 1);
  HyperGrid empty_axis{ModelKind::tree, {{"max_depth", {}}}};
  CHECK_THROWS_AS(grid_search(d, empty_axis, {}, 0.25, 1), Error);
  HyperGrid g{ModelKind::tree, {{"max_depth", {3}}}};
  CHECK_THROWS_AS(grid_search(d, g, {}, 0.0, 1), Error);
  CHECK_THROWS_AS(grid_search(Dataset::from_rows({{0.1, 0.2}}, {1.0}), g, {}, 0.25, 1), Error);
}

}  // TEST_SUITE
