#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "otrimle/error.hpp"
#include "otrimle/init.hpp"
#include "otrimle/truth_eval.hpp"
#include "test_support.hpp"

using namespace otrimle;
using otrimle::testing::gaussian_blobs;
using otrimle::testing::vec;

TEST_CASE("kth_neighbor_distances on a line") {
  Dataset d(otrimle::testing::column({0.0, 1.0, 3.0, 6.0}));
  std::vector<double> k1 = kth_neighbor_distances(d, 1);
  CHECK(k1 == std::vector<double>{1.0, 1.0, 2.0, 3.0});
  std::vector<double> k2 = kth_neighbor_distances(d, 2);
  CHECK(k2 == std::vector<double>{3.0, 2.0, 3.0, 5.0});
}

TEST_CASE("nn_noise_detect on a clean blob flags almost nothing") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Dataset d = gaussian_blobs({vec({0.0, 0.0})}, {400}, 1.0, seed).data;
    std::vector<bool> flags = nn_noise_detect(d, 5);
    const auto flagged = std::count(flags.begin(), flags.end(), true);
    CHECK(flagged <= 8);
  }
}

TEST_CASE("nn_noise_detect flags remote points") {
  otrimle::testing::Blobs b = gaussian_blobs({vec({0.0, 0.0})}, {300}, 1.0, 7);
  Matrix x(310, 2);
  x.topRows(300) = b.data.points();
  for (int i = 0; i < 10; ++i) {
    const double angle = 2.0 * 3.141592653589793 * i / 10.0;
    x(300 + i, 0) = 100.0 * std::cos(angle);
    x(300 + i, 1) = 100.0 * std::sin(angle);
  }
  std::vector<bool> flags = nn_noise_detect(Dataset(x), 5);
  for (int i = 300; i < 310; ++i) CHECK(flags[i]);
}

TEST_CASE("nn_noise_detect with n = k + 1") {
  Dataset d = gaussian_blobs({vec({0.0, 0.0})}, {6}, 1.0, 1).data;
  std::vector<bool> flags;
  CHECK_NOTHROW(flags = nn_noise_detect(d, 5));
  CHECK(flags.size() == 6);
}

TEST_CASE("mbhc_agglomerate") {
  otrimle::testing::Blobs b = gaussian_blobs({vec({0.0, 0.0}), vec({15.0, 0.0})}, {40, 60}, 1.0, 3);
  Labeling two = mbhc_agglomerate(b.data, 2);
  CHECK(mcr(b.labels, two, 2) == 0.0);

  Labeling one = mbhc_agglomerate(b.data, 1);
  CHECK(std::all_of(one.begin(), one.end(), [](int l) { return l == 1; }));

  Dataset small = gaussian_blobs({vec({0.0, 0.0})}, {7}, 1.0, 5).data;
  Labeling singletons = mbhc_agglomerate(small, 7);
  CHECK(std::set<int>(singletons.begin(), singletons.end()).size() == 7);
}

TEST_CASE("initial_partition separates blobs and outliers") {
  otrimle::testing::Blobs b =
      gaussian_blobs({vec({0.0, 0.0}), vec({12.0, 0.0}), vec({6.0, 12.0})}, {100, 100, 100}, 1.0, 17);
  Matrix x(305, 2);
  x.topRows(300) = b.data.points();
  const double far[5][2] = {{80, 80}, {-90, 40}, {60, -100}, {-70, -70}, {120, 5}};
  Labeling truth = b.labels;
  for (int i = 0; i < 5; ++i) {
    x(300 + i, 0) = far[i][0];
    x(300 + i, 1) = far[i][1];
    truth.push_back(0);
  }
  InitConfig cfg;
  cfg.g = 3;
  Labeling init = initial_partition(Dataset(x), cfg);
  for (int i = 300; i < 305; ++i) CHECK(init[i] == 0);
  CHECK(mcr(truth, init, 3) <= 0.01);
}

TEST_CASE("initial_partition on noiseless blobs keeps nearly everything") {
  otrimle::testing::Blobs b = gaussian_blobs({vec({0.0, 0.0}), vec({8.0, 0.0})}, {150, 150}, 1.0, 23);
  InitConfig cfg;
  cfg.g = 2;
  Labeling init = initial_partition(b.data, cfg);
  CHECK(std::count(init.begin(), init.end(), 0) <= 6);
  for (int j = 1; j <= 2; ++j) CHECK(std::count(init.begin(), init.end(), j) >= 2);
}

TEST_CASE("initial_partition is deterministic") {
  Dataset d = gaussian_blobs({vec({0.0, 0.0}), vec({4.0, 1.0})}, {80, 80}, 1.0, 2).data;
  InitConfig cfg;
  CHECK(initial_partition(d, cfg) == initial_partition(d, cfg));
}

TEST_CASE("infeasible minimum cluster size") {
  Dataset d = gaussian_blobs({vec({0.0, 0.0})}, {100}, 1.0, 2).data;
  InitConfig cfg;
  cfg.g = 3;
  cfg.min_pr = 0.4;
  try {
    initial_partition(d, cfg);
    FAIL("expected an initialization failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInitializationFailure);
  }
}

TEST_CASE("count_distinct") {
  Dataset d(otrimle::testing::column({1.0, 2.0, 1.0, 3.0, 2.0}));
  CHECK(count_distinct(d) == 3);
}
