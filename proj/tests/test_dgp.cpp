#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "otrimle/dgp.hpp"
#include "otrimle/error.hpp"
#include "test_support.hpp"

using namespace otrimle;
using otrimle::testing::vec;

namespace {

DgpSpec two_component_spec(int n) {
  DgpSpec s;
  s.name = "pair";
  s.g = 2;
  s.p = 2;
  s.n = n;
  ComponentSpec a;
  a.weight = 0.5;
  a.location = vec({0.0, 0.0});
  a.shape = Matrix::Identity(2, 2);
  ComponentSpec b = a;
  b.location = vec({4.0, 0.0});
  b.shape = 2.0 * Matrix::Identity(2, 2);
  s.components = {a, b};
  return s;
}

}  // namespace

TEST_CASE("component shares follow the weights") {
  LabeledSample s = sample_dgp(two_component_spec(100000), 9);
  const double share = std::count(s.gen_labels.begin(), s.gen_labels.end(), 1) / 100000.0;
  CHECK(std::abs(share - 0.5) < 0.01);
}

TEST_CASE("sample means converge to the locations") {
  const DgpSpec spec = two_component_spec(4000);
  LabeledSample s = sample_dgp(spec, 10);
  for (int j = 1; j <= 2; ++j) {
    Vector sum = Vector::Zero(2);
    int nj = 0;
    for (int i = 0; i < s.data.n(); ++i)
      if (s.gen_labels[i] == j) {
        sum += s.data.row(i);
        ++nj;
      }
    const Vector mean = sum / nj;
    const double sd = std::sqrt(spec.components[j - 1].shape(0, 0));
    CHECK((mean - spec.components[j - 1].location).cwiseAbs().maxCoeff() < 4.0 * sd / std::sqrt(nj));
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const DgpSpec& spec = builtin_spec("WideNoise.3l-like");
  LabeledSample a = sample_dgp(spec, 42);
  LabeledSample b = sample_dgp(spec, 42);
  CHECK(a.data.points() == b.data.points());
  CHECK(a.gen_labels == b.gen_labels);
  LabeledSample c = sample_dgp(spec, 43);
  CHECK(a.data.points() != c.data.points());
}

TEST_CASE("builtin catalog") {
  std::set<std::string> names;
  for (const DgpSpec& s : builtin_specs()) {
    names.insert(s.name);
    CHECK_NOTHROW(s.validate());
    CHECK(s.n == (s.p == 2 ? 1000 : 2000));
    CHECK(static_cast<int>(s.components.size()) == s.g);
  }
  for (const char* family : {"WideNoise", "SideNoise", "SunSpot", "TGauss", "GaussT", "Noiseless"}) {
    bool found = false;
    for (const std::string& n : names) found = found || n.rfind(family, 0) == 0;
    CHECK(found);
  }
  try {
    builtin_spec("NoSuchSpec");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("SunSpot.3l-like") != std::string::npos);
  }
}

TEST_CASE("noiseless specs never produce noise labels") {
  for (const char* name : {"Noiseless.5l-like", "TGauss.3l-like"}) {
    LabeledSample s = sample_dgp(with_sample_size(builtin_spec(name), 500), 1);
    CHECK(std::count(s.gen_labels.begin(), s.gen_labels.end(), 0) == 0);
  }
}

TEST_CASE("uniform noise stays inside its box") {
  for (const char* name : {"WideNoise.3h-like", "SideNoise.2l-like", "SunSpot.3l-like"}) {
    const DgpSpec& spec = builtin_spec(name);
    LabeledSample s = sample_dgp(spec, 3);
    int noise = 0;
    for (int i = 0; i < s.data.n(); ++i) {
      if (s.gen_labels[i] != 0) continue;
      ++noise;
      for (int d = 0; d < 2; ++d) {
        CHECK(s.data.points()(i, d) >= spec.noise->box_lo(d));
        CHECK(s.data.points()(i, d) <= spec.noise->box_hi(d));
      }
    }
    CHECK(noise > 0);
  }
}

TEST_CASE("sunspot noise is far from every cluster") {
  const DgpSpec& spec = builtin_spec("SunSpot.3l-like");
  LabeledSample s = sample_dgp(spec, 5);
  double pooled = 0.0;
  for (const ComponentSpec& c : spec.components) pooled += c.weight * c.shape.trace() / 2.0;
  pooled = std::sqrt(pooled);
  for (int i = 0; i < s.data.n(); ++i) {
    if (s.gen_labels[i] != 0) continue;
    for (const ComponentSpec& c : spec.components)
      CHECK((s.data.row(i) - c.location).norm() >= 20.0 * pooled);
  }
}

TEST_CASE("truth of Gaussian components is their moments") {
  const DgpSpec& spec = builtin_spec("SideNoise.2l-like");
  TruthParams t = dgp_truth(spec);
  const double w = spec.components[0].weight + spec.components[1].weight;
  for (int j = 0; j < 2; ++j) {
    CHECK(t.triples[j].center == spec.components[j].location);
    CHECK(t.triples[j].scatter == spec.components[j].shape);
    CHECK(t.triples[j].pi == doctest::Approx(spec.components[j].weight / w));
  }
}

TEST_CASE("high-dimensional truth is block diagonal") {
  const DgpSpec& spec = builtin_spec("GaussT.3h-like");
  TruthParams t = dgp_truth(spec);
  const Matrix& s = t.triples[0].scatter;
  CHECK(s.rows() == 20);
  CHECK(s.block(0, 2, 2, 18).cwiseAbs().maxCoeff() == 0.0);
  // a unit-variance t3 coordinate has a smaller robust scatter than its variance
  CHECK(s(5, 5) < 1.0);
  CHECK(s(5, 5) > 0.3);
}

TEST_CASE("stream seeds differ by replicate and stream") {
  CHECK(stream_seed(1, 0, "sample:a") != stream_seed(1, 1, "sample:a"));
  CHECK(stream_seed(1, 0, "sample:a") != stream_seed(1, 0, "sample:b"));
  CHECK(stream_seed(1, 0, "sample:a") != stream_seed(2, 0, "sample:a"));
  CHECK(stream_seed(7, 3, "x") == stream_seed(7, 3, "x"));
}

TEST_CASE("overlapping pair dataset") {
  LabeledSample s = overlap_pair_dataset(kOverlapPairSeed);
  CHECK(s.data.n() == 212);
  CHECK(std::count(s.gen_labels.begin(), s.gen_labels.end(), 3) == 12);
  CHECK(std::count(s.gen_labels.begin(), s.gen_labels.end(), 1) == 100);
}

TEST_CASE("spec validation") {
  DgpSpec s = two_component_spec(100);
  s.components[0].weight = 0.9;
  CHECK_THROWS_AS(s.validate(), Error);
  DgpSpec t = two_component_spec(0);
  CHECK_THROWS_AS(t.validate(), Error);
}
