#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "otrimle/core_model.hpp"
#include "otrimle/error.hpp"
#include "test_support.hpp"

using namespace otrimle;
using otrimle::testing::vec;

namespace {

MixtureParams scalar_theta(double pi0, double delta) {
  MixtureParams t;
  t.pi0 = pi0;
  t.pi = vec({1.0 - pi0});
  t.mu = {vec({0.0})};
  t.sigma = {Matrix::Identity(1, 1)};
  t.delta = delta;
  return t;
}

MixtureParams two_cluster_theta(double pi0, double delta) {
  MixtureParams t;
  t.pi0 = pi0;
  t.pi = vec({0.6 * (1 - pi0), 0.4 * (1 - pi0)});
  t.mu = {vec({0.0, 0.0}), vec({3.0, 1.0})};
  Matrix s2(2, 2);
  s2 << 2.0, 0.5, 0.5, 1.0;
  t.sigma = {Matrix::Identity(2, 2), s2};
  t.delta = delta;
  return t;
}

double phi1(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

}  // namespace

TEST_CASE("improper density examples") {
  CHECK(improper_density(vec({0.0}), scalar_theta(0.5, 0.1)) == doctest::Approx(0.2494711).epsilon(1e-7));

  MixtureParams all_noise = scalar_theta(1.0, 0.1);
  all_noise.pi = vec({0.0});
  for (double x : {-5.0, 0.0, 42.0}) CHECK(improper_density(vec({x}), all_noise) == doctest::Approx(0.1));
}

TEST_CASE("zero delta gives the plain Gaussian mixture density") {
  MixtureParams t = two_cluster_theta(0.0, 0.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    Vector x = vec({z(rng), z(rng)});
    const double mixture = t.pi(0) * gauss_pdf(x, t.mu[0], t.sigma[0]) + t.pi(1) * gauss_pdf(x, t.mu[1], t.sigma[1]);
    CHECK(improper_density(x, t) == doctest::Approx(mixture).epsilon(1e-13));
  }
}

TEST_CASE("improper density is the term-by-term sum") {
  MixtureParams t = two_cluster_theta(0.2, 0.003);
  for (double a : {-1.0, 0.5, 7.0}) {
    Vector x = vec({a, -a / 2});
    const double sum =
        t.pi0 * t.delta + t.pi(0) * gauss_pdf(x, t.mu[0], t.sigma[0]) + t.pi(1) * gauss_pdf(x, t.mu[1], t.sigma[1]);
    CHECK(improper_density(x, t) == doctest::Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("log density survives extreme tails") {
  MixtureParams t = scalar_theta(0.0, 0.0);
  const double v = log_improper_density(vec({100.0}), t);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(-5000.0 - 0.5 * std::log(2 * std::numbers::pi)));
}

TEST_CASE("pseudo_loglik") {
  MixtureParams t = scalar_theta(0.0, 0.0);
  Dataset one(Matrix::Constant(1, 1, 0.0));
  CHECK(pseudo_loglik(one, t) == doctest::Approx(std::log(phi1(0.0))));
  Dataset two(Matrix::Constant(2, 1, 0.0));
  CHECK(pseudo_loglik(two, t) == doctest::Approx(pseudo_loglik(one, t)));

  MixtureParams u = scalar_theta(0.2, 0.05);
  Dataset three(otrimle::testing::column({-1.0, 0.0, 1.0}));
  double direct = 0.0;
  for (double x : {-1.0, 0.0, 1.0}) direct += std::log(0.2 * 0.05 + 0.8 * phi1(x));
  CHECK(pseudo_loglik(three, u) == doctest::Approx(direct / 3.0).epsilon(1e-13));
}

TEST_CASE("posteriors") {
  PseudoPosteriors tau = posteriors(Dataset(Matrix::Constant(1, 1, 0.0)), scalar_theta(0.5, 0.1));
  CHECK(tau.tau(0, 0) == doctest::Approx(0.05 / 0.2494711).epsilon(1e-6));
  CHECK(tau.tau(0, 0) == doctest::Approx(0.200424).epsilon(1e-6));

  MixtureParams sym;
  sym.pi = vec({0.5, 0.5});
  sym.mu = {vec({-1.0}), vec({1.0})};
  sym.sigma = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  PseudoPosteriors mid = posteriors(Dataset(Matrix::Constant(1, 1, 0.0)), sym);
  CHECK(mid.tau(0, 1) == doctest::Approx(0.5));
  CHECK(mid.tau(0, 2) == doctest::Approx(0.5));
  CHECK(mid.tau(0, 0) == 0.0);
}

TEST_CASE("posterior rows are probability vectors") {
  MixtureParams t = two_cluster_theta(0.3, 1e-4);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z(0.0, 30.0);
  Matrix x(300, 2);
  for (int i = 0; i < 600; ++i) x(i / 2, i % 2) = z(rng);
  PseudoPosteriors tau = posteriors(Dataset(x), t);
  for (int i = 0; i < tau.n(); ++i) {
    CHECK(std::abs(tau.tau.row(i).sum() - 1.0) < 1e-10);
    CHECK(tau.tau.row(i).minCoeff() >= 0.0);
    CHECK(tau.tau.row(i).maxCoeff() <= 1.0);
  }
}

TEST_CASE("assign uses argmax with lowest-index ties") {
  PseudoPosteriors tau;
  tau.tau.resize(3, 3);
  tau.tau << 0.7, 0.2, 0.1, 0.1, 0.45, 0.45, 0.0, 1.0, 0.0;
  CHECK(assign(tau) == Labeling{0, 1, 1});

  PseudoPosteriors scaled = tau;
  scaled.tau.row(0) *= 3.0;
  scaled.tau.row(2) *= 0.01;
  CHECK(assign(scaled) == assign(tau));
}

TEST_CASE("expectation combines posteriors and log-likelihood") {
  MixtureParams t = two_cluster_theta(0.1, 0.01);
  Dataset d = otrimle::testing::gaussian_blobs({vec({0, 0}), vec({3, 1})}, {30, 20}, 1.0, 4).data;
  EStep e = expectation(d, t);
  CHECK(e.loglik == doctest::Approx(pseudo_loglik(d, t)).epsilon(1e-13));
  CHECK((e.tau.tau - posteriors(d, t).tau).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("invalid parameters are rejected") {
  MixtureParams t = scalar_theta(0.5, 0.1);
  t.pi(0) = 0.7;
  CHECK_THROWS_AS(t.validate(), Error);
  MixtureParams neg = scalar_theta(0.5, -1.0);
  CHECK_THROWS_AS(neg.validate(), Error);
}
