#include <cmath>

#include <doctest.h>

#include "core/errors.hpp"
#include "core/objective.hpp"
#include "test_util.hpp"

using namespace ltir;

namespace {
const ChannelTriple kFlat12(FirFilter({1.0}), FirFilter({2.0}), FirFilter({1.0}));
}

TEST_CASE("rate: zero input gives zero rate") {
  QuadratureGrid grid(512);
  std::mt19937_64 rng(23);
  const ChannelTriple ch = testutil::random_channel(rng);
  const DesignPoint u{FirFilter::zeros(4), testutil::random_filter(rng, 3)};
  CHECK(rate(u, ch, grid, 1.0) == 0.0);
}

TEST_CASE("rate: flat channel scalar value") {
  QuadratureGrid grid(512);
  const DesignPoint u{FirFilter({1.0}), FirFilter({0.5})};
  CHECK(rate(u, kFlat12, grid, 1.0) ==
        doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("rate: sign flip of t leaves the rate unchanged") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const ChannelTriple ch = testutil::random_channel(rng);
    const DesignPoint u{testutil::random_filter(rng, 6), testutil::random_filter(rng, 4)};
    Eigen::VectorXd tneg = -u.t.vec();
    const DesignPoint v{FirFilter::from_vec(tneg), u.h};
    CHECK(rate(u, ch, grid, 1.0) == rate(v, ch, grid, 1.0));
  }
}

TEST_CASE("rate: scaling up the source spectrum never decreases it") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const ChannelTriple ch = testutil::random_channel(rng);
    const DesignPoint u{testutil::random_filter(rng, 6), testutil::random_filter(rng, 4)};
    const double r1 = rate(u, ch, grid, 1.0);
    const DesignPoint v{FirFilter::from_vec(1.7 * u.t.vec()), u.h};
    CHECK(rate(v, ch, grid, 1.0) >= r1 - 1e-14);
  }
}

TEST_CASE("rate: non-finite integrand propagates") {
  QuadratureGrid grid(64);
  const DesignPoint u{FirFilter({1e200}), FirFilter({1e200})};
  CHECK_THROWS_AS(rate(u, kFlat12, grid, 1.0), NonFiniteIntegrand);
}

TEST_CASE("cost_gradient: matches central differences") {
  QuadratureGrid grid(512);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int ls = 1 + static_cast<int>(rng() % 8);
    const int lr = 1 + static_cast<int>(rng() % 8);
    const ChannelTriple ch = testutil::random_channel(rng);
    DesignPoint u{testutil::random_filter(rng, ls), testutil::random_filter(rng, lr)};
    Eigen::VectorXd stacked = u.stacked();
    stacked /= stacked.norm();
    u = DesignPoint::from_stacked(stacked, ls, lr);

    const Eigen::VectorXd ga = cost_gradient(u, ch, grid, 1.0);
    const Eigen::VectorXd gf = finite_diff_gradient(u, ch, grid, 1.0);
    for (int i = 0; i < ga.size(); ++i) {
      if (std::abs(ga[i]) > 1e-8)
        CHECK(std::abs(ga[i] - gf[i]) / std::abs(ga[i]) < 1e-5);
    }
  }
}

TEST_CASE("cost_gradient: zero source zeroes the whole gradient") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(41);
  const ChannelTriple ch = testutil::random_channel(rng);
  const DesignPoint u{FirFilter::zeros(5), testutil::random_filter(rng, 4)};
  CHECK(cost_gradient(u, ch, grid, 1.0).norm() == 0.0);
}

TEST_CASE("cost_gradient: AF stationary point in flat fading") {
  // d* = a/b = 0.5 is the unconstrained optimum of the one-tap gain.
  QuadratureGrid grid(512);
  const DesignPoint u{FirFilter({1.0}), FirFilter({0.5})};
  const Eigen::VectorXd g = cost_gradient(u, kFlat12, grid, 1.0);
  CHECK(std::abs(g[1]) < 1e-10);
}

TEST_CASE("central_gradient: exact on quadratics, O(step^2) otherwise") {
  Eigen::MatrixXd a(2, 2);
  a << 2.0, 0.3, 0.3, 1.0;
  const Eigen::VectorXd b = Eigen::Vector2d(0.4, -1.1);
  auto quad = [&](const Eigen::VectorXd& x) { return x.dot(a * x) + b.dot(x); };
  const Eigen::VectorXd x0 = Eigen::Vector2d(0.7, -0.2);
  const Eigen::VectorXd expect = 2.0 * a * x0 + b;
  const Eigen::VectorXd g = central_gradient(quad, x0, 1e-3);
  CHECK((g - expect).norm() < 1e-9);

  // Cubic term: halving the step cuts the truncation error about 4x.
  auto cubic = [](const Eigen::VectorXd& x) { return x[0] * x[0] * x[0] + 2 * x[1] * x[1]; };
  const Eigen::VectorXd x1 = Eigen::Vector2d(0.9, 0.3);
  Eigen::VectorXd exact(2);
  exact << 3 * 0.9 * 0.9, 4 * 0.3;
  const double e1 = (central_gradient(cubic, x1, 1e-3) - exact).norm();
  const double e2 = (central_gradient(cubic, x1, 5e-4) - exact).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("finite_diff_gradient: validates the step") {
  QuadratureGrid grid(64);
  const DesignPoint u{FirFilter({1.0}), FirFilter({0.5})};
  CHECK_THROWS_AS(finite_diff_gradient(u, kFlat12, grid, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("DesignPoint: stacked layout is [t; h]") {
  const DesignPoint u{FirFilter({1, 2, 3}), FirFilter({4, 5})};
  const Eigen::VectorXd s = u.stacked();
  REQUIRE(s.size() == 5);
  CHECK(s[0] == 1.0);
  CHECK(s[2] == 3.0);
  CHECK(s[3] == 4.0);
  CHECK(s[4] == 5.0);
  const DesignPoint v = DesignPoint::from_stacked(s, 3, 2);
  CHECK(v.t.taps == u.t.taps);
  CHECK(v.h.taps == u.h.taps);
  CHECK_THROWS_AS(DesignPoint::from_stacked(s, 3, 3), InvalidArgument);
}

TEST_CASE("Evaluator: rate agrees with the free function") {
  QuadratureGrid grid(128);
  std::mt19937_64 rng(43);
  const ChannelTriple ch = testutil::random_channel(rng);
  const DesignPoint u{testutil::random_filter(rng, 5), testutil::random_filter(rng, 3)};
  Evaluator ev(ch, grid, 1.3, 5, 3);
  CHECK(ev.rate(u.t.vec(), u.h.vec()) == rate(u, ch, grid, 1.3));
  Eigen::VectorXd g;
  CHECK(ev.rate_and_cost_gradient(u.t.vec(), u.h.vec(), g) == rate(u, ch, grid, 1.3));
}
