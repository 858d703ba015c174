#include <cmath>

#include <doctest.h>
#include <Eigen/Dense>

#include "core/errors.hpp"
#include "core/projections.hpp"
#include "core/spectra.hpp"
#include "test_util.hpp"

using namespace ltir;

TEST_CASE("relay_form: white-noise-only Gram is sigma2 * I on the grid") {
  QuadratureGrid grid(512);
  std::mt19937_64 rng(47);
  const ChannelTriple ch = testutil::random_channel(rng);
  const double sigma2 = 1.7;
  const RelayEllipsoid e = relay_form(FirFilter::zeros(6), 8, ch, grid, sigma2, 2.0);
  CHECK((e.q - sigma2 * Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("relay_form: flat channels, one relay tap") {
  QuadratureGrid grid(512);
  const double a = 1.3, ps = 0.8, sigma2 = 0.5;
  const ChannelTriple ch(FirFilter({a}), FirFilter({2.0}), FirFilter({1.0}));
  std::mt19937_64 rng(53);
  FirFilter t = testutil::random_filter(rng, 6);
  const double scale = std::sqrt(ps / t.energy());
  for (double& v : t.taps) v *= scale;
  const RelayEllipsoid e = relay_form(t, 1, ch, grid, sigma2, 1.0);
  CHECK(e.q(0, 0) == doctest::Approx(a * a * ps + sigma2).epsilon(1e-10));
}

TEST_CASE("relay_form: quadratic form equals the direct quadrature") {
  QuadratureGrid grid(512);
  std::mt19937_64 rng(59);
  const ChannelTriple ch = testutil::random_channel(rng);
  const FirFilter t = testutil::random_filter(rng, 7);
  const FirFilter h = testutil::random_filter(rng, 5);
  const double sigma2 = 0.9;
  const RelayEllipsoid e = relay_form(t, 5, ch, grid, sigma2, 1.0);
  const double direct = grid.integrate([&](double w) {
    return std::norm(freq_response(h, w)) *
           (std::norm(freq_response(ch.sr, w)) * std::norm(freq_response(t, w)) + sigma2);
  });
  CHECK(e.power(h.vec()) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("relay_form: Gram dominates sigma2 * G, eigenvalues above 0.99 sigma2") {
  QuadratureGrid grid(512);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    const ChannelTriple ch = testutil::random_channel(rng);
    const FirFilter t = testutil::random_filter(rng, 6);
    const double sigma2 = 0.25 + (trial * 0.5);
    const RelayEllipsoid e = relay_form(t, 6, ch, grid, sigma2, 1.0);
    CHECK((e.q - e.q.transpose()).cwiseAbs().maxCoeff() == 0.0);  // Toeplitz assembly
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.q);
    CHECK(es.eigenvalues().minCoeff() >= 0.99 * sigma2);
  }
}

TEST_CASE("project_ball: interior point, radial scaling, norm bound") {
  const Eigen::Vector2d inside(0.4, 0.3);
  CHECK(project_ball(inside, 1.0) == inside);
  const Eigen::VectorXd out = project_ball(Eigen::Vector2d(2.0, 0.0), 1.0);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == 0.0);
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd v = testutil::random_filter(rng, 5, 3.0).vec();
    CHECK(project_ball(v, 0.7).squaredNorm() <= 0.7 * (1 + 1e-12));
  }
}

TEST_CASE("project_ellipsoid: feasible point is returned unchanged") {
  RelayEllipsoid e{Eigen::Matrix2d::Identity(), 1.0};
  const Eigen::Vector2d h(0.5, 0.5);
  CHECK(project_ellipsoid(h, e) == h);
}

TEST_CASE("project_ellipsoid: sphere reduces to radial scaling") {
  RelayEllipsoid e{Eigen::Matrix2d::Identity(), 1.0};
  const Eigen::VectorXd p = project_ellipsoid(Eigen::Vector2d(2.0, 0.0), e);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(p[1]) < 1e-12);
}

TEST_CASE("project_ellipsoid: brute-force boundary oracle on diag(4, 1)") {
  Eigen::Matrix2d q = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  RelayEllipsoid e{q, 1.0};
  const Eigen::Vector2d h(1.0, 1.0);
  const Eigen::VectorXd p = project_ellipsoid(h, e);

  // Boundary parametrization (cos(th)/2, sin(th)); dense scan plus local
  // parabolic refinement gives the reference minimizer.
  double best_dist = 1e300, best_th = 0;
  const int n = 2000000;
  for (int i = 0; i < n; ++i) {
    const double th = 2 * M_PI * i / n;
    const double dx = 0.5 * std::cos(th) - 1.0, dy = std::sin(th) - 1.0;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_dist) {
      best_dist = d2;
      best_th = th;
    }
  }
  const Eigen::Vector2d ref(0.5 * std::cos(best_th), std::sin(best_th));
  CHECK((p - ref).norm() < 1e-6);
  CHECK(e.power(p) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("project_ellipsoid: idempotent and Fejer monotone") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 4);
    Eigen::MatrixXd q = m * m.transpose() + 0.3 * Eigen::MatrixXd::Identity(4, 4);
    RelayEllipsoid e{q, 0.8};
    const Eigen::VectorXd h = 3.0 * testutil::random_filter(rng, 4).vec();
    const Eigen::VectorXd p1 = project_ellipsoid(h, e);
    const Eigen::VectorXd p2 = project_ellipsoid(p1, e);
    CHECK((p2 - p1).norm() <= 1e-8);
    CHECK(e.power(p1) <= 0.8 * (1 + 2e-12));

    // No farther from any feasible point than the original.
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd x = testutil::random_filter(rng, 4).vec();
      const double pw = x.dot(q * x);
      if (pw > 0.8) x *= std::sqrt(0.8 / pw) * 0.999;
      CHECK((p1 - x).norm() <= (h - x).norm() + 1e-12);
    }
  }
}

TEST_CASE("project_ellipsoid: rejects indefinite or asymmetric forms") {
  RelayEllipsoid sing{Eigen::Vector2d(1.0, 0.0).asDiagonal(), 1.0};
  CHECK_THROWS_AS(project_ellipsoid(Eigen::Vector2d(5.0, 5.0), sing), SingularForm);
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, -0.5, 1.0;
  RelayEllipsoid bad{asym, 1.0};
  CHECK_THROWS_AS(project_ellipsoid(Eigen::Vector2d(5.0, 5.0), bad), SingularForm);
}

TEST_CASE("project_two_step: feasible point unchanged, output always feasible") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(73);
  const ChannelTriple ch = testutil::random_channel(rng);
  const PowerBudget budget(1.0, 1.0, 1.0);

  const DesignPoint zero{FirFilter::zeros(4), FirFilter::zeros(3)};
  const DesignPoint same = project_two_step(zero, ch, grid, 1.0, budget);
  CHECK(same.t.taps == zero.t.taps);
  CHECK(same.h.taps == zero.h.taps);

  for (int trial = 0; trial < 10; ++trial) {
    const DesignPoint u{testutil::random_filter(rng, 4, 2.0), testutil::random_filter(rng, 3, 2.0)};
    const DesignPoint p = project_two_step(u, ch, grid, 1.0, budget);
    CHECK(p.t.energy() <= budget.ps * (1 + 1e-12));
    const RelayEllipsoid e = relay_form(p.t, 3, ch, grid, 1.0, budget.pr);
    CHECK(e.power(p.h.vec()) <= budget.pr * (1 + 1e-9));
  }
}

TEST_CASE("project_two_step: full-power initialization lands on the boundary") {
  QuadratureGrid grid(512);
  std::mt19937_64 rng(79);
  const ChannelTriple ch = testutil::random_channel(rng);
  const PowerBudget budget(1.0, 1.0, 1.0);
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(6);
  t0[0] = std::sqrt(budget.ps);
  const DesignPoint u{FirFilter::from_vec(t0),
                      FirFilter(std::vector<double>(4, 1.0))};
  const DesignPoint p = project_two_step(u, ch, grid, 1.0, budget);
  const RelayEllipsoid e = relay_form(p.t, 4, ch, grid, 1.0, budget.pr);
  // The all-ones start is infeasible here, so the projection uses full power.
  REQUIRE(e.power(u.h.vec()) > budget.pr);
  CHECK(e.power(p.h.vec()) == doctest::Approx(budget.pr).epsilon(1e-9));
}

TEST_CASE("ellipsoid nesting: shrinking t enlarges the feasible set") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const ChannelTriple ch = testutil::random_channel(rng);
    const FirFilter t = testutil::random_filter(rng, 5);
    const double gamma = (rng() % 1000) / 1000.0;
    Eigen::VectorXd tg = gamma * t.vec();
    const RelayEllipsoid big = relay_form(t, 4, ch, grid, 1.0, 1.0);
    const RelayEllipsoid small = relay_form(FirFilter::from_vec(tg), 4, ch, grid, 1.0, 1.0);
    Eigen::VectorXd h = testutil::random_filter(rng, 4).vec();
    h = project_ellipsoid(h, big);
    CHECK(small.power(h) <= 1.0 * (1 + 1e-9));
  }
}

TEST_CASE("project_xi: feasible point unchanged, members satisfied after sweeps") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(89);
  const ChannelTriple ch = testutil::random_channel(rng);
  const PowerBudget budget(1.0, 1.0, 1.0);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(project_xi(zero, 2, ch, grid, 1.0, budget, 8, 4) == zero);

  const Eigen::VectorXd h = 2.0 * testutil::random_filter(rng, 3).vec();
  const Eigen::VectorXd p = project_xi(h, 2, ch, grid, 1.0, budget, 8, 12);
  for (const auto& ts : ball_surface_points(2, std::sqrt(budget.ps), 8)) {
    const RelayEllipsoid e = relay_form(FirFilter::from_vec(ts), 3, ch, grid, 1.0, budget.pr);
    CHECK(e.power(p) <= budget.pr * (1 + 1e-6));
  }
}

TEST_CASE("project_xi: one-dimensional source reduces to a single ellipsoid") {
  QuadratureGrid grid(256);
  std::mt19937_64 rng(97);
  const ChannelTriple ch = testutil::random_channel(rng);
  const PowerBudget budget(0.9, 1.1, 1.0);
  const Eigen::VectorXd h = 2.5 * testutil::random_filter(rng, 3).vec();
  const Eigen::VectorXd via_xi = project_xi(h, 1, ch, grid, 1.0, budget, 4, 6);
  const RelayEllipsoid e =
      relay_form(FirFilter({std::sqrt(budget.ps)}), 3, ch, grid, 1.0, budget.pr);
  const Eigen::VectorXd direct = project_ellipsoid(h, e);
  CHECK((via_xi - direct).norm() < 1e-9);
}

TEST_CASE("ball_surface_points: on-sphere, sign-canonical") {
  for (int dim : {1, 2, 3, 5}) {
    const auto pts = ball_surface_points(dim, 1.3, 12);
    CHECK(!pts.empty());
    for (const auto& p : pts) {
      CHECK(p.norm() == doctest::Approx(1.3).epsilon(1e-12));
      REQUIRE(p.size() == dim);
    }
  }
}
