#include <doctest.h>

#include <cmath>

#include "esdrl/es/averaging.hpp"
#include "esdrl/es/controller.hpp"

using namespace esdrl::es;

TEST_CASE("es params validation") {
  EsParams p;
  CHECK_NOTHROW(p.validate());
  SUBCASE("duplicate ratios rejected") {
    p.ratios = {1.0, 1.0, 2.0};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
  SUBCASE("non-positive gains rejected") {
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
}

TEST_CASE("es_init") {
  SUBCASE("stores the warm start and freezes the gripper channel") {
    Eigen::Vector4d a(0.0, 0.0, 0.0, -1.0);
    EsState s = es_init(a);
    CHECK(s.frozen_gripper == -1.0);
    CHECK((s.warm_start - a).norm() == 0.0);
    CHECK(s.t == 0);
  }
  SUBCASE("rejects actions outside the box") {
    CHECK_THROWS_AS(es_init(Eigen::Vector4d(1.2, 0, 0, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("es_action") {
  EsParams p;
  SUBCASE("t=0, J=0 emits the positive amplitude on every dither channel") {
    EsState s = es_init(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4));
    Eigen::Vector4d a = es_action(p, s, 0.0);
    for (int i = 0; i < 3; ++i) {
      CHECK(a[i] == doctest::Approx(std::min(1.0, p.amplitude(i)))
                        .epsilon(1e-15));
    }
    CHECK(a[3] == 0.4);
    CHECK(s.t == 1);
  }
  SUBCASE("amplitude bound holds for arbitrary t and J") {
    EsState s = es_init(Eigen::Vector4d::Zero());
    for (int t = 0; t < 500; ++t) {
      Eigen::Vector4d a = es_action(p, s, std::sin(0.37 * t) * 3.0);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(a[i]) <= std::min(1.0, p.amplitude(i)) + 1e-15);
      }
      CHECK(a[3] == 0.0);
    }
  }
  SUBCASE("pure function of (t, J)") {
    EsState s1 = es_init(Eigen::Vector4d::Zero());
    EsState s2 = es_init(Eigen::Vector4d::Zero());
    for (int t = 0; t < 20; ++t) {
      Eigen::Vector4d a1 = es_action(p, s1, 1.23);
      Eigen::Vector4d a2 = es_action(p, s2, 1.23);
      CHECK((a1 - a2).norm() == 0.0);
    }
  }
  SUBCASE("non-finite cost rejected") {
    EsState s = es_init(Eigen::Vector4d::Zero());
    CHECK_THROWS_AS(
        es_action(p, s, std::numeric_limits<double>::quiet_NaN()),
        std::invalid_argument);
  }
}

TEST_CASE("averaged_flow") {
  SUBCASE("1-D quadratic matches the closed-form exponential") {
    // J(x) = x^2: xbar(t) = x0 * exp(-kalpha * t).
    auto grad = [](const Eigen::VectorXd& x, double) {
      return (2.0 * x).eval();
    };
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    Trajectory tr = averaged_flow(grad, 1.0, x0, 1.0, 1e-3);
    CHECK(std::abs(tr.states.back()[0] - std::exp(-1.0)) < 1e-6);
  }
  SUBCASE("zero gradient keeps the trajectory constant") {
    auto grad = [](const Eigen::VectorXd& x, double) {
      return Eigen::VectorXd::Zero(x.size()).eval();
    };
    Eigen::VectorXd x0(2);
    x0 << 0.3, -0.7;
    Trajectory tr = averaged_flow(grad, 2.0, x0, 1.0, 1e-3, 100);
    for (const auto& s : tr.states) CHECK((s - x0).norm() == 0.0);
  }
  SUBCASE("norm cost moves at speed kalpha/2 toward the target") {
    // J(x) = |x - g|: unit gradient away from g.
    Eigen::VectorXd g(2);
    g << 1.0, 1.0;
    auto grad = [&](const Eigen::VectorXd& x, double) {
      return ((x - g) / (x - g).norm()).eval();
    };
    Eigen::VectorXd x0(2);
    x0 << 0.0, 0.0;
    const double kalpha = 0.5;
    Trajectory tr = averaged_flow(grad, kalpha, x0, 1.0, 1e-3);
    const double moved = (tr.states.back() - x0).norm();
    CHECK(moved == doctest::Approx(0.5 * kalpha * 1.0).epsilon(1e-6));
    const Eigen::VectorXd dir = (tr.states.back() - x0).normalized();
    CHECK(dir[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  }
  SUBCASE("non-finite gradient aborts with a diagnostic") {
    auto grad = [](const Eigen::VectorXd& x, double) {
      return (x / 0.0).eval();
    };
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    CHECK_THROWS_AS(averaged_flow(grad, 1.0, x0, 1.0, 1e-3),
                    std::runtime_error);
  }
}

TEST_CASE("averaging_gap") {
  Trajectory a, b;
  Eigen::VectorXd u(2), v(2);
  u << 0.0, 0.0;
  v << 3.0, 4.0;
  for (int i = 0; i < 5; ++i) {
    a.times.push_back(i);
    b.times.push_back(i);
    a.states.push_back(u);
    b.states.push_back(u);
  }
  SUBCASE("identical trajectories give zero") {
    CHECK(averaging_gap(a, b) == 0.0);
  }
  SUBCASE("constant offset gives its norm") {
    for (auto& s : b.states) s = v;
    CHECK(averaging_gap(a, b) == doctest::Approx(5.0));
  }
  SUBCASE("length mismatch rejected") {
    b.times.pop_back();
    b.states.pop_back();
    CHECK_THROWS_AS(averaging_gap(a, b), std::invalid_argument);
  }
}

TEST_CASE("es flow tracks the averaged descent flow as omega grows") {
  // 1-D quadratic benchmark: gap non-increasing over doubling omega.
  auto cost = [](const Eigen::VectorXd& x, double) { return x.squaredNorm(); };
  auto grad = [](const Eigen::VectorXd& x, double) { return (2.0 * x).eval(); };
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  const double horizon = 5.0, dt = 1e-4;
  const int stride = 10;
  Trajectory avg = averaged_flow(grad, 1.0, x0, horizon, dt, stride);

  double prev = std::numeric_limits<double>::infinity();
  for (double omega : {25.0, 50.0, 100.0}) {
    EsFlowParams p;
    p.alpha = 0.5;
    p.k = 2.0;
    p.omega = omega;
    p.ratios = {1.0};
    Trajectory esxt = es_flow(cost, p, x0, horizon, dt, stride);
    const double gap = averaging_gap(esxt, avg);
    CHECK(gap <= prev);
    prev = gap;
  }
  CHECK(prev < 0.15);
}
