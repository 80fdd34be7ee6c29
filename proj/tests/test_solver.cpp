#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "gfb/instances.hpp"
#include "gfb/reference.hpp"
#include "gfb/solver.hpp"

using namespace gfb;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// 0 in N_{[-1,1]}(x) + N_{[0.5,2]}(x) + x, solved by x* = 0.5. Extended with
// zero operators when n = 3.
ProblemInstance kkt_instance(int n) {
  auto a1 = std::make_shared<BoxNormalCone>(v1(-1.0), v1(1.0));
  auto a2 = std::make_shared<BoxNormalCone>(v1(0.5), v1(2.0));
  auto b1 = std::make_shared<QuadraticGradient>(Eigen::MatrixXd::Identity(1, 1), 1.0);
  if (n == 2) return ProblemInstance::make(1, {a1, a2}, {b1});
  return ProblemInstance::make(1, {a1, a2, std::make_shared<ZeroOperator>()},
                               {b1, std::make_shared<ZeroForward>()});
}

struct CountingResolvent final : ResolventOperator {
  std::shared_ptr<const ResolventOperator> inner;
  mutable long calls = 0;
  explicit CountingResolvent(std::shared_ptr<const ResolventOperator> op) : inner(std::move(op)) {}
  Vec resolve(double sigma, const Vec& v) const override {
    ++calls;
    return inner->resolve(sigma, v);
  }
  std::string kind() const override { return inner->kind(); }
};

struct CountingForward final : ForwardOperator {
  std::shared_ptr<const ForwardOperator> inner;
  mutable long calls = 0;
  explicit CountingForward(std::shared_ptr<const ForwardOperator> op) : inner(std::move(op)) {}
  Vec apply(const Vec& x) const override {
    ++calls;
    return inner->apply(x);
  }
  double beta() const override { return inner->beta(); }
  std::string kind() const override { return inner->kind(); }
};

}  // namespace

TEST_CASE("config validation") {
  SUBCASE("experiment values: beta=1, gamma=2 gives bound 1") {
    SolverConfig cfg;
    cfg.gamma = 2.0;
    cfg.theta = RelaxationSchedule(0.99);
    const auto checked = validate_config(cfg, 1.0);
    CHECK(checked.theta_bound == doctest::Approx(1.0));
    CHECK_FALSE(checked.divergence_unverified);
  }
  SUBCASE("gamma = 4 beta rejected (open interval)") {
    SolverConfig cfg;
    cfg.gamma = 4.0;
    CHECK_THROWS_AS(validate_config(cfg, 1.0), StepsizeOutOfRange);
  }
  SUBCASE("relaxation above the bound") {
    SolverConfig cfg;
    cfg.gamma = 1.0;
    cfg.theta = RelaxationSchedule(1.6);
    CHECK_THROWS_AS(validate_config(cfg, 0.5), RelaxationOutOfRange);  // bound (4b-g)/2b = 1.5
  }
  SUBCASE("theta exactly at the bound is allowed but flagged") {
    SolverConfig cfg;
    cfg.gamma = 2.0;
    cfg.theta = RelaxationSchedule(1.0);
    CHECK(validate_config(cfg, 1.0).divergence_unverified);
  }
  SUBCASE("per-iteration sequences are checked elementwise") {
    SolverConfig cfg;
    cfg.gamma = 2.0;
    cfg.theta = RelaxationSchedule(std::vector<double>{0.5, 0.9, 1.2});
    CHECK_THROWS_AS(validate_config(cfg, 1.0), RelaxationOutOfRange);
  }
}

TEST_CASE("single step behavior") {
  Rng rngconsensus(71);
  SUBCASE("zero operators reach instant consensus (n=2)") {
    auto zero = std::make_shared<ZeroOperator>();
    auto prob = ProblemInstance::make(1, {zero, zero}, {std::make_shared<ZeroForward>()});
    const auto t = preset_triple(PresetKind::davis_yin, 2);
    SolverState s = SolverState::init_broadcast(1, 2, v1(5.0));
    step(s, prob, t, 1.0, 0.7);
    CHECK(s.x(0, 0) == 5.0);
    CHECK(s.x(0, 1) == 5.0);
    CHECK(s.w(0, 0) == 5.0);  // w unchanged at the fixed point
  }
  SUBCASE("one step matches a hand-coded Davis-Yin iteration") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 3;
      auto prob = make_random_instance(rng, 2, d);
      const auto t = preset_triple(PresetKind::davis_yin, 2);
      const double gamma = 0.8 * prob.beta;
      const double theta = 0.9;
      const Eigen::MatrixXd w0 = uniform_matrix(rng, d, 1, -2.0, 2.0);

      SolverState s = SolverState::init(d, 2, w0);
      step(s, prob, t, gamma, theta);

      // Davis-Yin, straight from the display equation
      const Vec w = w0.col(0);
      const Vec x1 = prob.resolvents[0]->resolve(gamma, w);
      const Vec x2 =
          prob.resolvents[1]->resolve(gamma, 2 * x1 - w - gamma * prob.forwards[0]->apply(x1));
      const Vec wn = w + theta * (x2 - x1);
      CHECK((s.x.col(0) - x1).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((s.x.col(1) - x2).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((s.w.col(0) - wn).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("consensus after the sweep leaves w unchanged") {
    // resolvents that project onto a single point force exact consensus
    const Vec c{{0.4, -1.2}};
    auto point = std::make_shared<BoxNormalCone>(c, c);
    auto quad = std::make_shared<QuadraticGradient>(Eigen::MatrixXd::Identity(2, 2), 1.0);
    auto prob = ProblemInstance::make(2, {point, point, point, point}, {quad, quad, quad});
    for (auto kind : {PresetKind::parallel, PresetKind::complete_seq}) {
      const auto t = preset_triple(kind, 4);
      SolverState s = SolverState::init(2, 4, uniform_matrix(rngconsensus, 2, 3, -2.0, 2.0));
      const Eigen::MatrixXd w_before = s.w;
      step(s, prob, t, 1.0, 0.99);
      for (int i = 0; i < 4; ++i) CHECK((s.x.col(i) - c).cwiseAbs().maxCoeff() == 0.0);
      CHECK((s.w - w_before).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("frugality: n resolvent calls and n-1 forward calls per step") {
  Rng rng(17);
  for (auto kind : {PresetKind::ring, PresetKind::sequential, PresetKind::parallel,
                    PresetKind::complete_seq, PresetKind::complete_par, PresetKind::davis_yin,
                    PresetKind::biparallel_limit}) {
    const int n = kind == PresetKind::davis_yin ? 2 : 5;
    auto base = make_random_instance(rng, n, 2);
    std::vector<std::shared_ptr<const ResolventOperator>> as;
    std::vector<std::shared_ptr<const ForwardOperator>> bs;
    std::vector<std::shared_ptr<CountingResolvent>> acount;
    std::vector<std::shared_ptr<CountingForward>> bcount;
    for (auto& op : base.resolvents) {
      acount.push_back(std::make_shared<CountingResolvent>(op));
      as.push_back(acount.back());
    }
    for (auto& op : base.forwards) {
      bcount.push_back(std::make_shared<CountingForward>(op));
      bs.push_back(bcount.back());
    }
    auto prob = ProblemInstance::make(2, as, bs, base.beta);
    const auto t = preset_triple(kind, n);
    SolverState s = SolverState::init_broadcast(2, n, Vec{{0.3, -0.7}});
    StepAudit audit;
    const int steps = 7;
    for (int k = 0; k < steps; ++k) step(s, prob, t, prob.beta, 0.5, &audit);
    for (auto& c : acount) CHECK(c->calls == steps);
    for (auto& c : bcount) CHECK(c->calls == steps);
    CHECK(audit.resolvent_calls == n);
    CHECK(audit.forward_calls == n - 1);
  }
}

TEST_CASE("run on the 1-D constrained quadratic") {
  auto prob = kkt_instance(2);
  SolverConfig cfg;
  cfg.gamma = 1.0;
  cfg.theta = RelaxationSchedule(0.99);
  cfg.tol = 1e-10;
  cfg.max_iters = 20000;
  const auto res = run(prob, preset_triple(PresetKind::davis_yin, 2), cfg, v1(10.0));
  CHECK(res.converged);
  CHECK(res.x_star(0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("run with all operators zero converges immediately") {
  auto zero = std::make_shared<ZeroOperator>();
  auto zf = std::make_shared<ZeroForward>();
  auto prob = ProblemInstance::make(3, {zero, zero, zero}, {zf, zf});
  SolverConfig cfg;
  cfg.gamma = 1.0;
  cfg.theta = RelaxationSchedule(0.9);
  cfg.tol = 1e-12;
  const auto res = run(prob, preset_triple(PresetKind::sequential, 3), cfg,
                       Vec{{0.5, -1.0, 2.0}});
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  CHECK((res.x_star - Vec{{0.5, -1.0, 2.0}}).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero forwards reduce to the splitting without forward steps") {
  Rng rng(23);
  for (auto kind : {PresetKind::sequential, PresetKind::ring, PresetKind::complete_seq}) {
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 4, d = 3;
      InstanceOptions opts;
      opts.all_zero_forwards = true;
      auto prob = make_random_instance(rng, n, d, opts);
      const auto t = preset_triple(kind, n);
      const double gamma = 1.3;
      const double theta = 0.9;
      const Eigen::MatrixXd w0 = uniform_matrix(rng, d, n - 1, -1.0, 1.0);

      SolverState s = SolverState::init(d, n, w0);
      Eigen::MatrixXd wref = w0;
      for (int k = 0; k < 30; ++k) {
        step(s, prob, t, gamma, theta);
        const Eigen::MatrixXd xref =
            reference::graph_drs_step(prob.resolvents, t, wref, gamma, theta);
        CHECK((s.x - xref).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.w - wref).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("reduction checks against the hand-coded display equations") {
  struct Case {
    PresetKind kind;
    int n;
  };
  for (const Case c : {Case{PresetKind::davis_yin, 2}, Case{PresetKind::sequential, 5},
                       Case{PresetKind::parallel, 5}, Case{PresetKind::ring, 5},
                       Case{PresetKind::four_op_1, 3}, Case{PresetKind::four_op_2, 3},
                       Case{PresetKind::biparallel_limit, 5}}) {
    for (int d : {1, 5}) {
      const auto report = reduction_check(c.kind, c.n, 20, d, /*seed=*/31 + d);
      INFO(preset_name(c.kind), " n=", c.n, " d=", d, " dev=", report.max_deviation);
      CHECK(report.max_deviation < 1e-12);
    }
  }
}

TEST_CASE("consensus, fixed point and certificate at convergence") {
  Rng rng(29);
  for (auto kind : {PresetKind::sequential, PresetKind::parallel, PresetKind::complete_par}) {
    const int n = 4, d = 2;
    InstanceOptions opts;
    opts.allow_linear = true;
    auto prob = make_random_instance(rng, n, d, opts);
    SolverConfig cfg;
    cfg.gamma = 2 * prob.beta;
    cfg.theta = RelaxationSchedule(0.99);
    cfg.tol = 1e-10;
    cfg.max_iters = 200000;
    const auto t = preset_triple(kind, n);
    const auto res = run(prob, t, cfg, uniform_matrix(rng, d, n - 1, -2.0, 2.0));
    if (!res.converged) continue;  // random soups may be infeasible; skip those
    double spread = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        spread = std::max(spread, (res.x_final.col(i) - res.x_final.col(j)).norm());
    CHECK(spread < 10 * cfg.tol);
    // re-running one step moves w by less than 10 tol
    SolverState s;
    s.w = res.w_star;
    s.x = res.x_final;
    const Eigen::MatrixXd w_before = s.w;
    step(s, prob, t, cfg.gamma, cfg.theta.at(0));
    CHECK((s.w - w_before).colwise().norm().maxCoeff() < 10 * cfg.tol);
  }
}

TEST_CASE("residual trace is recorded and eventually decreases") {
  auto prob = kkt_instance(3);
  SolverConfig cfg;
  cfg.gamma = 1.0;
  cfg.theta = RelaxationSchedule(0.99);
  cfg.tol = 0.0;  // run the full horizon
  cfg.max_iters = 501;
  cfg.record_trace = true;
  const auto res = run(prob, preset_triple(PresetKind::sequential, 3), cfg, v1(10.0));
  REQUIRE(res.residual_trace.size() == 501);
  CHECK(res.residual_trace[499] < res.residual_trace[49]);
}
