#include <cmath>
#include <vector>

#include "doctest.h"
#include "relaybf/ipm.hpp"

using namespace relaybf::sdp::ipm;
using relaybf::linalg::RealMatrix;
using relaybf::linalg::RealVector;

namespace {

RealMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  RealMatrix m(n, n);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (const double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("pure LP: knapsack over a simplex") {
  // min -(u1 + 2 u2)  s.t.  u1 + u2 + u3 = 1, u >= 0   ->  -2 at u = e2
  ConeProblem p;
  p.ldim = 3;
  p.c_l = RealVector(3);
  p.c_l << -1.0, -2.0, 0.0;
  p.a_l.push_back((RealVector(3) << 1.0, 1.0, 1.0).finished());
  p.a_s.push_back(RealMatrix());
  p.b = RealVector::Constant(1, 1.0);
  const IpmResult r = solve(p);
  REQUIRE(r.status == IpmStatus::optimal);
  CHECK(r.primal_obj == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(r.u(1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.u(0) < 1e-6);
  CHECK(r.rel_gap < 1e-7);
}

TEST_CASE("pure LP: two coupled rows with a degenerate optimum") {
  // min u1 + u3  s.t.  u1 + u2 = 1, u2 + u3 = 1  ->  0 at u = (0,1,0)
  ConeProblem p;
  p.ldim = 3;
  p.c_l = (RealVector(3) << 1.0, 0.0, 1.0).finished();
  p.a_l.push_back((RealVector(3) << 1.0, 1.0, 0.0).finished());
  p.a_l.push_back((RealVector(3) << 0.0, 1.0, 1.0).finished());
  p.a_s.resize(2);
  p.b = (RealVector(2) << 1.0, 1.0).finished();
  const IpmResult r = solve(p);
  REQUIRE(r.status == IpmStatus::optimal);
  CHECK(r.primal_obj == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::abs(r.primal_obj) < 1e-6);
  CHECK(r.u(1) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("pure SDP: minimum eigenvalue via the spectraplex") {
  // min <C, X>  s.t.  Tr X = 1, X psd  ->  lambda_min(C) = 1
  ConeProblem p;
  p.sdim = 3;
  p.c_s = sym({{2, 1, 0}, {1, 2, 0}, {0, 0, 5}});
  p.a_s.push_back(RealMatrix::Identity(3, 3));
  p.a_l.push_back(RealVector());
  p.b = RealVector::Constant(1, 1.0);
  const IpmResult r = solve(p);
  REQUIRE(r.status == IpmStatus::optimal);
  CHECK(r.primal_obj == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.dual_obj == doctest::Approx(1.0).epsilon(1e-7));
  // optimizer is the eigenprojector onto (1,-1,0)/sqrt(2)
  CHECK(r.x(0, 0) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.x(0, 1) == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(r.x(2, 2) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("pure SDP: correlation matrix extremal off-diagonal") {
  // min <C, X>, C = [[0,-1/2],[-1/2,0]]  s.t.  X11 = X22 = 1  ->  -1 at X = ones
  ConeProblem p;
  p.sdim = 2;
  p.c_s = sym({{0.0, -0.5}, {-0.5, 0.0}});
  p.a_s.push_back(sym({{1.0, 0.0}, {0.0, 0.0}}));
  p.a_s.push_back(sym({{0.0, 0.0}, {0.0, 1.0}}));
  p.a_l.resize(2);
  p.b = RealVector::Ones(2);
  const IpmResult r = solve(p);
  REQUIRE(r.status == IpmStatus::optimal);
  CHECK(r.primal_obj == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r.x(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mixed cone: PSD block coupled to a scalar") {
  // min Tr X + u  s.t.  X11 - u = 1/2  ->  1/2 at X = diag(1/2, 0), u = 0
  ConeProblem p;
  p.sdim = 2;
  p.ldim = 1;
  p.c_s = RealMatrix::Identity(2, 2);
  p.c_l = RealVector::Zero(1);
  p.c_l(0) = 1.0;
  p.a_s.push_back(sym({{1.0, 0.0}, {0.0, 0.0}}));
  p.a_l.push_back(RealVector::Constant(1, -1.0));
  p.b = RealVector::Constant(1, 0.5);
  const IpmResult r = solve(p);
  REQUIRE(r.status == IpmStatus::optimal);
  CHECK(r.primal_obj == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.x(0, 0) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.u(0) < 1e-6);
}

TEST_CASE("KKT residuals are certified on a random feasible problem") {
  // random rows, right-hand side built from a strictly interior point, so
  // the problem is primal-feasible by construction
  ConeProblem p;
  p.sdim = 4;
  p.ldim = 2;
  unsigned s = 12345;
  auto next = [&s]() {
    s = s * 1664525u + 1013904223u;
    return static_cast<double>(s >> 8) / static_cast<double>(1u << 24) - 0.5;
  };
  auto rand_sym = [&](int n) {
    RealMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = next();
    return RealMatrix((m + m.transpose()) / 2.0);
  };
  p.c_s = rand_sym(4) + 4.0 * RealMatrix::Identity(4, 4);
  p.c_l = (RealVector(2) << 1.0, 2.0).finished();
  RealMatrix x0 = rand_sym(4);
  x0 = x0 * x0.transpose() + RealMatrix::Identity(4, 4);
  const RealVector u0 = (RealVector(2) << 1.0, 0.5).finished();
  for (int k = 0; k < 3; ++k) {
    p.a_s.push_back(rand_sym(4));
    RealVector al(2);
    al << next(), next();
    p.a_l.push_back(al);
    p.b.conservativeResize(k + 1);
    p.b(k) = p.a_s[k].cwiseProduct(x0).sum() + p.a_l[k].dot(u0);
  }
  const IpmResult r = solve(p);
  REQUIRE(r.status == IpmStatus::optimal);
  CHECK(r.primal_res < 1e-8);
  CHECK(r.dual_res < 1e-8);
  CHECK(r.rel_gap < 1e-8);
  // the returned primal point satisfies the rows
  for (int k = 0; k < 3; ++k) {
    const double lhs =
        p.a_s[k].cwiseProduct(r.x).sum() + p.a_l[k].dot(r.u);
    CHECK(lhs == doctest::Approx(p.b(k)).epsilon(1e-7));
  }
  // and stays in the cone
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(r.x, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  CHECK(r.u.minCoeff() > -1e-12);
  // primal and dual objectives agree at optimality
  CHECK(r.primal_obj == doctest::Approx(r.dual_obj).epsilon(1e-6));
}

TEST_CASE("iteration budget is respected") {
  ConeProblem p;
  p.sdim = 2;
  p.c_s = RealMatrix::Identity(2, 2);
  p.a_s.push_back(RealMatrix::Identity(2, 2));
  p.a_l.push_back(RealVector());
  p.b = RealVector::Constant(1, 1.0);
  IpmOptions opts;
  opts.max_iters = 3;          // far too few to converge to 1e-10
  opts.accept_feas = 1e30;     // but accept anything at exit
  opts.accept_gap = 1e30;
  const IpmResult r = solve(p, opts);
  CHECK(r.iterations <= 3);
  CHECK((r.status == IpmStatus::optimal || r.status == IpmStatus::max_iters));
}
