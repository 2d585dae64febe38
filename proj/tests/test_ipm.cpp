#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdestab/ipm.hpp"
#include "testutil.hpp"

using namespace pdestab;
namespace tu = pdestab::testutil;

namespace {

SDPProblem one_block(int side, int n_free = 0) {
  SDPProblem p;
  p.blocks.push_back({"X", side, 0});
  p.free_offset = side * (side + 1) / 2;
  p.n_free = n_free;
  return p;
}

void add_row(SDPProblem& p, std::vector<std::pair<int, double>> entries,
             double rhs, const std::string& tag) {
  for (auto& [c, v] : entries) {
    p.col.push_back(c);
    p.val.push_back(v);
  }
  p.rhs.push_back(rhs);
  p.tags.push_back(tag);
  p.row_ptr.push_back(int(p.col.size()));
}

}  // namespace

TEST_CASE("pinned entry is feasible") {
  SDPProblem p = one_block(2);
  add_row(p, {{p.blocks[0].flat(0, 0), 1.0}}, 1.0, "x11");
  SolveResult r = solve(p);
  REQUIRE(r.status == SolveStatus::Feasible);
  CHECK(verify(r.cert, p).pass);
  CHECK(r.cert.values[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("negative trace is infeasible with a certified ray") {
  SDPProblem p = one_block(3);
  add_row(p,
          {{p.blocks[0].flat(0, 0), 1.0},
           {p.blocks[0].flat(1, 1), 1.0},
           {p.blocks[0].flat(2, 2), 1.0}},
          -1.0, "trace");
  SolveResult r = solve(p);
  REQUIRE(r.status == SolveStatus::Infeasible);
  // re-check the ray by hand: b'y > 0 and sum y_i A_i negative semidefinite
  REQUIRE(r.farkas_y.size() == 1);
  const double y = r.farkas_y[0];
  CHECK(-1.0 * y > 0.0);
  CHECK(y <= 0.0);  // A*(y) = y I <= 0
}

TEST_CASE("free scalars via the split") {
  SDPProblem p = one_block(1, 2);
  // X11 = 2, f0 + f1 = 1, f0 - f1 = 5  ->  f0 = 3, f1 = -2
  add_row(p, {{0, 1.0}}, 2.0, "x11");
  add_row(p, {{p.free_offset, 1.0}, {p.free_offset + 1, 1.0}}, 1.0, "sum");
  add_row(p, {{p.free_offset, 1.0}, {p.free_offset + 1, -1.0}}, 5.0, "diff");
  SolveResult r = solve(p);
  REQUIRE(r.status == SolveStatus::Feasible);
  CHECK(r.cert.values[1] == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(r.cert.values[2] == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(verify(r.cert, p).pass);
}

TEST_CASE("iteration cap yields unknown, never a fake verdict") {
  SDPProblem p = one_block(4);
  add_row(p, {{p.blocks[0].flat(0, 0), 1.0}, {p.blocks[0].flat(1, 2), 0.5}}, 2.0,
          "r0");
  SolveOptions opts;
  opts.max_iter = 1;
  SolveResult r = solve(p, opts);
  CHECK(r.status == SolveStatus::Unknown);
}

TEST_CASE("contradictory rows are caught in presolve") {
  SDPProblem p = one_block(2);
  add_row(p, {{p.blocks[0].flat(0, 1), 1.0}}, 0.25, "a");
  add_row(p, {{p.blocks[0].flat(0, 1), 1.0}}, 0.75, "a-again");
  SolveResult r = solve(p);
  CHECK(r.status == SolveStatus::Infeasible);

  SDPProblem q = one_block(2);
  add_row(q, {}, 1.0, "empty-nonzero");
  CHECK(solve(q).status == SolveStatus::Infeasible);
}

TEST_CASE("random feasible instances solve and verify") {
  tu::Rng rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    const int side = 5 + 3 * (trial % 3);
    const int m = 8 + 2 * trial;
    SDPProblem p = one_block(side, 2);
    Eigen::MatrixXd x0 = tu::random_psd(rng, side);
    x0.diagonal().array() += 0.3;
    Eigen::Vector2d f0(tu::uniform(rng, -2, 2), tu::uniform(rng, -2, 2));
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> entries;
      double rhs = 0.0;
      for (int t = 0; t < 6; ++t) {
        int i = int(tu::uniform(rng, 0, side - 0.001));
        int j = int(tu::uniform(rng, 0, side - 0.001));
        if (i > j) std::swap(i, j);
        const double v = tu::uniform(rng, -1, 1);
        entries.emplace_back(p.blocks[0].flat(i, j), v);
        rhs += v * x0(i, j);
      }
      const double vf = tu::uniform(rng, -1, 1);
      entries.emplace_back(p.free_offset + (r % 2), vf);
      rhs += vf * f0(r % 2);
      add_row(p, entries, rhs, "r" + std::to_string(r));
    }
    SolveResult res = solve(p);
    REQUIRE(res.status == SolveStatus::Feasible);
    CHECK(verify(res.cert, p).pass);
  }
}

TEST_CASE("adding rows never turns infeasible into feasible") {
  tu::Rng rng(73);
  SDPProblem p = one_block(3);
  add_row(p,
          {{p.blocks[0].flat(0, 0), 1.0},
           {p.blocks[0].flat(1, 1), 1.0},
           {p.blocks[0].flat(2, 2), 1.0}},
          -0.5, "trace");
  SolveResult base = solve(p);
  REQUIRE(base.status == SolveStatus::Infeasible);
  for (int extra = 0; extra < 4; ++extra) {
    SDPProblem q = p;
    for (int r = 0; r <= extra; ++r) {
      int i = int(tu::uniform(rng, 0, 2.999));
      int j = int(tu::uniform(rng, 0, 2.999));
      if (i > j) std::swap(i, j);
      add_row(q, {{q.blocks[0].flat(i, j), tu::uniform(rng, -1, 1)}},
              tu::uniform(rng, -1, 1), "extra");
    }
    SolveResult r2 = solve(q);
    CHECK(r2.status != SolveStatus::Feasible);
  }
}

TEST_CASE("two psd blocks with coupling") {
  SDPProblem p;
  p.blocks.push_back({"X", 2, 0});
  p.blocks.push_back({"Y", 3, 3});
  p.free_offset = 3 + 6;
  p.n_free = 0;
  // X11 + Y33 = 2, X12 = 0.3
  p.col = {p.blocks[0].flat(0, 0), p.blocks[1].flat(2, 2), p.blocks[0].flat(0, 1)};
  p.val = {1.0, 1.0, 1.0};
  p.row_ptr = {0, 2, 3};
  p.rhs = {2.0, 0.3};
  p.tags = {"sum", "x12"};
  SolveResult r = solve(p);
  REQUIRE(r.status == SolveStatus::Feasible);
  CHECK(verify(r.cert, p).pass);
}
