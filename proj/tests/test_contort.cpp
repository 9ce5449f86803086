#include <random>

#include "cubesolve/contort.hpp"
#include "doctest.h"

using namespace cubesolve;

namespace {

DimCtx dims(std::initializer_list<const char*> names) {
  DimCtx c;
  for (auto n : names) c.vars.emplace_back(n);
  return c;
}

Contortion psi_of(const DimCtx& target, const DimCtx& source,
                  std::initializer_list<const char*> terms) {
  Contortion p;
  p.target = target;
  p.source = source;
  for (auto t : terms) p.terms.push_back(parse_dim(t));
  return p;
}

CellPtr app(const char* head, const DimCtx& src, const DimCtx& tgt,
            std::initializer_list<const char*> terms) {
  return make_var_app(head, psi_of(tgt, src, terms));
}

// a : point, s : (i,j) with every face a, p : (i) unspecified
CellCtx square_ctx() {
  CellCtx ctx;
  ctx.push_back({"a", dims({}), {}});
  FaceList sb;
  for (const char* v : {"i", "j"})
    for (Endpoint e : {0, 1})
      sb.push_back({dvar(v), e, app("a", dims({}), dims({v[0] == 'i' ? "j" : "i"}), {})});
  ctx.push_back({"s", dims({"i", "j"}), sb});
  ctx.push_back({"p", dims({"i"}), {}});
  return ctx;
}

Boundary faces(std::initializer_list<std::pair<const char*, CellPtr>> fs) {
  Boundary b;
  for (auto& [key, body] : fs) {
    // key is like "j0" or "k1"
    std::string k(key);
    Endpoint e = k.back() - '0';
    k.pop_back();
    b.faces.push_back({parse_dim(k), e, body});
  }
  return b;
}

const CellDecl& decl(const CellCtx& ctx, const char* name) {
  return *find_decl(ctx, name);
}

}  // namespace

TEST_CASE("path inversion needs the De Morgan theory") {
  CellCtx ctx{{"p", dims({"i"}), {}}};
  DimCtx g = dims({"j"});
  Boundary goal = faces({{"j0", app("p", dims({"i"}), g, {"1"})},
                         {"j1", app("p", dims({"i"}), g, {"0"})}});

  auto inv = contort(ctx, g, goal, decl(ctx, "p"), {Theory::demorgan});
  REQUIRE(inv.has_value());
  CHECK(dim_equal(inv->terms[0], parse_dim("~j"), g));
  CHECK(check_ok(ctx, make_var_app("p", *inv), g, goal, Theory::demorgan));

  for (Theory t : {Theory::cartesian, Theory::disjunctive, Theory::dedekind})
    CHECK_FALSE(contort(ctx, g, goal, decl(ctx, "p"), {t}).has_value());
}

TEST_CASE("diagonal of a square") {
  CellCtx ctx{{"s", dims({"i", "j"}), {}}};
  DimCtx g = dims({"k"});
  Boundary goal = faces({{"k0", app("s", dims({"i", "j"}), g, {"0", "0"})},
                         {"k1", app("s", dims({"i", "j"}), g, {"1", "1"})}});
  auto d = contort(ctx, g, goal, decl(ctx, "s"), {Theory::dedekind});
  REQUIRE(d.has_value());
  CHECK(dim_equal(d->terms[0], parse_dim("k"), g));
  CHECK(dim_equal(d->terms[1], parse_dim("k"), g));
}

TEST_CASE("or-connection square of a path") {
  CellCtx ctx{{"p", dims({"i"}), {}}};
  DimCtx g = dims({"j", "k"});
  Boundary goal = faces({{"j0", app("p", dims({"i"}), dims({"k"}), {"k"})},
                         {"j1", app("p", dims({"i"}), dims({"k"}), {"1"})},
                         {"k0", app("p", dims({"i"}), dims({"j"}), {"j"})},
                         {"k1", app("p", dims({"i"}), dims({"j"}), {"1"})}});
  auto c = contort(ctx, g, goal, decl(ctx, "p"), {Theory::dedekind});
  REQUIRE(c.has_value());
  CHECK(dim_equal(c->terms[0], parse_dim("j \\/ k"), g));
}

TEST_CASE("contorted goal face pins the slice") {
  CellCtx ctx = square_ctx();
  DimCtx g = dims({"i", "j", "k"});
  auto a = [&](std::initializer_list<const char*> rest) {
    DimCtx t;
    for (auto v : rest) t.vars.emplace_back(v);
    return app("a", dims({}), t, {});
  };
  Boundary goal = faces(
      {{"i0", a({"j", "k"})},
       {"i1", a({"j", "k"})},
       {"j0", a({"i", "k"})},
       {"j1", a({"i", "k"})},
       {"k0", make_var_app("s", psi_of(dims({"i", "j"}), dims({"i", "j"}),
                                       {"i /\\ j", "i \\/ j"}))},
       {"k1", a({"i", "j"})}});

  SearchStats stats;
  stats.record_face_counts = true;
  auto c = contort(ctx, g, goal, decl(ctx, "s"), {Theory::dedekind}, &stats);
  REQUIRE(c.has_value());
  CHECK(dim_equal(c->terms[0], parse_dim("i /\\ j"), g));
  CHECK(dim_equal(c->terms[1], parse_dim("i \\/ j \\/ k"), g));

  // the contorted face is handled first and admits ten maps; the rest of
  // the search stays small
  REQUIRE(!stats.face_ppm_counts.empty());
  CHECK(stats.face_ppm_counts[0] == 10);
  CHECK(stats.maps_unfolded < 400);

  // the restriction narrows to a unique solution
  int solutions = 0;
  contort_stream(ctx, g, goal, decl(ctx, "s"), {Theory::dedekind},
                 [&](const Contortion&) {
                   ++solutions;
                   return true;
                 });
  CHECK(solutions == 1);
}

TEST_CASE("filter branch matches faces that step to another head") {
  // q restricted at j=0 becomes p(1), so a p-headed goal face is reachable
  CellCtx ctx{{"p", dims({"i"}), {}}};
  FaceList qb;
  qb.push_back({dvar("j"), 0, app("p", dims({"i"}), dims({}), {"1"})});
  ctx.push_back({"q", dims({"j"}), qb});

  DimCtx g = dims({"j"});
  Boundary goal = faces({{"j0", app("p", dims({"i"}), g, {"1"})},
                         {"j1", app("q", dims({"j"}), g, {"1"})}});
  auto c = contort(ctx, g, goal, decl(ctx, "q"), {Theory::dedekind});
  REQUIRE(c.has_value());
  CHECK(dim_equal(c->terms[0], parse_dim("j"), g));
}

TEST_CASE("whole-cube pin through a constant constraint") {
  CellCtx ctx{{"p", dims({"i"}), {}}};
  DimCtx g = dims({"j"});
  Boundary goal;
  goal.faces.push_back({dconst(0), 0, app("p", dims({"i"}), g, {"j"})});
  auto c = contort(ctx, g, goal, decl(ctx, "p"), {Theory::dedekind});
  REQUIRE(c.has_value());
  CHECK(dim_equal(c->terms[0], parse_dim("j"), g));
}

TEST_CASE("all solutions stream in enumeration order") {
  CellCtx ctx{{"p", dims({"i"}), {}}};
  DimCtx g = dims({"j", "k"});
  Boundary goal = faces({{"j0", app("p", dims({"i"}), dims({"k"}), {"0"})}});
  std::vector<std::string> seen;
  contort_stream(ctx, g, goal, decl(ctx, "p"), {Theory::cartesian},
                 [&](const Contortion& psi) {
                   seen.push_back(dim_to_string(psi.terms[0]));
                   return true;
                 });
  CHECK(seen == std::vector<std::string>{"0", "j"});
}

TEST_CASE("oracle agreement on random goals") {
  CellCtx ctx = square_ctx();
  std::mt19937 rng(20240517);

  auto rand_term = [&](const DimCtx& over, Theory th) -> DimPtr {
    std::vector<DimPtr> pool{dzero(), done()};
    for (const auto& v : over.vars) {
      pool.push_back(dvar(v));
      if (th == Theory::demorgan) pool.push_back(dneg(dvar(v)));
    }
    if (over.size() >= 2) {
      DimPtr x = dvar(over.vars[0]), y = dvar(over.vars[1]);
      if (th == Theory::dedekind || th == Theory::demorgan)
        pool.push_back(dmeet(x, y));
      if (th != Theory::cartesian) pool.push_back(djoin(x, y));
    }
    return pool[rng() % pool.size()];
  };

  auto rand_body = [&](const DimCtx& over, Theory th) -> CellPtr {
    switch (rng() % 3) {
      case 0:
        return make_var_app("a", Contortion{over, dims({}), {}, false});
      case 1:
        return make_var_app(
            "p", Contortion{over, dims({"i"}), {rand_term(over, th)}, false});
      default:
        return make_var_app(
            "s", Contortion{over, dims({"i", "j"}),
                            {rand_term(over, th), rand_term(over, th)},
                            false});
    }
  };

  int compared = 0;
  for (int it = 0; it < 60; ++it) {
    Theory th = static_cast<Theory>(it % 4);
    DimCtx g = (it % 2) ? dims({"x", "y"}) : dims({"x"});
    Boundary goal;
    for (const auto& v : g.vars)
      for (Endpoint e : {0, 1}) {
        if (rng() % 2) continue;
        auto [fctx, rho] = constrain_context(g, dvar(v), e);
        (void)rho;
        goal.faces.push_back({dvar(v), e, rand_body(fctx, th)});
      }
    try {
      wf_boundary(ctx, g, goal, th);
    } catch (const std::exception&) {
      continue;
    }
    for (const char* cand : {"p", "s"}) {
      auto fast = contort(ctx, g, goal, decl(ctx, cand), {th});
      auto slow = brute_force_contort(ctx, g, goal, decl(ctx, cand), {th});
      REQUIRE(fast.has_value() == slow.has_value());
      if (fast) {
        CHECK(contortion_equal(*fast, *slow));
        CHECK(check_ok(ctx, make_var_app(cand, *fast), g, goal, th));
      }
      ++compared;
    }
  }
  CHECK(compared > 60);
}

TEST_CASE("space guards") {
  CellCtx ctx{{"p", dims({"i"}), {}}};
  ctx.push_back({"big", dims({"d0", "d1", "d2", "d3", "d4", "d5", "d6"}), {}});
  DimCtx g3 = dims({"x", "y", "z"});
  Boundary empty;

  CHECK_THROWS_AS(
      brute_force_contort(ctx, g3, empty, decl(ctx, "p"), {Theory::demorgan}),
      InstanceTooLarge);
  DimCtx g5 = dims({"v", "w", "x", "y", "z"});
  CellCtx sctx = square_ctx();
  CHECK_THROWS_AS(brute_force_contort(sctx, g5, empty, decl(sctx, "s"),
                                      {Theory::dedekind}),
                  InstanceTooLarge);
  CHECK_THROWS_AS(
      contort(ctx, dims({"x"}), empty, decl(ctx, "big"), {Theory::dedekind}),
      InstanceTooLarge);

  // an empty goal is solved by the constant contortion
  auto c = brute_force_contort(ctx, g3, empty, decl(ctx, "p"),
                               {Theory::dedekind});
  REQUIRE(c.has_value());
  CHECK(dim_equal(c->terms[0], dzero(), g3));
}

TEST_CASE("deadline aborts the search") {
  CellCtx ctx = square_ctx();
  DimCtx g = dims({"x", "y"});
  Boundary empty;
  ContortOptions opt{Theory::dedekind};
  opt.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(contort(ctx, g, empty, decl(ctx, "s"), opt),
                  SolverTimeout);
}

TEST_CASE("wide De Morgan searches carry a hint") {
  CellCtx ctx = square_ctx();
  DimCtx g = dims({"x", "y", "z"});
  Boundary goal;
  for (const auto& v : g.vars)
    for (Endpoint e : {0, 1}) {
      auto [fctx, rho] = constrain_context(g, dvar(v), e);
      (void)rho;
      goal.faces.push_back(
          {dvar(v), e, make_var_app("a", Contortion{fctx, dims({}), {}, false})});
    }
  SearchStats stats;
  auto c = contort(ctx, g, goal, decl(ctx, "a"), {Theory::demorgan}, &stats);
  REQUIRE(c.has_value());
  REQUIRE(!stats.notes.empty());
  CHECK(stats.notes[0].find("dedekind") != std::string::npos);
}
