#include "cubesolve/cell.hpp"
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

// p : (i) with unspecified boundary, q : (j) [j=0 -> p(1)]
CellCtx path_ctx() {
  CellCtx ctx;
  ctx.push_back({"p", dims({"i"}), {}});
  FaceList qb;
  qb.push_back({dvar("j"), 0, app("p", dims({"i"}), dims({}), {"1"})});
  ctx.push_back({"q", dims({"j"}), qb});
  return ctx;
}

// the concatenation filler of p and q over (i), in direction `bound` up to `to`
CellPtr concat_fill(const char* bound, Endpoint from, DimPtr to) {
  FaceList sides;
  sides.push_back({dvar("i"), 0, app("p", dims({"i"}), dims({}), {"0"})});
  sides.push_back({dvar("i"), 1,
                   app("q", dims({"j"}), dims({bound}), {bound})});
  CellPtr base = app("p", dims({"i"}), dims({"i"}), {"i"});
  return make_fill(from, std::move(to), bound, std::move(sides), base);
}

std::string face_str(const Boundary& b, const char* var, Endpoint e) {
  for (const auto& f : b.faces)
    if (f.c->kind == DimTerm::Kind::var && f.c->name == var && f.e == e)
      return cell_to_string(f.body);
  return "<missing>";
}

}  // namespace

TEST_CASE("constrain_context") {
  DimCtx jk = dims({"j", "k"});
  auto [c1, s1] = constrain_context(jk, dvar("j"), 0);
  CHECK(c1.vars == std::vector<std::string>{"k"});
  CHECK(dim_to_string(s1.term_for("j")) == "0");
  CHECK(dim_to_string(s1.term_for("k")) == "k");

  auto [c2, s2] = constrain_context(jk, dzero(), 0);
  CHECK(c2 == jk);
  CHECK_FALSE(s2.to_bot);

  auto [c3, s3] = constrain_context(jk, dzero(), 1);
  CHECK(c3.bot);
  CHECK(s3.to_bot);

  CHECK_THROWS_AS(constrain_context(jk, dvar("z"), 0), IllScopedFace);
  CHECK_THROWS_AS(constrain_context(jk, parse_dim("j /\\ k"), 0),
                  IllScopedFace);
}

TEST_CASE("boundary of a demorgan contortion") {
  CellCtx ctx = path_ctx();
  DimCtx jk = dims({"j", "k"});
  CellPtr t = app("p", dims({"i"}), jk, {"~j \\/ k"});
  Boundary b = cell_boundary(ctx, t, jk);
  REQUIRE(b.faces.size() == 4);
  CHECK(face_str(b, "j", 0) == "p(1)");
  CHECK(face_str(b, "j", 1) == "p(k)");
  CHECK(face_str(b, "k", 0) == "p(~j)");
  CHECK(face_str(b, "k", 1) == "p(1)");
  CHECK(dim_to_string(b.faces[0].c) == "j");  // variable-major order
  CHECK(b.faces[0].e == 0);
  CHECK(b.faces[1].e == 1);
  CHECK(dim_to_string(b.faces[2].c) == "k");
}

TEST_CASE("or-connection boundary") {
  CellCtx ctx = path_ctx();
  DimCtx jk = dims({"j", "k"});
  CellPtr t = app("p", dims({"i"}), jk, {"j \\/ k"});
  Boundary b = cell_boundary(ctx, t, jk);
  CHECK(face_str(b, "j", 0) == "p(k)");
  CHECK(face_str(b, "j", 1) == "p(1)");
  CHECK(face_str(b, "k", 0) == "p(j)");
  CHECK(face_str(b, "k", 1) == "p(1)");
  CHECK_NOTHROW(wf_boundary(ctx, jk, b, Theory::demorgan));
}

TEST_CASE("diagonal boundary") {
  CellCtx ctx;
  ctx.push_back({"s", dims({"i", "j"}), {}});
  DimCtx k = dims({"k"});
  CellPtr t = app("s", dims({"i", "j"}), k, {"k", "k"});
  Boundary b = cell_boundary(ctx, t, k);
  CHECK(face_str(b, "k", 0) == "s(0, 0)");
  CHECK(face_str(b, "k", 1) == "s(1, 1)");
}

TEST_CASE("declared faces fire under normalization") {
  CellCtx ctx = path_ctx();
  CellPtr q0 = app("q", dims({"j"}), dims({}), {"0"});
  CHECK(cell_to_string(normalize_cell(ctx, q0)) == "p(1)");
  CellPtr q1 = app("q", dims({"j"}), dims({}), {"1"});
  CHECK(cell_to_string(normalize_cell(ctx, q1)) == "q(1)");
  CellPtr qj = app("q", dims({"j"}), dims({"j"}), {"j"});
  CHECK(cell_to_string(normalize_cell(ctx, qj)) == "q(j)");
  // component that is equal to an endpoint without being one syntactically
  CellPtr qm = app("q", dims({"j"}), dims({"k"}), {"k /\\ 0"});
  CHECK(cell_to_string(normalize_cell(ctx, qm)) == "p(1)");
}

TEST_CASE("concatenation filler") {
  CellCtx ctx = path_ctx();
  DimCtx i = dims({"i"});
  CellPtr pq = concat_fill("j", 0, done());

  Boundary b = cell_boundary(ctx, pq, i);
  REQUIRE(b.faces.size() == 2);  // target is a constant: no back face
  CHECK(face_str(b, "i", 0) == "p(0)");
  CHECK(face_str(b, "i", 1) == "q(1)");

  Boundary goal;
  goal.faces.push_back({dvar("i"), 0, app("p", dims({"i"}), dims({}), {"0"})});
  goal.faces.push_back({dvar("i"), 1, app("q", dims({"j"}), dims({}), {"1"})});
  CHECK_NOTHROW(check(ctx, pq, i, goal, Theory::demorgan));

  // base p(0) would not restrict to q(0) = p(1) on the i=1 side
  CellPtr broken = make_fill(0, done(), "j", pq->sides,
                             app("p", dims({"i"}), i, {"0"}));
  CHECK_THROWS_AS(check(ctx, broken, i, goal, Theory::demorgan),
                  IllFormedFill);

  Boundary wrong = goal;
  wrong.faces[1].body = app("p", dims({"i"}), dims({}), {"0"});
  CHECK_THROWS_AS(check(ctx, pq, i, wrong, Theory::demorgan),
                  BoundaryMismatch);
}

TEST_CASE("degenerate fill collapses to its base") {
  CellCtx ctx = path_ctx();
  CellPtr t = concat_fill("j", 0, dzero());
  CHECK(cell_to_string(normalize_cell(ctx, t)) == "p(i)");
}

TEST_CASE("trivially true side projects out") {
  CellCtx ctx = path_ctx();
  FaceList sides;
  sides.push_back({dzero(), 0, app("q", dims({"j"}), dims({"j"}), {"j"})});
  CellPtr t = make_fill(0, done(), "j", std::move(sides),
                        app("q", dims({"j"}), dims({}), {"0"}));
  CHECK(cell_to_string(normalize_cell(ctx, t)) == "q(1)");
}

TEST_CASE("partial filler restricts to faces of the open box") {
  CellCtx ctx = path_ctx();
  DimCtx ik = dims({"i", "k"});
  CellPtr partial = concat_fill("j", 0, dvar("k"));

  CHECK(cell_to_string(face_at(ctx, partial, ik, dvar("k"), 0)) == "p(i)");
  CHECK(alpha_eq(face_at(ctx, partial, ik, dvar("k"), 1),
                 normalize_cell(ctx, concat_fill("j", 0, done()))));
  CHECK(cell_to_string(face_at(ctx, partial, ik, dvar("i"), 1)) == "q(k)");
  CHECK(cell_to_string(face_at(ctx, partial, ik, dvar("i"), 0)) == "p(0)");

  Boundary goal;
  goal.faces.push_back({dvar("k"), 0, app("p", dims({"i"}), ik, {"i"})});
  goal.faces.push_back({dvar("k"), 1, concat_fill("j", 0, done())});
  goal.faces.push_back({dvar("i"), 0, app("p", dims({"i"}), dims({}), {"0"})});
  goal.faces.push_back({dvar("i"), 1, app("q", dims({"j"}), dims({"k"}), {"k"})});
  CHECK_NOTHROW(check(ctx, partial, ik, goal, Theory::demorgan));

  Boundary full = cell_boundary(ctx, partial, ik);
  REQUIRE(full.faces.size() == 3);  // two sides plus the back face
  CHECK(face_str(full, "k", 0) == "p(i)");
}

TEST_CASE("alpha equivalence") {
  CellCtx ctx = path_ctx();
  CellPtr a = concat_fill("j", 0, done());
  CellPtr b = concat_fill("l", 0, done());
  CHECK(alpha_eq(a, b));

  FaceList reordered{a->sides[1], a->sides[0]};
  CellPtr c = make_fill(0, done(), "j", std::move(reordered), a->base);
  CHECK(alpha_eq(a, c));

  CellPtr d = concat_fill("j", 1, done());
  CHECK_FALSE(alpha_eq(a, d));
  CHECK_FALSE(alpha_eq(a, a->base));

  CellPtr e1 = app("p", dims({"i"}), dims({"j", "k"}), {"j \\/ k"});
  CellPtr e2 = app("p", dims({"i"}), dims({"j", "k"}), {"k \\/ j \\/ k"});
  CHECK(alpha_eq(e1, e2));
}

TEST_CASE("substitution renames a captured bound direction") {
  CellCtx ctx = path_ctx();
  CellPtr t = concat_fill("j", 0, done());  // over (i)
  Contortion ren;
  ren.target = dims({"j"});
  ren.source = dims({"i"});
  ren.terms = {dvar("j")};
  CellPtr s = apply_subst_cell(ctx, t, ren);
  REQUIRE(s->kind == Cell::Kind::fill);
  CHECK(s->bound != "j");
  CHECK(cell_to_string(face_at(ctx, s, dims({"j"}), dvar("j"), 1)) == "q(1)");
}

TEST_CASE("boundary compatibility") {
  CellCtx ctx = path_ctx();
  DimCtx jk = dims({"j", "k"});

  Boundary bad;
  bad.faces.push_back({dvar("j"), 0, app("p", dims({"i"}), dims({"k"}), {"1"})});
  bad.faces.push_back({dvar("k"), 0, app("p", dims({"i"}), dims({"j"}), {"0"})});
  CHECK_THROWS_AS(wf_boundary(ctx, jk, bad, Theory::demorgan),
                  IncompatibleFaces);

  Boundary dup;
  dup.faces.push_back({dvar("j"), 0, app("p", dims({"i"}), dims({"k"}), {"1"})});
  dup.faces.push_back({dvar("j"), 0, app("p", dims({"i"}), dims({"k"}), {"1"})});
  CHECK_THROWS_AS(wf_boundary(ctx, jk, dup, Theory::demorgan),
                  IncompatibleFaces);

  Boundary scoped;
  scoped.faces.push_back({dvar("z"), 0, app("p", dims({"i"}), dims({"k"}), {"1"})});
  CHECK_THROWS_AS(wf_boundary(ctx, jk, scoped, Theory::demorgan),
                  IllScopedFace);
}

TEST_CASE("context well-formedness") {
  CHECK_NOTHROW(wf_context(path_ctx(), Theory::demorgan));

  CellCtx forward;
  FaceList fb;
  fb.push_back({dvar("j"), 0, app("p", dims({"i"}), dims({}), {"1"})});
  forward.push_back({"q", dims({"j"}), fb});  // p not yet declared
  CHECK_THROWS_AS(wf_context(forward, Theory::demorgan), UnknownCell);
}

TEST_CASE("theory is enforced on contortion components") {
  CellCtx ctx = path_ctx();
  DimCtx j = dims({"j"});
  CellPtr t = app("p", dims({"i"}), j, {"~j"});
  CHECK_NOTHROW(check(ctx, t, j, Boundary{}, Theory::demorgan));
  CHECK_THROWS_AS(check(ctx, t, j, Boundary{}, Theory::cartesian),
                  TheoryViolation);
}

TEST_CASE("inconsistent restrictions agree on everything") {
  CellCtx ctx = path_ctx();
  DimCtx j = dims({"j"});
  CellPtr t = app("p", dims({"i"}), j, {"j"});
  auto [bctx, bsub] = constrain_context(j, dzero(), 1);
  CHECK(bctx.bot);
  CellPtr r = normalize_cell(ctx, apply_subst_cell(ctx, t, bsub));
  CHECK(r->kind == Cell::Kind::bot);
  CHECK(alpha_eq(r, bot_cell()));
}
