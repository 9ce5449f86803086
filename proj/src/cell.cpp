#include "cubesolve/cell.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cubesolve {

CellPtr make_var_app(std::string head, Contortion psi) {
  auto c = std::make_shared<Cell>();
  c->kind = Cell::Kind::var_app;
  c->head = std::move(head);
  c->psi = std::move(psi);
  return c;
}

CellPtr make_fill(Endpoint from, DimPtr to, std::string bound, FaceList sides,
                  CellPtr base) {
  auto c = std::make_shared<Cell>();
  c->kind = Cell::Kind::fill;
  c->from = from;
  c->to = std::move(to);
  c->bound = std::move(bound);
  c->sides = std::move(sides);
  c->base = std::move(base);
  return c;
}

CellPtr bot_cell() {
  static CellPtr b = [] {
    auto c = std::make_shared<Cell>();
    c->kind = Cell::Kind::bot;
    return CellPtr(c);
  }();
  return b;
}

const CellDecl* find_decl(const CellCtx& ctx, const std::string& name) {
  for (const auto& d : ctx)
    if (d.name == name) return &d;
  return nullptr;
}

Theory default_theory(size_t goal_dim) {
  return goal_dim >= 3 ? Theory::dedekind : Theory::demorgan;
}

// ---- small term helpers ----

static bool dim_eq_raw(const DimPtr& a, const DimPtr& b) {
  auto va = free_vars(a);
  auto vb = free_vars(b);
  std::vector<std::string> u;
  std::set_union(va.begin(), va.end(), vb.begin(), vb.end(),
                 std::back_inserter(u));
  return normalize_dim_over(a, Theory::demorgan, u) ==
         normalize_dim_over(b, Theory::demorgan, u);
}

static bool term_is_endpoint(const DimPtr& t, Endpoint e) {
  auto nf = normalize_dim_over(t, Theory::demorgan, free_vars(t));
  return e ? nf.is_one() : nf.is_zero();
}

static DimPtr canon_term(const DimPtr& t) {
  return nf_to_term(normalize_dim_over(t, Theory::demorgan, free_vars(t)));
}

static void collect_names(const DimPtr& t, std::set<std::string>& out) {
  for (auto& v : free_vars(t)) out.insert(v);
}

static void collect_names(const CellPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Cell::Kind::bot:
      return;
    case Cell::Kind::var_app:
      if (!t->psi.to_bot)
        for (const auto& tm : t->psi.terms) collect_names(tm, out);
      return;
    case Cell::Kind::fill:
      collect_names(t->to, out);
      out.insert(t->bound);
      for (const auto& f : t->sides) {
        collect_names(f.c, out);
        collect_names(f.body, out);
      }
      collect_names(t->base, out);
      return;
  }
}

std::string fresh_bound(const DimCtx& ctx, const CellPtr& around) {
  std::set<std::string> used(ctx.vars.begin(), ctx.vars.end());
  if (around) collect_names(around, used);
  for (int i = 0;; ++i) {
    std::string name = "_k" + std::to_string(i);
    if (!used.count(name)) return name;
  }
}

std::pair<DimCtx, Contortion> constrain_context(const DimCtx& ctx,
                                                const DimPtr& c, Endpoint e) {
  if (ctx.bot) return {ctx, Contortion::into_bot(ctx)};
  if (is_const(c)) {
    Endpoint v = c->kind == DimTerm::Kind::one ? 1 : 0;
    if (v == e) return {ctx, Contortion::identity(ctx)};
    return {DimCtx::inconsistent(), Contortion::into_bot(ctx)};
  }
  if (c->kind != DimTerm::Kind::var)
    throw IllScopedFace("face constraint must be atomic, got " +
                        dim_to_string(c));
  if (!ctx.contains(c->name))
    throw IllScopedFace("face constraint on unbound dimension " + c->name);
  DimCtx out = ctx.without(c->name);
  Contortion sub;
  sub.target = out;
  sub.source = ctx;
  for (const auto& v : ctx.vars)
    sub.terms.push_back(v == c->name ? dconst(e) : dvar(v));
  return {out, sub};
}

// ---- substitution ----

// Substitutes a single ambient dimension inside a cell.  When descending
// into a fill side the replacement is restricted at the side's
// constraint, since the side body lives in the constrained context.
static CellPtr subst_cell_var(const CellCtx& ctx, const CellPtr& t,
                              const std::string& v, const DimPtr& r) {
  switch (t->kind) {
    case Cell::Kind::bot:
      return t;
    case Cell::Kind::var_app: {
      if (t->psi.to_bot) return t;
      Contortion psi = t->psi;
      for (auto& tm : psi.terms) tm = subst_var(tm, v, r);
      return make_var_app(t->head, std::move(psi));
    }
    case Cell::Kind::fill: {
      if (t->bound == v) return t;  // shadowed
      CellPtr cur = t;
      auto rv = free_vars(r);
      if (std::find(rv.begin(), rv.end(), cur->bound) != rv.end()) {
        std::set<std::string> used(rv.begin(), rv.end());
        collect_names(cur, used);
        used.insert(v);
        std::string b2;
        for (int i = 0;; ++i) {
          b2 = "_k" + std::to_string(i);
          if (!used.count(b2)) break;
        }
        FaceList sides;
        for (const auto& f : cur->sides)
          sides.push_back(
              {f.c, f.e, subst_cell_var(ctx, f.body, cur->bound, dvar(b2))});
        cur = make_fill(cur->from, cur->to, b2, std::move(sides), cur->base);
      }
      DimPtr to2 = subst_var(cur->to, v, r);
      if (!is_atomic(to2))
        throw IllFormedFill("substitution sends a fill target to " +
                            dim_to_string(to2));
      FaceList sides2;
      for (const auto& f : cur->sides) {
        DimPtr c2 = subst_var(f.c, v, r);
        if (!is_atomic(c2))
          throw IllFormedFill("substitution sends a fill constraint to " +
                              dim_to_string(c2));
        CellPtr body2;
        if (f.c->kind == DimTerm::Kind::var && f.c->name == v) {
          body2 = f.body;  // the side body does not mention v
        } else {
          DimPtr rf = r;
          if (c2->kind == DimTerm::Kind::var)
            rf = subst_var(r, c2->name, dconst(f.e));
          body2 = subst_cell_var(ctx, f.body, v, rf);
        }
        sides2.push_back({c2, f.e, body2});
      }
      CellPtr base2 = subst_cell_var(ctx, cur->base, v, r);
      return make_fill(cur->from, to2, cur->bound, std::move(sides2), base2);
    }
  }
  return t;
}

CellPtr apply_subst_cell(const CellCtx& ctx, const CellPtr& t,
                         const Contortion& psi) {
  if (t->kind == Cell::Kind::bot) return t;
  if (psi.to_bot || psi.target.bot) return bot_cell();
  if (t->kind == Cell::Kind::var_app) {
    if (t->psi.to_bot) return bot_cell();
    Contortion composed;
    composed.target = psi.target;
    composed.source = t->psi.source;
    for (const auto& tm : t->psi.terms)
      composed.terms.push_back(subst_dim(tm, psi));
    return make_var_app(t->head, std::move(composed));
  }
  // fill
  DimPtr to2 = subst_dim(t->to, psi);
  if (!is_atomic(to2))
    throw IllFormedFill("substitution sends a fill target to " +
                        dim_to_string(to2));
  std::string b2 = t->bound;
  if (psi.target.contains(b2)) b2 = fresh_bound(psi.target);
  FaceList sides2;
  for (const auto& f : t->sides) {
    DimPtr c2 = subst_dim(f.c, psi);
    if (!is_atomic(c2))
      throw IllFormedFill("substitution sends a fill constraint to " +
                          dim_to_string(c2));
    auto [face_ctx, face_sub] = constrain_context(psi.target, c2, f.e);
    DimCtx src = (f.c->kind == DimTerm::Kind::var)
                     ? psi.source.without(f.c->name)
                     : psi.source;
    src = src.extended(t->bound);
    Contortion body_psi;
    if (face_ctx.bot) {
      body_psi = Contortion::into_bot(src);
    } else {
      body_psi.target = face_ctx.extended(b2);
      body_psi.source = src;
      for (size_t i = 0; i < src.vars.size(); ++i) {
        if (i + 1 == src.vars.size())
          body_psi.terms.push_back(dvar(b2));  // the bound, appended last
        else
          body_psi.terms.push_back(
              subst_dim(psi.term_for(src.vars[i]), face_sub));
      }
    }
    sides2.push_back({c2, f.e, apply_subst_cell(ctx, f.body, body_psi)});
  }
  CellPtr base2 = apply_subst_cell(ctx, t->base, psi);
  return make_fill(t->from, to2, b2, std::move(sides2), base2);
}

// ---- normalization ----

static CellPtr normalize_rec(const CellCtx& ctx, CellPtr t, int& steps) {
  for (;;) {
    if (++steps > 10000)
      throw NormalizeLimit("cell normalization exceeded 10000 steps");
    switch (t->kind) {
      case Cell::Kind::bot:
        return t;
      case Cell::Kind::var_app: {
        if (t->psi.to_bot || t->psi.target.bot) return bot_cell();
        const CellDecl* decl = find_decl(ctx, t->head);
        if (!decl) throw UnknownCell("unknown cell " + t->head);
        const CellFace* firing = nullptr;
        for (const auto& f : decl->boundary) {
          DimPtr img = subst_dim(f.c, t->psi);
          if (term_is_endpoint(img, f.e)) {
            firing = &f;
            break;
          }
        }
        if (firing) {
          Contortion rest;
          rest.target = t->psi.target;
          rest.source = t->psi.source.without(firing->c->name);
          for (const auto& v : rest.source.vars)
            rest.terms.push_back(t->psi.term_for(v));
          t = apply_subst_cell(ctx, firing->body, rest);
          continue;
        }
        Contortion canon = t->psi;
        for (auto& tm : canon.terms) tm = canon_term(tm);
        return make_var_app(t->head, std::move(canon));
      }
      case Cell::Kind::fill: {
        if (is_const(t->to) &&
            (t->to->kind == DimTerm::Kind::one ? 1 : 0) == t->from) {
          t = t->base;
          continue;
        }
        const CellFace* truthy = nullptr;
        for (const auto& f : t->sides) {
          if (is_const(f.c) &&
              (f.c->kind == DimTerm::Kind::one ? 1 : 0) == f.e) {
            truthy = &f;
            break;
          }
        }
        if (truthy) {
          t = subst_cell_var(ctx, truthy->body, t->bound, t->to);
          continue;
        }
        FaceList sides2;
        for (const auto& f : t->sides) {
          if (is_const(f.c)) continue;  // trivially false at this point
          sides2.push_back({f.c, f.e, normalize_rec(ctx, f.body, steps)});
        }
        CellPtr base2 = normalize_rec(ctx, t->base, steps);
        return make_fill(t->from, t->to, t->bound, std::move(sides2), base2);
      }
    }
  }
}

CellPtr normalize_cell(const CellCtx& ctx, const CellPtr& t) {
  int steps = 0;
  return normalize_rec(ctx, t, steps);
}

CellPtr face_at(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
                const DimPtr& c, Endpoint e) {
  auto [rest, sub] = constrain_context(dims, c, e);
  (void)rest;
  return normalize_cell(ctx, apply_subst_cell(ctx, t, sub));
}

Boundary cell_boundary(const CellCtx& ctx, const CellPtr& t,
                       const DimCtx& dims) {
  Boundary b;
  CellPtr n = normalize_cell(ctx, t);
  if (n->kind == Cell::Kind::fill) {
    for (const auto& f : n->sides) {
      DimPtr to_f = n->to;
      if (f.c->kind == DimTerm::Kind::var)
        to_f = subst_var(to_f, f.c->name, dconst(f.e));
      CellPtr body = subst_cell_var(ctx, f.body, n->bound, to_f);
      b.faces.push_back({f.c, f.e, normalize_cell(ctx, body)});
    }
    if (n->to->kind == DimTerm::Kind::var)
      b.faces.push_back({n->to, n->from, normalize_cell(ctx, n->base)});
    return b;
  }
  for (const auto& x : dims.vars)
    for (Endpoint e = 0; e <= 1; ++e)
      b.faces.push_back({dvar(x), e, face_at(ctx, n, dims, dvar(x), e)});
  return b;
}

// ---- alpha equivalence ----

static DimPtr rename_dims(const DimPtr& t,
                          const std::map<std::string, std::string>& m) {
  switch (t->kind) {
    case DimTerm::Kind::zero:
    case DimTerm::Kind::one:
      return t;
    case DimTerm::Kind::var: {
      auto it = m.find(t->name);
      return it == m.end() ? t : dvar(it->second);
    }
    case DimTerm::Kind::neg:
      return dneg(rename_dims(t->a, m));
    case DimTerm::Kind::join:
      return djoin(rename_dims(t->a, m), rename_dims(t->b, m));
    case DimTerm::Kind::meet:
      return dmeet(rename_dims(t->a, m), rename_dims(t->b, m));
  }
  return t;
}

static bool alpha_rec(const CellPtr& a, const CellPtr& b,
                      std::map<std::string, std::string>& ren) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Cell::Kind::bot:
      return true;
    case Cell::Kind::var_app: {
      if (a->head != b->head) return false;
      if (a->psi.to_bot != b->psi.to_bot) return false;
      if (a->psi.source.vars != b->psi.source.vars) return false;
      if (a->psi.to_bot) return true;
      for (size_t i = 0; i < a->psi.terms.size(); ++i)
        if (!dim_eq_raw(a->psi.terms[i], rename_dims(b->psi.terms[i], ren)))
          return false;
      return true;
    }
    case Cell::Kind::fill: {
      if (a->from != b->from) return false;
      if (!dim_eq_raw(a->to, rename_dims(b->to, ren))) return false;
      if (a->sides.size() != b->sides.size()) return false;
      auto face_key = [](const DimPtr& c, Endpoint e) {
        return dim_to_string(c) + "=" + std::to_string(e);
      };
      std::vector<size_t> ia(a->sides.size()), ib(b->sides.size());
      for (size_t i = 0; i < ia.size(); ++i) ia[i] = ib[i] = i;
      std::sort(ia.begin(), ia.end(), [&](size_t x, size_t y) {
        return face_key(a->sides[x].c, a->sides[x].e) <
               face_key(a->sides[y].c, a->sides[y].e);
      });
      std::sort(ib.begin(), ib.end(), [&](size_t x, size_t y) {
        return face_key(rename_dims(b->sides[x].c, ren), b->sides[x].e) <
               face_key(rename_dims(b->sides[y].c, ren), b->sides[y].e);
      });
      auto saved = ren.find(b->bound);
      bool had = saved != ren.end();
      std::string old = had ? saved->second : "";
      ren[b->bound] = a->bound;
      bool ok = true;
      for (size_t i = 0; i < ia.size() && ok; ++i) {
        const CellFace& fa = a->sides[ia[i]];
        const CellFace& fb = b->sides[ib[i]];
        ok = fa.e == fb.e &&
             face_key(fa.c, fa.e) == face_key(rename_dims(fb.c, ren), fb.e) &&
             alpha_rec(fa.body, fb.body, ren);
      }
      ok = ok && alpha_rec(a->base, b->base, ren);
      if (had)
        ren[b->bound] = old;
      else
        ren.erase(b->bound);
      return ok;
    }
  }
  return false;
}

bool alpha_eq(const CellPtr& a, const CellPtr& b) {
  std::map<std::string, std::string> ren;
  return alpha_rec(a, b, ren);
}

// ---- checking ----

static void check_rec(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
                      Theory theory);

static void compare_faces(const CellPtr& got,
                          const CellPtr& want, const std::string& where,
                          bool fill_internal) {
  if (alpha_eq(got, want)) return;
  std::string msg = where + ": " + cell_to_string(want) + " vs " +
                    cell_to_string(got);
  if (fill_internal) throw IllFormedFill(msg);
  throw BoundaryMismatch(msg);
}

static void check_rec(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
                      Theory theory) {
  switch (t->kind) {
    case Cell::Kind::bot:
      if (!dims.bot)
        throw IllFormedFill("inconsistent cell in a consistent context");
      return;
    case Cell::Kind::var_app: {
      if (dims.bot) return;
      const CellDecl* decl = find_decl(ctx, t->head);
      if (!decl) throw UnknownCell("unknown cell " + t->head);
      if (t->psi.to_bot)
        throw IllScopedFace("contortion into the inconsistent context under " +
                            std::string("a consistent one"));
      if (t->psi.source.vars != decl->dims.vars)
        throw IllScopedFace("contortion source does not match the dimensions "
                            "of " +
                            t->head);
      for (const auto& tm : t->psi.terms) {
        if (classify(tm) > theory)
          throw TheoryViolation("contortion component " + dim_to_string(tm) +
                                " outside theory " + theory_name(theory));
        for (const auto& v : free_vars(tm))
          if (!dims.contains(v))
            throw IllScopedFace("contortion mentions unbound dimension " + v);
      }
      return;
    }
    case Cell::Kind::fill: {
      if (dims.bot) return;
      if (!is_atomic(t->to))
        throw IllFormedFill("fill target must be atomic, got " +
                            dim_to_string(t->to));
      if (t->to->kind == DimTerm::Kind::var && !dims.contains(t->to->name))
        throw IllScopedFace("fill target on unbound dimension " +
                            t->to->name);
      if (dims.contains(t->bound))
        throw IllFormedFill("fill binds the ambient dimension " + t->bound);
      if (t->from != 0 && t->from != 1)
        throw IllFormedFill("fill source must be an endpoint");
      std::set<std::pair<std::string, int>> seen;
      std::vector<DimCtx> side_ctx;
      for (const auto& f : t->sides) {
        auto [fctx, fsub] = constrain_context(dims, f.c, f.e);
        (void)fsub;
        if (f.c->kind == DimTerm::Kind::var &&
            !seen.insert({f.c->name, f.e}).second)
          throw IllFormedFill("duplicate fill side " + dim_to_string(f.c) +
                              "=" + std::to_string(f.e));
        side_ctx.push_back(fctx.bot ? fctx : fctx.extended(t->bound));
        check_rec(ctx, f.body, side_ctx.back(), theory);
      }
      for (size_t i = 0; i < t->sides.size(); ++i) {
        for (size_t j = i + 1; j < t->sides.size(); ++j) {
          const CellFace& fi = t->sides[i];
          const CellFace& fj = t->sides[j];
          if (fi.c->kind == DimTerm::Kind::var &&
              fj.c->kind == DimTerm::Kind::var && fi.c->name == fj.c->name)
            continue;  // same direction: disjoint faces
          if (side_ctx[i].bot || side_ctx[j].bot) continue;
          CellPtr bi = face_at(ctx, fi.body, side_ctx[i], fj.c, fj.e);
          CellPtr bj = face_at(ctx, fj.body, side_ctx[j], fi.c, fi.e);
          compare_faces(bi, bj,
                        "fill sides " + dim_to_string(fi.c) + "=" +
                            std::to_string(fi.e) + " and " +
                            dim_to_string(fj.c) + "=" + std::to_string(fj.e) +
                            " disagree",
                        true);
        }
      }
      check_rec(ctx, t->base, dims, theory);
      for (size_t i = 0; i < t->sides.size(); ++i) {
        const CellFace& f = t->sides[i];
        if (side_ctx[i].bot) continue;
        CellPtr base_face = face_at(ctx, t->base, dims, f.c, f.e);
        CellPtr side_at_from = normalize_cell(
            ctx, subst_cell_var(ctx, f.body, t->bound, dconst(t->from)));
        compare_faces(base_face, side_at_from,
                      "fill base disagrees with side " + dim_to_string(f.c) +
                          "=" + std::to_string(f.e),
                      true);
      }
      return;
    }
  }
}

void check(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
           const Boundary& goal, Theory theory) {
  check_rec(ctx, t, dims, theory);
  for (const auto& f : goal.faces) {
    auto [fctx, fsub] = constrain_context(dims, f.c, f.e);
    (void)fsub;
    if (fctx.bot) continue;
    CellPtr actual = face_at(ctx, t, dims, f.c, f.e);
    CellPtr want = normalize_cell(ctx, f.body);
    compare_faces(actual, want,
                  "goal face " + dim_to_string(f.c) + "=" +
                      std::to_string(f.e),
                  false);
  }
}

bool check_ok(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
              const Boundary& goal, Theory theory) {
  try {
    check(ctx, t, dims, goal, theory);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// ---- boundary well-formedness ----

void wf_boundary(const CellCtx& ctx, const DimCtx& dims,
                 const Boundary& boundary, Theory theory) {
  if (boundary.aux.size() > 1)
    throw IllScopedFace("a boundary admits at most one auxiliary direction");
  std::set<std::pair<std::string, int>> seen;
  std::vector<DimCtx> face_ctx;
  for (const auto& f : boundary.faces) {
    if (!is_atomic(f.c))
      throw IllScopedFace("face constraint must be atomic, got " +
                          dim_to_string(f.c));
    if (f.c->kind == DimTerm::Kind::var) {
      if (!dims.contains(f.c->name))
        throw IllScopedFace("face on unbound dimension " + f.c->name);
      if (!seen.insert({f.c->name, f.e}).second)
        throw IncompatibleFaces("duplicate face " + f.c->name + "=" +
                                std::to_string(f.e));
    }
    auto [fctx, fsub] = constrain_context(dims, f.c, f.e);
    (void)fsub;
    DimCtx body_ctx = fctx;
    for (const auto& a : boundary.aux)
      if (!body_ctx.bot) body_ctx = body_ctx.extended(a);
    face_ctx.push_back(body_ctx);
    check_rec(ctx, f.body, body_ctx, theory);
  }
  for (size_t i = 0; i < boundary.faces.size(); ++i) {
    for (size_t j = i + 1; j < boundary.faces.size(); ++j) {
      const CellFace& fi = boundary.faces[i];
      const CellFace& fj = boundary.faces[j];
      if (fi.c->kind == DimTerm::Kind::var &&
          fj.c->kind == DimTerm::Kind::var && fi.c->name == fj.c->name)
        continue;
      if (face_ctx[i].bot || face_ctx[j].bot) continue;
      CellPtr bi = face_at(ctx, fi.body, face_ctx[i], fj.c, fj.e);
      CellPtr bj = face_at(ctx, fj.body, face_ctx[j], fi.c, fi.e);
      if (!alpha_eq(bi, bj))
        throw IncompatibleFaces(
            "faces " + dim_to_string(fi.c) + "=" + std::to_string(fi.e) +
            " and " + dim_to_string(fj.c) + "=" + std::to_string(fj.e) +
            " disagree on their overlap: " + cell_to_string(bi) + " vs " +
            cell_to_string(bj));
    }
  }
}

void wf_context(const CellCtx& ctx, Theory theory) {
  CellCtx prefix;
  for (const auto& d : ctx) {
    if (find_decl(prefix, d.name))
      throw IllScopedFace("duplicate cell name " + d.name);
    std::set<std::string> names(d.dims.vars.begin(), d.dims.vars.end());
    if (names.size() != d.dims.vars.size() || d.dims.bot)
      throw IllScopedFace("invalid dimension context for " + d.name);
    for (const auto& f : d.boundary)
      if (f.c->kind != DimTerm::Kind::var)
        throw IllScopedFace("declared boundary of " + d.name +
                            " must constrain a dimension variable");
    wf_boundary(prefix, d.dims, Boundary{d.boundary, {}}, theory);
    prefix.push_back(d);
  }
}

// ---- printing ----

static void print_cell_rec(std::ostringstream& out, const CellPtr& t) {
  switch (t->kind) {
    case Cell::Kind::bot:
      out << "<bot>";
      return;
    case Cell::Kind::var_app:
      out << t->head;
      if (t->psi.to_bot) {
        out << "[bot]";
        return;
      }
      if (!t->psi.terms.empty()) {
        out << "(";
        for (size_t i = 0; i < t->psi.terms.size(); ++i) {
          if (i) out << ", ";
          out << dim_to_string(t->psi.terms[i]);
        }
        out << ")";
      }
      return;
    case Cell::Kind::fill: {
      out << "fill " << t->bound << " : " << t->from << " -> "
          << dim_to_string(t->to) << " { ";
      for (size_t i = 0; i < t->sides.size(); ++i) {
        if (i) out << ", ";
        out << dim_to_string(t->sides[i].c) << "=" << t->sides[i].e << " -> ";
        print_cell_rec(out, t->sides[i].body);
      }
      out << " } (";
      print_cell_rec(out, t->base);
      out << ")";
      return;
    }
  }
}

std::string cell_to_string(const CellPtr& t) {
  std::ostringstream out;
  print_cell_rec(out, t);
  return out.str();
}

std::string boundary_to_string(const Boundary& b) {
  std::ostringstream out;
  out << "{ ";
  for (size_t i = 0; i < b.faces.size(); ++i) {
    if (i) out << ", ";
    out << dim_to_string(b.faces[i].c) << "=" << b.faces[i].e << " -> ";
    print_cell_rec(out, b.faces[i].body);
  }
  out << " }";
  return out.str();
}

}  // namespace cubesolve
