#include "cubesolve/group.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace cubesolve {

namespace {

DimCtx dims_of(std::initializer_list<std::string> names) {
  DimCtx c;
  for (const auto& n : names) c.vars.push_back(n);
  return c;
}

// a(arg) for a loop declared over (i); targets are filled in by whatever
// context the application lands in, so they stay empty here
CellPtr loop_app(const std::string& sym, DimPtr arg) {
  Contortion psi;
  psi.source = dims_of({"i"});
  psi.terms.push_back(std::move(arg));
  return make_var_app(generator_cell_name(sym), std::move(psi));
}

// t extended along `second` by the loop of a: fill^{1-e -> second}_bound
// with the loop on the i=1 wall
CellPtr append_square_named(const CellPtr& t, const std::string& a, Endpoint e,
                            const std::string& second,
                            const std::string& bound) {
  FaceList sides;
  sides.push_back({dvar("i"), 0, star_cell()});
  sides.push_back({dvar("i"), 1, loop_app(a, dvar(bound))});
  return make_fill(1 - e, dvar(second), bound, std::move(sides), t);
}

// the square read at second = e: the loop of the extended word
CellPtr append_loop(const CellPtr& t, const std::string& a, Endpoint e) {
  FaceList sides;
  sides.push_back({dvar("i"), 0, star_cell()});
  sides.push_back({dvar("i"), 1, loop_app(a, dvar("j"))});
  return make_fill(1 - e, dconst(e), "j", std::move(sides), t);
}

std::string pick_fresh(const std::set<std::string>& avoid,
                       std::string candidate) {
  while (avoid.count(candidate)) candidate += candidate.back();
  return candidate;
}

// copy of a loop over (i) with every binder named `avoid` renamed away,
// so the cell can sit inside a side whose ambient context includes it
CellPtr clear_of(const CellCtx& ctx, const CellPtr& t,
                 const std::string& avoid) {
  Contortion psi;
  psi.target = dims_of({"i", avoid});
  psi.source = dims_of({"i"});
  psi.terms = {dvar("i")};
  return apply_subst_cell(ctx, t, psi);
}

}  // namespace

bool operator==(const Relation& x, const Relation& y) {
  return x.a == y.a && x.b == y.b && x.c == y.c;
}

bool operator==(const Letter& x, const Letter& y) {
  return x.sym == y.sym && x.exp == y.exp;
}

bool Presentation::has_generator(const std::string& g) const {
  return std::find(generators.begin(), generators.end(), g) !=
         generators.end();
}

bool Presentation::has_relation(const Relation& r) const {
  return std::find(relations.begin(), relations.end(), r) != relations.end();
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += l.sym;
    if (l.exp < 0) out += "^-1";
  }
  return out;
}

std::string inverse_symbol(const std::string& sym) {
  if (!sym.empty() && sym.back() == '\'') return sym.substr(0, sym.size() - 1);
  return sym + '\'';
}

bool is_convenient(const Presentation& p) {
  std::set<std::string> gens(p.generators.begin(), p.generators.end());
  for (const auto& g : p.generators)
    if (!gens.count(inverse_symbol(g))) return false;
  for (const auto& r : p.relations)
    if (!gens.count(r.a) || !gens.count(r.b) || !gens.count(r.c)) return false;
  return true;
}

Presentation convenientize(const RawPresentation& raw) {
  Presentation out;
  std::set<std::string> seen;
  for (const auto& g : raw.generators)
    if (seen.insert(g).second) out.generators.push_back(g);
  for (const auto& r : raw.relators)
    for (const auto& l : r)
      if (!seen.count(l.sym))
        throw std::invalid_argument("relator uses undeclared generator " +
                                    l.sym);

  auto add_gen = [&](std::string base) {
    base = pick_fresh(seen, std::move(base));
    seen.insert(base);
    out.generators.push_back(base);
    return base;
  };
  std::string ident;
  auto identity = [&]() {
    if (ident.empty()) {
      ident = add_gen("e");
      out.relations.push_back({ident, ident, ident});
    }
    return ident;
  };

  for (size_t ri = 0; ri < raw.relators.size(); ++ri) {
    const Word& r = raw.relators[ri];
    if (r.empty()) continue;
    if (r.size() == 3 && r[0].exp > 0 && r[1].exp > 0 && r[2].exp < 0) {
      out.relations.push_back({r[0].sym, r[1].sym, r[2].sym});
      continue;
    }
    // prefix chain: one generator per proper nonempty prefix, anchored at
    // the identity on both ends
    std::vector<std::string> pfx(r.size() + 1, identity());
    for (size_t j = 1; j < r.size(); ++j)
      pfx[j] = add_gen("z" + std::to_string(ri) + "_" + std::to_string(j));
    for (size_t j = 0; j < r.size(); ++j) {
      if (r[j].exp > 0)
        out.relations.push_back({pfx[j], r[j].sym, pfx[j + 1]});
      else
        out.relations.push_back({pfx[j + 1], r[j].sym, pfx[j]});
    }
  }

  for (size_t gi = 0; gi < out.generators.size(); ++gi) {
    std::string inv = inverse_symbol(out.generators[gi]);
    if (seen.insert(inv).second) out.generators.push_back(inv);
  }
  return out;
}

std::string generator_cell_name(const std::string& sym) {
  std::string out;
  for (char ch : sym) {
    if (ch == '\'')
      out += "_inv";
    else
      out += ch;
  }
  return out;
}

std::string relation_cell_name(const Relation& r) {
  return "s_" + generator_cell_name(r.a) + "_" + generator_cell_name(r.b) +
         "_" + generator_cell_name(r.c);
}

CellCtx encode_context(const Presentation& p) {
  CellCtx ctx;
  std::set<std::string> used;
  auto declare = [&](const std::string& name) {
    if (!used.insert(name).second)
      throw std::invalid_argument("encoded cell name collides: " + name);
    return name;
  };
  ctx.push_back({declare("star"), DimCtx{}, {}});
  for (const auto& g : p.generators) {
    FaceList b;
    b.push_back({dvar("i"), 0, star_cell()});
    b.push_back({dvar("i"), 1, star_cell()});
    ctx.push_back({declare(generator_cell_name(g)), dims_of({"i"}),
                   std::move(b)});
  }
  for (const auto& r : p.relations) {
    for (const auto& g : {r.a, r.b, r.c})
      if (!p.has_generator(g))
        throw std::invalid_argument("relation uses undeclared generator " + g);
    FaceList b;
    b.push_back({dvar("k"), 0, loop_app(r.a, dvar("j"))});
    b.push_back({dvar("k"), 1, loop_app(r.c, dvar("j"))});
    b.push_back({dvar("j"), 0, star_cell()});
    b.push_back({dvar("j"), 1, loop_app(r.b, dvar("k"))});
    ctx.push_back({declare(relation_cell_name(r)), dims_of({"j", "k"}),
                   std::move(b)});
  }
  return ctx;
}

CellPtr star_cell() { return make_var_app("star", Contortion{}); }

CellPtr encode_word(const Word& w) {
  CellPtr t = star_cell();
  for (const auto& l : w) t = append_loop(t, l.sym, l.exp > 0 ? 1 : 0);
  return t;
}

std::pair<CellPtr, CellPtr> append_cell(const CellPtr& t, const std::string& a,
                                        Endpoint e) {
  return {append_square_named(t, a, e, "l", "j"), append_loop(t, a, e)};
}

CellPtr cancel_cell(const CellPtr& t, const std::string& a, Endpoint e) {
  CellPtr ta = append_loop(t, a, e);
  FaceList sides;
  sides.push_back({dvar("i"), 0, star_cell()});
  sides.push_back({dvar("i"), 1, loop_app(a, dvar("l"))});
  sides.push_back({dvar("k"), 0, append_square_named(ta, a, 1 - e, "l", "j")});
  sides.push_back({dvar("k"), 1, append_square_named(t, a, e, "l", "j")});
  return make_fill(e, dconst(1 - e), "l", std::move(sides), ta);
}

CellPtr pseudo_or(const CellCtx& ctx, const CellPtr& t, const std::string& var,
                  const std::string& j, const std::string& k, Theory theory) {
  auto at = [&](DimPtr term, DimCtx target) {
    Contortion psi;
    psi.target = std::move(target);
    psi.source = dims_of({var});
    psi.terms.push_back(std::move(term));
    return apply_subst_cell(ctx, t, psi);
  };
  if (theory >= Theory::disjunctive)
    return at(djoin(dvar(j), dvar(k)), dims_of({j, k}));

  std::set<std::string> taken = {var, j, k};
  std::string l = pick_fresh(taken, "l");
  taken.insert(l);
  std::string m = pick_fresh(taken, "m");
  // one traversal wall per direction: from the far end of t back along
  // the other direction, collapsing to t's start at l = 0
  auto traverse = [&](const std::string& toward) {
    FaceList sides;
    sides.push_back({dvar(l), 0, at(dconst(0), dims_of({toward, m}))});
    sides.push_back({dvar(l), 1, at(dvar(m), dims_of({toward, m}))});
    return make_fill(1, dvar(toward), m, std::move(sides),
                     at(dvar(l), dims_of({toward, l})));
  };
  FaceList sides;
  sides.push_back({dvar(j), 0, traverse(k)});
  sides.push_back({dvar(k), 0, traverse(j)});
  sides.push_back({dvar(j), 1, at(dvar(l), dims_of({k, l}))});
  sides.push_back({dvar(k), 1, at(dvar(l), dims_of({j, l}))});
  return make_fill(0, done(), l, std::move(sides),
                   at(dconst(0), dims_of({j, k})));
}

CellPtr rewrite_cell(const CellCtx& ctx, const Presentation& p,
                     const CellPtr& t, const Relation& rel, Theory theory) {
  if (!p.has_relation(rel))
    throw RelationNotInPresentation("relation (" + rel.a + ", " + rel.b +
                                    ", " + rel.c +
                                    ") is not in the presentation");
  Contortion sq;
  sq.source = dims_of({"j", "k"});
  sq.terms = {dvar("j"), dvar("k")};

  // pieces living under the j binder may not bind j themselves
  CellPtr tc = clear_of(ctx, t, "j");
  FaceList inner_sides;
  inner_sides.push_back({dvar("i"), 0, star_cell()});
  inner_sides.push_back(
      {dvar("i"), 1, make_var_app(relation_cell_name(rel), std::move(sq))});
  inner_sides.push_back(
      {dvar("k"), 0, append_square_named(tc, rel.a, 1, "j", "m")});
  inner_sides.push_back(
      {dvar("k"), 1, append_square_named(tc, rel.c, 1, "j", "m")});
  CellPtr inner = make_fill(0, done(), "j", std::move(inner_sides), t);

  CellPtr ta = clear_of(ctx, append_loop(t, rel.a, 1), "j");
  FaceList outer_sides;
  outer_sides.push_back({dvar("i"), 0, star_cell()});
  outer_sides.push_back({dvar("i"), 1, pseudo_or(ctx, loop_app(rel.b, dvar("i")),
                                                 "i", "j", "k", theory)});
  outer_sides.push_back(
      {dvar("k"), 0, append_square_named(ta, rel.b, 1, "j", "m")});
  outer_sides.push_back(
      {dvar("k"), 1, clear_of(ctx, append_loop(t, rel.c, 1), "j")});
  return make_fill(0, done(), "j", std::move(outer_sides), inner);
}

struct Derivation::Node {
  Clause clause;
  Word lhs, rhs;
  Word prefix;
  Relation rel;
  std::string letter;
  Endpoint e = 1;
  std::shared_ptr<const Node> sub1, sub2;
};

Derivation::Clause Derivation::clause() const { return node_->clause; }
const Word& Derivation::lhs() const { return node_->lhs; }
const Word& Derivation::rhs() const { return node_->rhs; }

static Endpoint checked_endpoint(Endpoint e) {
  if (e != 0 && e != 1)
    throw InvalidDerivation("endpoint must be 0 or 1, got " +
                            std::to_string(e));
  return e;
}

Derivation Derivation::rewrite(Word prefix, Relation rel) {
  auto n = std::make_shared<Node>();
  n->clause = Clause::rewrite;
  n->lhs = prefix;
  n->lhs.push_back({rel.a, 1});
  n->lhs.push_back({rel.b, 1});
  n->rhs = prefix;
  n->rhs.push_back({rel.c, 1});
  n->prefix = std::move(prefix);
  n->rel = std::move(rel);
  return Derivation(std::move(n));
}

Derivation Derivation::cancel_right(Word prefix, std::string a, Endpoint e) {
  auto n = std::make_shared<Node>();
  n->clause = Clause::cancel_right;
  n->e = checked_endpoint(e);
  n->lhs = prefix;
  n->lhs.push_back({a, e == 1 ? 1 : -1});
  n->lhs.push_back({a, e == 1 ? -1 : 1});
  n->rhs = prefix;
  n->prefix = std::move(prefix);
  n->letter = std::move(a);
  return Derivation(std::move(n));
}

Derivation Derivation::snoc(Derivation sub, std::string a, Endpoint e) {
  auto n = std::make_shared<Node>();
  n->clause = Clause::snoc;
  n->e = checked_endpoint(e);
  Letter l{a, e == 1 ? 1 : -1};
  n->lhs = sub.node_->lhs;
  n->lhs.push_back(l);
  n->rhs = sub.node_->rhs;
  n->rhs.push_back(l);
  n->letter = std::move(a);
  n->sub1 = std::move(sub.node_);
  return Derivation(std::move(n));
}

Derivation Derivation::refl(Word w) {
  auto n = std::make_shared<Node>();
  n->clause = Clause::refl;
  n->lhs = w;
  n->rhs = std::move(w);
  return Derivation(std::move(n));
}

Derivation Derivation::sym(Derivation sub) {
  auto n = std::make_shared<Node>();
  n->clause = Clause::sym;
  n->lhs = sub.node_->rhs;
  n->rhs = sub.node_->lhs;
  n->sub1 = std::move(sub.node_);
  return Derivation(std::move(n));
}

Derivation Derivation::trans(Derivation first, Derivation second) {
  if (first.node_->rhs != second.node_->lhs)
    throw InvalidDerivation("cannot chain " +
                            word_to_string(first.node_->rhs) + " with " +
                            word_to_string(second.node_->lhs));
  auto n = std::make_shared<Node>();
  n->clause = Clause::trans;
  n->lhs = first.node_->lhs;
  n->rhs = second.node_->rhs;
  n->sub1 = std::move(first.node_);
  n->sub2 = std::move(second.node_);
  return Derivation(std::move(n));
}

namespace {

CellPtr subst_k_to(const CellCtx& ctx, const CellPtr& t,
                   const std::string& name) {
  Contortion psi;
  psi.target = dims_of({"i", name});
  psi.source = dims_of({"i", "k"});
  psi.terms = {dvar("i"), dvar(name)};
  return apply_subst_cell(ctx, t, psi);
}

CellPtr derivation_cell(const CellCtx& ctx, const Presentation& p,
                        const std::shared_ptr<const Derivation::Node>& n,
                        Theory theory, int depth);

}  // namespace

CellPtr word_eq_cell(const CellCtx& ctx, const Presentation& p, const Word& v,
                     const Word& w, const Derivation& d, Theory theory) {
  if (d.lhs() != v || d.rhs() != w)
    throw InvalidDerivation("derivation concludes " + word_to_string(d.lhs()) +
                            " == " + word_to_string(d.rhs()) + ", not " +
                            word_to_string(v) + " == " + word_to_string(w));
  return derivation_cell(ctx, p, d.node_, theory, 0);
}

namespace {

// Word cells bind i and reuse j, l and m internally, so the squares built
// for sym and trans take their bound from the nesting depth instead.  A
// subderivation at depth n+1 can only mention bounds deeper than d<n>,
// which keeps every side body clear of its enclosing binder.
CellPtr derivation_cell(const CellCtx& ctx, const Presentation& p,
                        const std::shared_ptr<const Derivation::Node>& n,
                        Theory theory, int depth) {
  using Clause = Derivation::Clause;
  std::string bn = "d" + std::to_string(depth);
  switch (n->clause) {
    case Clause::rewrite:
      return rewrite_cell(ctx, p, encode_word(n->prefix), n->rel, theory);
    case Clause::cancel_right:
      return cancel_cell(encode_word(n->prefix), n->letter, n->e);
    case Clause::snoc: {
      FaceList sides;
      sides.push_back({dvar("i"), 0, star_cell()});
      sides.push_back({dvar("i"), 1, loop_app(n->letter, dvar("j"))});
      return make_fill(1 - n->e, dconst(n->e), "j", std::move(sides),
                       derivation_cell(ctx, p, n->sub1, theory, depth + 1));
    }
    case Clause::refl:
      return encode_word(n->lhs);
    case Clause::sym: {
      CellPtr flipped = subst_k_to(
          ctx, derivation_cell(ctx, p, n->sub1, theory, depth + 1), bn);
      CellPtr v = encode_word(n->rhs);
      FaceList sides;
      sides.push_back({dvar("i"), 0, star_cell()});
      sides.push_back({dvar("i"), 1, star_cell()});
      sides.push_back({dvar("k"), 0, std::move(flipped)});
      sides.push_back({dvar("k"), 1, v});
      return make_fill(0, done(), bn, std::move(sides), v);
    }
    case Clause::trans: {
      FaceList sides;
      sides.push_back({dvar("i"), 0, star_cell()});
      sides.push_back({dvar("i"), 1, star_cell()});
      sides.push_back({dvar("k"), 0, encode_word(n->lhs)});
      sides.push_back(
          {dvar("k"), 1,
           subst_k_to(ctx,
                      derivation_cell(ctx, p, n->sub2, theory, depth + 1),
                      bn)});
      return make_fill(0, done(), bn, std::move(sides),
                       derivation_cell(ctx, p, n->sub1, theory, depth + 1));
    }
  }
  throw InvalidDerivation("unreachable derivation clause");
}

bool is_symbol(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  size_t i = 1;
  while (i < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
    ++i;
  while (i < s.size() && s[i] == '\'') ++i;
  return i == s.size();
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
  // tokenize into symbols, punctuation, and line breaks
  std::vector<std::string> toks;
  for (size_t i = 0; i < text.size();) {
    char ch = text[i];
    if (ch == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (ch == '\n') {
      toks.push_back("\n");
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == ':' || ch == ',' || ch == ';') {
      toks.push_back(std::string(1, ch));
      ++i;
    } else {
      size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != ':' && text[j] != ',' && text[j] != ';')
        ++j;
      toks.push_back(text.substr(i, j - i));
      i = j;
    }
  }

  Presentation p;
  std::set<std::string> declared;
  size_t pos = 0;
  auto skip_breaks = [&]() {
    while (pos < toks.size() && toks[pos] == "\n") ++pos;
  };
  auto expect = [&](const std::string& t) {
    skip_breaks();
    if (pos >= toks.size() || toks[pos] != t)
      throw PresentationSyntaxError(
          "expected '" + t + "'" +
          (pos < toks.size() ? ", got '" + toks[pos] + "'" : " at end"));
    ++pos;
  };

  skip_breaks();
  if (pos < toks.size() && toks[pos] == "generators") {
    ++pos;
    expect(":");
    for (;;) {
      skip_breaks();
      if (pos >= toks.size()) break;
      if (toks[pos] == ";") {
        ++pos;
        break;
      }
      if (toks[pos] == "relations") break;
      if (!is_symbol(toks[pos]))
        throw PresentationSyntaxError("bad generator name '" + toks[pos] +
                                      "'");
      if (!declared.insert(toks[pos]).second)
        throw PresentationSyntaxError("duplicate generator '" + toks[pos] +
                                      "'");
      p.generators.push_back(toks[pos]);
      ++pos;
      skip_breaks();
      if (pos < toks.size() && toks[pos] == ",") ++pos;
    }
  }

  bool wants_identity = false;
  skip_breaks();
  if (pos < toks.size() && toks[pos] == "relations") {
    ++pos;
    expect(":");
    std::vector<std::string> tri;
    auto flush = [&]() {
      if (tri.empty()) return;
      if (tri.size() != 3)
        throw PresentationSyntaxError("relation needs three symbols, got " +
                                      std::to_string(tri.size()));
      for (const auto& s : tri) {
        if (declared.count(s)) continue;
        if (s == "e")
          wants_identity = true;
        else
          throw PresentationSyntaxError("unknown generator '" + s +
                                        "' in relation");
      }
      p.relations.push_back({tri[0], tri[1], tri[2]});
      tri.clear();
    };
    for (; pos < toks.size(); ++pos) {
      const std::string& t = toks[pos];
      if (t == "\n" || t == ";" || t == ",") {
        flush();
        continue;
      }
      if (!is_symbol(t))
        throw PresentationSyntaxError("bad symbol '" + t + "' in relation");
      tri.push_back(t);
    }
    flush();
  }
  skip_breaks();
  if (pos < toks.size())
    throw PresentationSyntaxError("unexpected '" + toks[pos] + "'");

  if (wants_identity) {
    p.generators.push_back("e");
    if (!declared.count("e'")) p.generators.push_back("e'");
    p.relations.push_back({"e", "e", "e"});
  }
  return p;
}

}  // namespace cubesolve
