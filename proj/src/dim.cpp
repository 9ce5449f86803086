#include "cubesolve/dim.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace cubesolve {

const char* theory_name(Theory t) {
  switch (t) {
    case Theory::cartesian: return "cartesian";
    case Theory::disjunctive: return "disjunctive";
    case Theory::dedekind: return "dedekind";
    case Theory::demorgan: return "demorgan";
  }
  return "?";
}

Theory theory_from_name(const std::string& name) {
  if (name == "cartesian") return Theory::cartesian;
  if (name == "disjunctive") return Theory::disjunctive;
  if (name == "dedekind") return Theory::dedekind;
  if (name == "demorgan") return Theory::demorgan;
  throw std::invalid_argument("unknown theory: " + name);
}

static DimPtr make(DimTerm::Kind k, std::string name, DimPtr a, DimPtr b) {
  auto t = std::make_shared<DimTerm>();
  t->kind = k;
  t->name = std::move(name);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

DimPtr dzero() {
  static DimPtr z = make(DimTerm::Kind::zero, "", nullptr, nullptr);
  return z;
}

DimPtr done() {
  static DimPtr o = make(DimTerm::Kind::one, "", nullptr, nullptr);
  return o;
}

DimPtr dconst(Endpoint e) { return e ? done() : dzero(); }

DimPtr dvar(std::string name) {
  return make(DimTerm::Kind::var, std::move(name), nullptr, nullptr);
}

DimPtr dneg(DimPtr t) {
  return make(DimTerm::Kind::neg, "", std::move(t), nullptr);
}

DimPtr djoin(DimPtr a, DimPtr b) {
  return make(DimTerm::Kind::join, "", std::move(a), std::move(b));
}

DimPtr dmeet(DimPtr a, DimPtr b) {
  return make(DimTerm::Kind::meet, "", std::move(a), std::move(b));
}

bool is_const(const DimPtr& t) {
  return t->kind == DimTerm::Kind::zero || t->kind == DimTerm::Kind::one;
}

bool is_atomic(const DimPtr& t) {
  return is_const(t) || t->kind == DimTerm::Kind::var;
}

DimCtx DimCtx::inconsistent() {
  DimCtx c;
  c.bot = true;
  return c;
}

bool DimCtx::contains(const std::string& v) const {
  return index_of(v) >= 0;
}

int DimCtx::index_of(const std::string& v) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return static_cast<int>(i);
  return -1;
}

DimCtx DimCtx::without(const std::string& v) const {
  DimCtx c;
  c.bot = bot;
  for (const auto& x : vars)
    if (x != v) c.vars.push_back(x);
  return c;
}

DimCtx DimCtx::extended(const std::string& v) const {
  DimCtx c = *this;
  c.vars.push_back(v);
  return c;
}

bool operator==(const DimCtx& a, const DimCtx& b) {
  if (a.bot || b.bot) return a.bot == b.bot;
  return a.vars == b.vars;
}

bool operator==(const MonotoneNF& a, const MonotoneNF& b) {
  return a.vars == b.vars && a.clauses == b.clauses;
}

Contortion Contortion::identity(const DimCtx& ctx) {
  Contortion psi;
  psi.target = ctx;
  psi.source = ctx;
  if (ctx.bot) {
    psi.to_bot = true;
    return psi;
  }
  for (const auto& v : ctx.vars) psi.terms.push_back(dvar(v));
  return psi;
}

Contortion Contortion::into_bot(const DimCtx& source) {
  Contortion psi;
  psi.target = DimCtx::inconsistent();
  psi.source = source;
  psi.to_bot = true;
  return psi;
}

DimPtr Contortion::term_for(const std::string& v) const {
  int i = source.index_of(v);
  if (i < 0) throw UnboundVariable("no binding for dimension " + v);
  if (to_bot) return dzero();
  return terms[static_cast<size_t>(i)];
}

Theory classify(const DimPtr& t) {
  switch (t->kind) {
    case DimTerm::Kind::zero:
    case DimTerm::Kind::one:
    case DimTerm::Kind::var:
      return Theory::cartesian;
    case DimTerm::Kind::neg:
      return Theory::demorgan;
    case DimTerm::Kind::join:
      return std::max({Theory::disjunctive, classify(t->a), classify(t->b)});
    case DimTerm::Kind::meet:
      return std::max({Theory::dedekind, classify(t->a), classify(t->b)});
  }
  return Theory::demorgan;
}

static void collect_vars(const DimPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case DimTerm::Kind::var: out.insert(t->name); break;
    case DimTerm::Kind::neg: collect_vars(t->a, out); break;
    case DimTerm::Kind::join:
    case DimTerm::Kind::meet:
      collect_vars(t->a, out);
      collect_vars(t->b, out);
      break;
    default: break;
  }
}

std::vector<std::string> free_vars(const DimPtr& t) {
  std::set<std::string> s;
  collect_vars(t, s);
  return {s.begin(), s.end()};
}

using Clause = std::vector<int>;

// Union of two sorted literal lists.
static Clause clause_union(const Clause& a, const Clause& b) {
  Clause out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

static bool clause_subset(const Clause& a, const Clause& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Disjunctive normal form with negation pushed to the leaves; `pos`
// tracks polarity so no intermediate negated trees are built.
static std::vector<Clause> dnf(const DimPtr& t, bool pos,
                               const std::map<std::string, int>& index) {
  switch (t->kind) {
    case DimTerm::Kind::zero:
      return pos ? std::vector<Clause>{} : std::vector<Clause>{{}};
    case DimTerm::Kind::one:
      return pos ? std::vector<Clause>{{}} : std::vector<Clause>{};
    case DimTerm::Kind::var: {
      int lit = 2 * index.at(t->name) + (pos ? 0 : 1);
      return {{lit}};
    }
    case DimTerm::Kind::neg:
      return dnf(t->a, !pos, index);
    case DimTerm::Kind::join:
    case DimTerm::Kind::meet: {
      bool join_like = (t->kind == DimTerm::Kind::join) == pos;
      auto xs = dnf(t->a, pos, index);
      auto ys = dnf(t->b, pos, index);
      if (join_like) {
        xs.insert(xs.end(), ys.begin(), ys.end());
        return xs;
      }
      std::vector<Clause> out;
      for (const auto& x : xs)
        for (const auto& y : ys) out.push_back(clause_union(x, y));
      return out;
    }
  }
  return {};
}

// Keep only minimal clauses; sort lexicographically.
static std::vector<Clause> antichain(std::vector<Clause> cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Clause> out;
  for (size_t i = 0; i < cs.size(); ++i) {
    bool minimal = true;
    for (size_t j = 0; j < cs.size() && minimal; ++j)
      if (j != i && clause_subset(cs[j], cs[i])) minimal = false;
    if (minimal) out.push_back(cs[i]);
  }
  return out;
}

MonotoneNF normalize_dim_over(const DimPtr& t, Theory theory,
                              const std::vector<std::string>& vars) {
  Theory least = classify(t);
  if (least > theory)
    throw TheoryViolation(std::string("term ") + dim_to_string(t) +
                          " requires theory " + theory_name(least));
  std::map<std::string, int> index;
  for (size_t i = 0; i < vars.size(); ++i)
    index[vars[i]] = static_cast<int>(i);
  for (const auto& v : free_vars(t))
    if (!index.count(v))
      throw UnboundVariable("dimension " + v + " not in universe");
  MonotoneNF nf;
  nf.vars = vars;
  nf.clauses = antichain(dnf(t, true, index));
  return nf;
}

MonotoneNF normalize_dim(const DimPtr& t, Theory theory) {
  return normalize_dim_over(t, theory, free_vars(t));
}

DimPtr nf_to_term(const MonotoneNF& nf) {
  if (nf.is_zero()) return dzero();
  if (nf.is_one()) return done();
  DimPtr acc;
  for (const auto& clause : nf.clauses) {
    DimPtr c;
    for (int lit : clause) {
      DimPtr l = dvar(nf.vars[static_cast<size_t>(lit / 2)]);
      if (lit & 1) l = dneg(l);
      c = c ? dmeet(c, l) : l;
    }
    if (!c) c = done();  // empty clause: the whole join is 1
    acc = acc ? djoin(acc, c) : c;
  }
  return acc;
}

Endpoint eval_dim(const DimPtr& t, const std::map<std::string, Endpoint>& asg) {
  switch (t->kind) {
    case DimTerm::Kind::zero: return 0;
    case DimTerm::Kind::one: return 1;
    case DimTerm::Kind::var: {
      auto it = asg.find(t->name);
      if (it == asg.end())
        throw UnboundVariable("dimension " + t->name + " unassigned");
      return it->second;
    }
    case DimTerm::Kind::neg: return 1 - eval_dim(t->a, asg);
    case DimTerm::Kind::join:
      return std::max(eval_dim(t->a, asg), eval_dim(t->b, asg));
    case DimTerm::Kind::meet:
      return std::min(eval_dim(t->a, asg), eval_dim(t->b, asg));
  }
  return 0;
}

DimPtr subst_dim(const DimPtr& t, const Contortion& psi) {
  if (psi.to_bot) return dzero();  // canonical representative over bot
  switch (t->kind) {
    case DimTerm::Kind::zero:
    case DimTerm::Kind::one:
      return t;
    case DimTerm::Kind::var:
      return psi.term_for(t->name);
    case DimTerm::Kind::neg:
      return dneg(subst_dim(t->a, psi));
    case DimTerm::Kind::join:
      return djoin(subst_dim(t->a, psi), subst_dim(t->b, psi));
    case DimTerm::Kind::meet:
      return dmeet(subst_dim(t->a, psi), subst_dim(t->b, psi));
  }
  return t;
}

DimPtr subst_var(const DimPtr& t, const std::string& v, const DimPtr& r) {
  switch (t->kind) {
    case DimTerm::Kind::zero:
    case DimTerm::Kind::one:
      return t;
    case DimTerm::Kind::var:
      return t->name == v ? r : t;
    case DimTerm::Kind::neg:
      return dneg(subst_var(t->a, v, r));
    case DimTerm::Kind::join:
      return djoin(subst_var(t->a, v, r), subst_var(t->b, v, r));
    case DimTerm::Kind::meet:
      return dmeet(subst_var(t->a, v, r), subst_var(t->b, v, r));
  }
  return t;
}

bool dim_equal(const DimPtr& a, const DimPtr& b, const DimCtx& ctx) {
  if (ctx.bot) return true;
  auto va = free_vars(a);
  auto vb = free_vars(b);
  std::vector<std::string> universe;
  std::set_union(va.begin(), va.end(), vb.begin(), vb.end(),
                 std::back_inserter(universe));
  for (const auto& v : universe)
    if (!ctx.contains(v))
      throw UnboundVariable("dimension " + v + " not in context");
  return normalize_dim_over(a, Theory::demorgan, universe) ==
         normalize_dim_over(b, Theory::demorgan, universe);
}

bool contortion_equal(const Contortion& a, const Contortion& b) {
  if (a.to_bot != b.to_bot) return false;
  if (a.source.vars != b.source.vars) return false;
  if (a.to_bot) return true;
  for (size_t i = 0; i < a.terms.size(); ++i)
    if (!dim_equal(a.terms[i], b.terms[i], a.target)) return false;
  return true;
}

// ---- parsing ----

namespace {

struct DimParser {
  const std::string& s;
  size_t pos = 0;

  explicit DimParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& expected) {
    throw DimParseError("dimension term: expected " + expected +
                        " at offset " + std::to_string(pos) + " in '" + s +
                        "'");
  }

  DimPtr parse_join() {
    DimPtr t = parse_meet();
    while (eat("\\/")) t = djoin(t, parse_meet());
    return t;
  }

  DimPtr parse_meet() {
    DimPtr t = parse_neg();
    while (eat("/\\")) t = dmeet(t, parse_neg());
    return t;
  }

  DimPtr parse_neg() {
    if (eat("~")) return dneg(parse_neg());
    return parse_atom();
  }

  DimPtr parse_atom() {
    skip_ws();
    if (pos >= s.size()) fail("a term");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      DimPtr t = parse_join();
      if (!eat(")")) fail("')'");
      return t;
    }
    if (c == '0') {
      ++pos;
      return dzero();
    }
    if (c == '1') {
      ++pos;
      return done();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) ||
              s[pos] == '_' || s[pos] == '\''))
        ++pos;
      return dvar(s.substr(start, pos - start));
    }
    fail("a term");
  }
};

}  // namespace

DimPtr parse_dim(const std::string& text) {
  DimParser p(text);
  DimPtr t = p.parse_join();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("end of input");
  return t;
}

// Precedence: \/ lowest, then /\, then ~.
static void print_dim(std::ostringstream& out, const DimPtr& t, int parent) {
  switch (t->kind) {
    case DimTerm::Kind::zero: out << "0"; return;
    case DimTerm::Kind::one: out << "1"; return;
    case DimTerm::Kind::var: out << t->name; return;
    case DimTerm::Kind::neg:
      out << "~";
      print_dim(out, t->a, 3);
      return;
    case DimTerm::Kind::join: {
      bool paren = parent > 1;
      if (paren) out << "(";
      print_dim(out, t->a, 1);
      out << " \\/ ";
      print_dim(out, t->b, 1);
      if (paren) out << ")";
      return;
    }
    case DimTerm::Kind::meet: {
      bool paren = parent > 2;
      if (paren) out << "(";
      print_dim(out, t->a, 2);
      out << " /\\ ";
      print_dim(out, t->b, 2);
      if (paren) out << ")";
      return;
    }
  }
}

std::string dim_to_string(const DimPtr& t) {
  std::ostringstream out;
  print_dim(out, t, 0);
  return out.str();
}

std::string contortion_to_string(const Contortion& psi) {
  std::ostringstream out;
  out << "[";
  if (psi.to_bot) {
    out << "bot";
  } else {
    for (size_t i = 0; i < psi.source.vars.size(); ++i) {
      if (i) out << ", ";
      out << psi.source.vars[i] << " -> " << dim_to_string(psi.terms[i]);
    }
  }
  out << "]";
  return out.str();
}

}  // namespace cubesolve
