#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "cubesolve/dim.hpp"
#include "doctest.h"

using namespace cubesolve;

// ---- independent oracles ----

// Counts antichains in the powerset of an n-element set, i.e. monotone
// boolean functions of n variables.  Shares no code with the normal-form
// machinery: members are picked in increasing numeric order and the
// comparable elements of each pick are masked out.
static uint64_t count_antichains(int n) {
  int N = 1 << n;
  std::vector<uint64_t> comparable(static_cast<size_t>(N), 0);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      if ((a & b) == a || (a & b) == b)
        comparable[static_cast<size_t>(a)] |= 1ull << b;
  uint64_t count = 0;
  std::function<void(uint64_t)> go = [&](uint64_t allowed) {
    ++count;
    while (allowed) {
      int c = std::countr_zero(allowed);
      allowed &= allowed - 1;
      go(allowed & ~comparable[static_cast<size_t>(c)]);
    }
  };
  go(N == 64 ? ~0ull : (1ull << N) - 1);
  return count;
}

// Evaluates a term treating x and ~x as independent bits.  Equality of
// these doubled truth tables decides equality in the free De Morgan
// algebra, because the free algebra is the free bounded distributive
// lattice on the doubled literal alphabet.
static int eval_doubled(const DimPtr& t, bool pos,
                        const std::map<std::string, int>& pv,
                        const std::map<std::string, int>& nv) {
  switch (t->kind) {
    case DimTerm::Kind::zero: return pos ? 0 : 1;
    case DimTerm::Kind::one: return pos ? 1 : 0;
    case DimTerm::Kind::var: return pos ? pv.at(t->name) : nv.at(t->name);
    case DimTerm::Kind::neg: return eval_doubled(t->a, !pos, pv, nv);
    case DimTerm::Kind::join: {
      int x = eval_doubled(t->a, pos, pv, nv);
      int y = eval_doubled(t->b, pos, pv, nv);
      return pos ? std::max(x, y) : std::min(x, y);
    }
    case DimTerm::Kind::meet: {
      int x = eval_doubled(t->a, pos, pv, nv);
      int y = eval_doubled(t->b, pos, pv, nv);
      return pos ? std::min(x, y) : std::max(x, y);
    }
  }
  return 0;
}

static bool oracle_equal(const DimPtr& a, const DimPtr& b,
                         const std::vector<std::string>& vars) {
  int m = static_cast<int>(vars.size());
  for (int bits = 0; bits < (1 << (2 * m)); ++bits) {
    std::map<std::string, int> pv, nv;
    for (int i = 0; i < m; ++i) {
      pv[vars[static_cast<size_t>(i)]] = (bits >> (2 * i)) & 1;
      nv[vars[static_cast<size_t>(i)]] = (bits >> (2 * i + 1)) & 1;
    }
    if (eval_doubled(a, true, pv, nv) != eval_doubled(b, true, pv, nv))
      return false;
  }
  return true;
}

static DimPtr random_term(std::mt19937& rng, const std::vector<std::string>& vars,
                          int depth) {
  std::uniform_int_distribution<int> leaf(0, 2 + static_cast<int>(vars.size()) - 1);
  std::uniform_int_distribution<int> node(0, 4);
  if (depth == 0 || node(rng) == 0) {
    int l = leaf(rng);
    if (l == 0) return dzero();
    if (l == 1) return done();
    return dvar(vars[static_cast<size_t>(l - 2)]);
  }
  switch (node(rng)) {
    case 1: return dneg(random_term(rng, vars, depth - 1));
    case 2:
      return djoin(random_term(rng, vars, depth - 1),
                   random_term(rng, vars, depth - 1));
    default:
      return dmeet(random_term(rng, vars, depth - 1),
                   random_term(rng, vars, depth - 1));
  }
}

// ---- tests ----

TEST_CASE("dedekind numbers from the antichain oracle") {
  CHECK(count_antichains(0) == 2);
  CHECK(count_antichains(1) == 3);
  CHECK(count_antichains(2) == 6);
  CHECK(count_antichains(3) == 20);
  CHECK(count_antichains(4) == 168);
  CHECK(count_antichains(5) == 7581);
  CHECK(count_antichains(6) == 7828354);
}

TEST_CASE("classify picks the least theory") {
  CHECK(classify(parse_dim("0")) == Theory::cartesian);
  CHECK(classify(parse_dim("j")) == Theory::cartesian);
  CHECK(classify(parse_dim("j \\/ k")) == Theory::disjunctive);
  CHECK(classify(parse_dim("j /\\ k")) == Theory::dedekind);
  CHECK(classify(parse_dim("j /\\ (k \\/ l)")) == Theory::dedekind);
  CHECK(classify(parse_dim("~j")) == Theory::demorgan);
  CHECK(classify(parse_dim("j \\/ ~k")) == Theory::demorgan);
}

TEST_CASE("normalize rejects terms outside the theory") {
  CHECK_THROWS_AS(normalize_dim(parse_dim("j \\/ k"), Theory::cartesian),
                  TheoryViolation);
  CHECK_THROWS_AS(normalize_dim(parse_dim("j /\\ k"), Theory::disjunctive),
                  TheoryViolation);
  CHECK_THROWS_AS(normalize_dim(parse_dim("~j"), Theory::dedekind),
                  TheoryViolation);
  CHECK_NOTHROW(normalize_dim(parse_dim("~j"), Theory::demorgan));
}

TEST_CASE("normal form basics") {
  auto nf = normalize_dim(parse_dim("j \\/ k"), Theory::disjunctive);
  CHECK(nf.vars == std::vector<std::string>{"j", "k"});
  CHECK(nf.clauses == std::vector<std::vector<int>>{{0}, {2}});

  nf = normalize_dim(parse_dim("x /\\ (y \\/ x)"), Theory::dedekind);
  CHECK(nf.clauses == std::vector<std::vector<int>>{{0}});

  nf = normalize_dim(parse_dim("~~x"), Theory::demorgan);
  CHECK(nf.clauses == std::vector<std::vector<int>>{{0}});

  CHECK(normalize_dim(parse_dim("j /\\ ~j"), Theory::demorgan).clauses ==
        std::vector<std::vector<int>>{{0, 1}});
  CHECK(normalize_dim(parse_dim("0"), Theory::cartesian).is_zero());
  CHECK(normalize_dim(parse_dim("1"), Theory::cartesian).is_one());
  CHECK(normalize_dim(parse_dim("j /\\ 0"), Theory::dedekind).is_zero());
  CHECK(normalize_dim(parse_dim("j \\/ 1"), Theory::disjunctive).is_one());
}

TEST_CASE("the algebra is free: excluded middle does not hold") {
  DimCtx ctx{{"j"}, false};
  CHECK_FALSE(dim_equal(parse_dim("j \\/ ~j"), done(), ctx));
  CHECK_FALSE(dim_equal(parse_dim("j /\\ ~j"), dzero(), ctx));
  auto nf = normalize_dim(parse_dim("j \\/ ~j"), Theory::demorgan);
  CHECK(nf.clauses == std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("lattice and de morgan laws") {
  DimCtx ctx{{"r", "s", "t"}, false};
  auto eq = [&](const char* a, const char* b) {
    return dim_equal(parse_dim(a), parse_dim(b), ctx);
  };
  CHECK(eq("r /\\ (s \\/ t)", "(r /\\ s) \\/ (r /\\ t)"));
  CHECK(eq("r \\/ (s /\\ t)", "(r \\/ s) /\\ (r \\/ t)"));
  CHECK(eq("~(r /\\ s)", "~r \\/ ~s"));
  CHECK(eq("~(r \\/ s)", "~r /\\ ~s"));
  CHECK(eq("~~r", "r"));
  CHECK(eq("r \\/ r", "r"));
  CHECK(eq("r /\\ (r \\/ s)", "r"));
  CHECK(eq("r \\/ (r /\\ s)", "r"));
  CHECK(eq("r \\/ s", "s \\/ r"));
  CHECK_FALSE(eq("r \\/ s", "r /\\ s"));
}

TEST_CASE("everything is equal over the inconsistent context") {
  CHECK(dim_equal(dzero(), done(), DimCtx::inconsistent()));
}

TEST_CASE("dim_equal agrees with the doubled truth-table oracle") {
  std::vector<std::string> vars{"x", "y", "z"};
  DimCtx ctx{vars, false};
  std::mt19937 rng(20240811);
  for (int it = 0; it < 500; ++it) {
    DimPtr a = random_term(rng, vars, 4);
    DimPtr b = random_term(rng, vars, 4);
    CAPTURE(dim_to_string(a));
    CAPTURE(dim_to_string(b));
    REQUIRE(dim_equal(a, b, ctx) == oracle_equal(a, b, vars));
  }
}

TEST_CASE("normal forms are canonical") {
  std::vector<std::string> vars{"x", "y"};
  DimCtx ctx{vars, false};
  std::mt19937 rng(7);
  for (int it = 0; it < 300; ++it) {
    DimPtr t = random_term(rng, vars, 4);
    auto nf = normalize_dim_over(t, Theory::demorgan, vars);
    DimPtr back = nf_to_term(nf);
    CHECK(dim_equal(t, back, ctx));
    CHECK(normalize_dim_over(back, Theory::demorgan, vars) == nf);
  }
}

TEST_CASE("eval_dim") {
  std::map<std::string, Endpoint> asg{{"j", 1}, {"k", 0}};
  CHECK(eval_dim(parse_dim("j /\\ ~k"), asg) == 1);
  CHECK(eval_dim(parse_dim("j /\\ k"), asg) == 0);
  CHECK(eval_dim(parse_dim("0 \\/ k"), asg) == 0);
  CHECK_THROWS_AS(eval_dim(parse_dim("l"), asg), UnboundVariable);
}

TEST_CASE("substitution") {
  Contortion psi;
  psi.target = DimCtx{{"i"}, false};
  psi.source = DimCtx{{"j", "k"}, false};
  psi.terms = {dvar("i"), dneg(dvar("i"))};
  DimPtr t = subst_dim(parse_dim("j /\\ k"), psi);
  CHECK(dim_equal(t, parse_dim("i /\\ ~i"), psi.target));
  CHECK_THROWS_AS(subst_dim(parse_dim("l"), psi), UnboundVariable);

  CHECK(dim_equal(subst_var(parse_dim("j \\/ k"), "j", dzero()),
                  parse_dim("k"), DimCtx{{"k"}, false}));

  Contortion bot = Contortion::into_bot(DimCtx{{"j"}, false});
  CHECK(subst_dim(parse_dim("j"), bot)->kind == DimTerm::Kind::zero);

  Contortion id = Contortion::identity(DimCtx{{"a", "b"}, false});
  CHECK(dim_equal(subst_dim(parse_dim("a /\\ b"), id), parse_dim("a /\\ b"),
                  id.target));
}

TEST_CASE("parser and printer") {
  CHECK(dim_to_string(parse_dim("a /\\ b \\/ c")) == "a /\\ b \\/ c");
  CHECK(dim_to_string(parse_dim("a /\\ (b \\/ c)")) == "a /\\ (b \\/ c)");
  CHECK(dim_to_string(parse_dim("~a /\\ b")) == "~a /\\ b");
  CHECK(dim_to_string(parse_dim("~(a \\/ b)")) == "~(a \\/ b)");
  CHECK(dim_to_string(parse_dim("~~a")) == "~~a");
  CHECK(parse_dim("a /\\ b \\/ c")->kind == DimTerm::Kind::join);
  CHECK_THROWS_AS(parse_dim("a /\\"), DimParseError);
  CHECK_THROWS_AS(parse_dim("(a"), DimParseError);
  CHECK_THROWS_AS(parse_dim("a b"), DimParseError);

  std::mt19937 rng(99);
  std::vector<std::string> vars{"i", "j", "k"};
  for (int it = 0; it < 200; ++it) {
    DimPtr t = random_term(rng, vars, 4);
    std::string s = dim_to_string(t);
    CHECK(dim_to_string(parse_dim(s)) == s);
  }
}

TEST_CASE("theory names") {
  CHECK(theory_from_name("dedekind") == Theory::dedekind);
  CHECK(theory_name(Theory::demorgan) == std::string("demorgan"));
  CHECK_THROWS(theory_from_name("boolean"));
  CHECK(Theory::cartesian < Theory::disjunctive);
  CHECK(Theory::disjunctive < Theory::dedekind);
  CHECK(Theory::dedekind < Theory::demorgan);
}
