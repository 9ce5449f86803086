#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubesolve {

// Interval endpoint: 0 or 1.
using Endpoint = int;

// Contortion theories, totally ordered by the operations they admit:
// cartesian (variables and constants), disjunctive (adds \/),
// dedekind (adds /\), demorgan (adds ~).
enum class Theory { cartesian, disjunctive, dedekind, demorgan };

const char* theory_name(Theory t);
Theory theory_from_name(const std::string& name);

struct DimTerm;
using DimPtr = std::shared_ptr<const DimTerm>;

// Term of the free De Morgan algebra over named dimension variables.
// Subtheories are the restrictions of this grammar.
struct DimTerm {
  enum class Kind { zero, one, var, neg, join, meet };
  Kind kind;
  std::string name;  // var
  DimPtr a, b;       // neg: a; join, meet: a and b
};

DimPtr dzero();
DimPtr done();
DimPtr dconst(Endpoint e);
DimPtr dvar(std::string name);
DimPtr dneg(DimPtr t);
DimPtr djoin(DimPtr a, DimPtr b);
DimPtr dmeet(DimPtr a, DimPtr b);

bool is_const(const DimPtr& t);
bool is_atomic(const DimPtr& t);  // variable or constant

// Dimension context: an ordered list of distinct variables, or the
// inconsistent context (bot) over which all terms are equal.
struct DimCtx {
  std::vector<std::string> vars;
  bool bot = false;

  static DimCtx inconsistent();
  bool contains(const std::string& v) const;
  int index_of(const std::string& v) const;  // -1 when absent
  DimCtx without(const std::string& v) const;
  DimCtx extended(const std::string& v) const;
  size_t size() const { return vars.size(); }
};

bool operator==(const DimCtx& a, const DimCtx& b);
inline bool operator!=(const DimCtx& a, const DimCtx& b) { return !(a == b); }

struct TheoryViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical disjunctive normal form: the minimal antichain of clauses,
// each clause a sorted list of literal ids over `vars`.  Literal 2*i is
// vars[i], literal 2*i+1 its negation (negations only arise in demorgan).
// No clauses encodes 0; the single empty clause encodes 1.  A clause may
// contain both literals of a variable: the algebra is free, so x /\ ~x
// does not collapse to 0 (and x \/ ~x is not 1).
struct MonotoneNF {
  std::vector<std::string> vars;
  std::vector<std::vector<int>> clauses;

  bool is_zero() const { return clauses.empty(); }
  bool is_one() const { return clauses.size() == 1 && clauses[0].empty(); }
};

bool operator==(const MonotoneNF& a, const MonotoneNF& b);
inline bool operator!=(const MonotoneNF& a, const MonotoneNF& b) {
  return !(a == b);
}

// Substitution of dimension terms over `target` for the variables of
// `source`.  A contortion with to_bot set lands in the inconsistent
// context; its term list is empty.
struct Contortion {
  DimCtx target;
  DimCtx source;
  std::vector<DimPtr> terms;  // aligned with source.vars
  bool to_bot = false;

  static Contortion identity(const DimCtx& ctx);
  static Contortion into_bot(const DimCtx& source);
  DimPtr term_for(const std::string& v) const;
};

// Least theory whose grammar contains t.
Theory classify(const DimPtr& t);

// Canonical form over the term's own (sorted) support.  Rejects terms
// outside the theory's grammar.
MonotoneNF normalize_dim(const DimPtr& t, Theory theory);

// Same, over an explicitly supplied variable universe (must be sorted and
// must cover the term's free variables).
MonotoneNF normalize_dim_over(const DimPtr& t, Theory theory,
                              const std::vector<std::string>& vars);

// Canonical term rebuilt from a normal form.
DimPtr nf_to_term(const MonotoneNF& nf);

// Sorted distinct free variables.
std::vector<std::string> free_vars(const DimPtr& t);

Endpoint eval_dim(const DimPtr& t, const std::map<std::string, Endpoint>& asg);

// Total substitution: every free variable of t must be in psi's source.
DimPtr subst_dim(const DimPtr& t, const Contortion& psi);

// Single-variable substitution, leaving other variables untouched.
DimPtr subst_var(const DimPtr& t, const std::string& v, const DimPtr& r);

// Equality in the free algebra of the ambient context's theory.  All
// terms are equal over the inconsistent context.  Decided via De Morgan
// normal forms, which is sound for every subtheory.
bool dim_equal(const DimPtr& a, const DimPtr& b, const DimCtx& ctx);

bool contortion_equal(const Contortion& a, const Contortion& b);

// Grammar: 0 | 1 | ident | ~t | t /\ t | t \/ t | (t), with ~ binding
// tightest and /\ tighter than \/.
DimPtr parse_dim(const std::string& text);

std::string dim_to_string(const DimPtr& t);
std::string contortion_to_string(const Contortion& psi);

}  // namespace cubesolve
