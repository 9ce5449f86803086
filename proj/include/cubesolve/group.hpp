#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cubesolve/cell.hpp"

namespace cubesolve {

// A relation in triple form: a * b = c in the presented group.
struct Relation {
  std::string a, b, c;
};

bool operator==(const Relation& x, const Relation& y);
inline bool operator!=(const Relation& x, const Relation& y) {
  return !(x == y);
}

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Relation> relations;

  bool has_generator(const std::string& g) const;
  bool has_relation(const Relation& r) const;
};

// A letter is a generator with an exponent; a word multiplies its letters
// left to right.  No normalization is ever applied: aa' and the empty
// word are distinct words even when the presentation relates them.
struct Letter {
  std::string sym;
  int exp;  // +1 or -1
};
using Word = std::vector<Letter>;

bool operator==(const Letter& x, const Letter& y);
inline bool operator!=(const Letter& x, const Letter& y) { return !(x == y); }
std::string word_to_string(const Word& w);

// Input to convenientize: relator words, each declared equal to 1.
struct RawPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
};

struct RelationNotInPresentation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidDerivation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PresentationSyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Formal inverse partner of a symbol: a trailing prime is toggled.
std::string inverse_symbol(const std::string& sym);

// Generator set closed under formal inverses and every relation a triple
// over it.
bool is_convenient(const Presentation& p);

// Triple-form presentation of the same group.  Relator words shaped
// a b c^-1 become the triple (a,b,c) directly; any other relator gets a
// chain of prefix generators z running from a shared idempotent identity
// generator back to itself, one triple per letter.  The output generator
// set is closed under formal inverses.
Presentation convenientize(const RawPresentation& raw);

// Declaration names: primes become an _inv suffix, squares are keyed by
// their triple.
std::string generator_cell_name(const std::string& sym);
std::string relation_cell_name(const Relation& r);

// One point cell, a loop over (i) per generator with both endpoints at
// the point, and a square over (j,k) per relation (a,b,c) with faces
// k=0 -> a(j), k=1 -> c(j), j=0 -> point, j=1 -> b(k).
CellCtx encode_context(const Presentation& p);

// The point, and the loop of a word over (i), one fill per letter.
CellPtr star_cell();
CellPtr encode_word(const Word& w);

// Appending a letter to a loop t: the square over (i,l) extends t along
// l by the loop of a (read left to right at e = 1, inverted at e = 0);
// the returned loop is the square at l = e.
std::pair<CellPtr, CellPtr> append_cell(const CellPtr& t,
                                        const std::string& a, Endpoint e);

// Cancellation square over (i,k) between a loop extended by a letter and
// its inverse, and the loop itself: at e = 1 the faces are
// k=0 -> (t |>1 a) |>0 a and k=1 -> t, mirrored at e = 0.
CellPtr cancel_cell(const CellPtr& t, const std::string& a, Endpoint e);

// Square over (j,k) whose j=0 and k=0 faces both traverse t (in k and in
// j) and whose j=1 and k=1 faces rest at t's endpoint 1.  Theories with
// joins take the connection t[var -> j \/ k]; below that the square is
// assembled from two auxiliary fills of t alone.
CellPtr pseudo_or(const CellCtx& ctx, const CellPtr& t, const std::string& var,
                  const std::string& j, const std::string& k,
                  Theory theory = Theory::cartesian);

// Rewriting a loop along a relation: a square over (i,k) from
// (t |>1 a) |>1 b at k=0 to t |>1 c at k=1.
CellPtr rewrite_cell(const CellCtx& ctx, const Presentation& p,
                     const CellPtr& t, const Relation& rel,
                     Theory theory = Theory::cartesian);

class Derivation;

// The square witnessing a derived equality: faces k=0 -> <v>, k=1 -> <w>,
// with both i-faces at the point.
CellPtr word_eq_cell(const CellCtx& ctx, const Presentation& p, const Word& v,
                     const Word& w, const Derivation& d,
                     Theory theory = Theory::cartesian);

// A proof tree for equality of words.  Conclusions are fixed by the
// constructors; trans rejects a mismatched middle word at build time.
class Derivation {
 public:
  enum class Clause { rewrite, cancel_right, snoc, refl, sym, trans };

  // prefix a b == prefix c, for a relation (a,b,c)
  static Derivation rewrite(Word prefix, Relation rel);
  // e = 1: prefix a a^-1 == prefix; e = 0: prefix a^-1 a == prefix
  static Derivation cancel_right(Word prefix, std::string a, Endpoint e);
  // v x == w x from v == w, where x is a at exponent +1 (e=1) or -1 (e=0)
  static Derivation snoc(Derivation sub, std::string a, Endpoint e);
  static Derivation refl(Word w);
  static Derivation sym(Derivation sub);
  static Derivation trans(Derivation first, Derivation second);

  Clause clause() const;
  const Word& lhs() const;
  const Word& rhs() const;

  struct Node;

 private:
  explicit Derivation(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend CellPtr word_eq_cell(const CellCtx&, const Presentation&, const Word&,
                              const Word&, const Derivation&, Theory);
};

// Text form of a presentation: a `generators:` section listing symbols
// separated by commas, then a `relations:` section listing triples
// `a b c` (meaning ab = c) separated by commas, semicolons, or line
// breaks.  `--` starts a comment.  An undeclared symbol `e` appearing in
// a relation is taken as the identity: it is declared automatically
// along with its inverse partner and the triple (e,e,e).
Presentation parse_presentation(const std::string& text);

}  // namespace cubesolve
