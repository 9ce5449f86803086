#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubesolve/dim.hpp"

namespace cubesolve {

struct Cell;
using CellPtr = std::shared_ptr<const Cell>;

// One face of a boundary or of a fill: the cell shown when the atomic
// constraint term equals the endpoint.
struct CellFace {
  DimPtr c;  // atomic: variable or constant
  Endpoint e;
  CellPtr body;
};
using FaceList = std::vector<CellFace>;

// Kan cells: a context variable under a contortion, a filler, or the
// canonical cell of the inconsistent context.
struct Cell {
  enum class Kind { var_app, fill, bot };
  Kind kind;

  // var_app
  std::string head;
  Contortion psi;

  // fill^{from -> to} with a bound direction name; side bodies may use
  // the bound name, the base may not.
  Endpoint from = 0;
  DimPtr to;
  std::string bound;
  FaceList sides;
  CellPtr base;
};

CellPtr make_var_app(std::string head, Contortion psi);
CellPtr make_fill(Endpoint from, DimPtr to, std::string bound, FaceList sides,
                  CellPtr base);
CellPtr bot_cell();

// Context entry: a cell variable with its dimensions and a partial
// boundary (an empty list means the boundary is unspecified).
struct CellDecl {
  std::string name;
  DimCtx dims;
  FaceList boundary;
};

using CellCtx = std::vector<CellDecl>;

const CellDecl* find_decl(const CellCtx& ctx, const std::string& name);

// Partial boundary specification plus an optional auxiliary direction
// (at most one) that face bodies may mention.
struct Boundary {
  FaceList faces;
  std::vector<std::string> aux;
};

struct SolveConfig {
  std::optional<Theory> theory;  // defaulted from the goal dimension
  int max_depth = 4;
  long timeout_ms = 60000;
};

Theory default_theory(size_t goal_dim);

struct BoundaryProblem {
  CellCtx ctx;
  DimCtx dims;
  Boundary goal;
  SolveConfig config;
};

struct IncompatibleFaces : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllScopedFace : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundaryMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllFormedFill : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownCell : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormalizeLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Context restriction at an atomic constraint: the restricted context and
// the substitution into it.  Fixing a constant to its opposite endpoint
// yields the inconsistent context.
std::pair<DimCtx, Contortion> constrain_context(const DimCtx& ctx,
                                                const DimPtr& c, Endpoint e);

// Structural well-formedness plus pairwise compatibility of overlapping
// faces.  Everything agrees over the inconsistent context.
void wf_boundary(const CellCtx& ctx, const DimCtx& dims,
                 const Boundary& boundary, Theory theory);

void wf_context(const CellCtx& ctx, Theory theory);

// Reduction to a stable form: declared faces fire under contortions whose
// component hits an endpoint, degenerate fills collapse to their base,
// trivially true fill sides project out, trivially false ones are
// dropped, and contortion components are rebuilt canonically.
CellPtr normalize_cell(const CellCtx& ctx, const CellPtr& t);

// Substitution of ambient dimensions, composing into contortions and
// pushing under fill binders (renaming the bound direction on capture).
CellPtr apply_subst_cell(const CellCtx& ctx, const CellPtr& t,
                         const Contortion& psi);

// Normalized restriction of t (a cell over dims) at c = e.
CellPtr face_at(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
                const DimPtr& c, Endpoint e);

// All faces of a cell over dims: for contorted variables, the full
// variable-major (x,0),(x,1) enumeration; for fillers, the sides at the
// target term plus, when the target is a variable, the base at its
// source endpoint.
Boundary cell_boundary(const CellCtx& ctx, const CellPtr& t,
                       const DimCtx& dims);

// Structural equality up to renaming of fill-bound directions and
// semantic equality of dimension terms; faces are matched as sets.
bool alpha_eq(const CellPtr& a, const CellPtr& b);

// Full verification of t against a goal boundary: recursive
// well-formedness of every filler (base against the sides' source
// endpoint, pairwise side compatibility) and agreement with every
// specified goal face.  Throws BoundaryMismatch or IllFormedFill.
void check(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
           const Boundary& goal, Theory theory);

bool check_ok(const CellCtx& ctx, const CellPtr& t, const DimCtx& dims,
              const Boundary& goal, Theory theory);

// First name of the form _k<n> distinct from every name in scope.
std::string fresh_bound(const DimCtx& ctx, const CellPtr& around = nullptr);

std::string cell_to_string(const CellPtr& t);
std::string boundary_to_string(const Boundary& b);

}  // namespace cubesolve
