#pragma once

#include "cubesolve/cell.hpp"

namespace cubesolve {

// A fill from 1 has no hcomp/hfill counterpart; such cells verify fine
// internally but cannot be rendered.
struct UnsupportedDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cubical Agda rendering of a verified solution: the cell is checked
// against the goal first and refused if that fails.  fill^{0->1} becomes
// hcomp, fill^{0->r} becomes hfill with an inS base, contortions print
// with ~ ∧ ∨ and i0/i1, and bound directions are renamed to l, m, n, ...
// Output is deterministic, with faces ordered by dimension and endpoint.
std::string print_agda(const CellCtx& ctx, const CellPtr& t,
                       const DimCtx& dims, const Boundary& goal,
                       Theory theory);

std::string print_agda(const CellPtr& t, const BoundaryProblem& problem);

// Light syntactic scan of emitted text: balanced parens and braces, and
// every face group non-empty with arrow-shaped entries.
bool agda_well_formed(const std::string& text);

}  // namespace cubesolve
