#pragma once

#include "cubesolve/contort.hpp"

namespace cubesolve {

struct KanOptions {
  Theory theory = Theory::dedekind;
  int threads = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  KanOptions() = default;
  KanOptions(Theory t) : theory(t) {}
};

// Searches for a filler of the goal boundary whose open sides need at
// most `depth - 1` further fillers.  Depth 0 finds nothing; at positive
// depth the direct filler rule is tried before the open-box search.
std::optional<CellPtr> kan_solver(const CellCtx& ctx, const DimCtx& dims,
                                  const Boundary& goal, int depth,
                                  const KanOptions& opt,
                                  SearchStats* stats = nullptr);

enum class SolveStatus { solved, timeout, depth_exhausted, error };

const char* status_name(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::depth_exhausted;
  CellPtr cell;  // verified solution when solved
  Theory theory = Theory::dedekind;
  SearchStats stats;
  std::string message;  // diagnostic for status error
};

// Contortion stage over every context cell in order, then fillers at
// increasing depth.  Every returned cell has passed the checker.
SolveResult solve(const BoundaryProblem& problem, int threads = 1);

}  // namespace cubesolve
