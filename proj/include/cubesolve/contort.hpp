#pragma once

#include <chrono>
#include <functional>
#include <optional>

#include "cubesolve/cell.hpp"
#include "cubesolve/poset.hpp"

namespace cubesolve {

struct SolverTimeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchStats {
  uint64_t maps_unfolded = 0;
  uint64_t csp_branches = 0;
  int depth_reached = 0;
  // when requested, the number of maps the working PPM admits after each
  // goal-face restriction (instrumentation; not counted above)
  bool record_face_counts = false;
  std::vector<uint64_t> face_ppm_counts;
  std::vector<std::string> notes;
};

struct ContortOptions {
  Theory theory = Theory::dedekind;
  int threads = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  ContortOptions() = default;
  ContortOptions(Theory t) : theory(t) {}
};

// Contortion built from a poset map in the given mode.
Contortion contortion_from_pm(const PosetMap& pm, const DimCtx& target,
                              const DimCtx& source, Theory mode);

// Every contortion term tuple of the finite cartesian or disjunctive
// vocabularies, in deterministic order (constants first).
std::vector<std::vector<DimPtr>> enumerate_contortion_terms(
    const DimCtx& target, size_t n, Theory theory);

// Searches for contortions of the context cell `cand` matching every
// specified face of the goal, streaming each verified solution to the
// callback (return false to stop).  Dedekind and De Morgan theories run
// the PPM restriction algorithm; cartesian and disjunctive enumerate
// their term vocabularies directly.
void contort_stream(const CellCtx& ctx, const DimCtx& dims,
                    const Boundary& goal, const CellDecl& cand,
                    const ContortOptions& opt,
                    const std::function<bool(const Contortion&)>& on_solution,
                    SearchStats* stats = nullptr);

// First solution, or nothing when the search space is exhausted.
std::optional<Contortion> contort(const CellCtx& ctx, const DimCtx& dims,
                                  const Boundary& goal, const CellDecl& cand,
                                  const ContortOptions& opt,
                                  SearchStats* stats = nullptr);

// Reference oracle: enumerates the whole contortion space and verifies
// each candidate independently.  Refuses spaces beyond 10^6 candidates.
std::optional<Contortion> brute_force_contort(const CellCtx& ctx,
                                              const DimCtx& dims,
                                              const Boundary& goal,
                                              const CellDecl& cand,
                                              const ContortOptions& opt,
                                              SearchStats* stats = nullptr);

}  // namespace cubesolve
