#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cubesolve/dim.hpp"

namespace cubesolve {

// Points of 2^w are w-bit vectors under the product order (x <= y iff
// x & y == x).  Coordinate c is stored at bit position w-1-c, so the
// printed binary string reads coordinate 0 leftmost.  In dedekind mode
// coordinate i is the i-th goal dimension; in demorgan mode the width is
// doubled and coordinates 2i and 2i+1 are the literals x_i and ~x_i,
// interleaved.  Values are bit-vectors of the cell's dimensions under
// the same convention.

using ValueSet = uint64_t;  // bit v set means value v is in the set

int coord_bit(uint32_t x, int width, int coord);
uint32_t with_coord(uint32_t x, int width, int coord, int bit);
std::string point_bits(uint32_t x, int width);

// A monotone map 2^m -> 2^n, the dual of a contortion.
struct PosetMap {
  int m = 0;
  int n = 0;
  std::vector<uint8_t> val;  // indexed by point

  bool monotone() const;
};
bool operator==(const PosetMap& a, const PosetMap& b);

// Potential poset map: a nonempty value set per point such that along
// every cover x < y each value of y dominates some value of x and each
// value of x is dominated by some value of y.  A compact but lossy
// representation of a set of poset maps.
struct Ppm {
  int m = 0;
  int n = 0;
  std::vector<ValueSet> sets;
};
bool operator==(const Ppm& a, const Ppm& b);

// Both directed-completeness conditions on all cover pairs.
bool ppm_valid(const Ppm& p);

// Dual poset map of a contortion's component terms over the given goal
// dimensions.  Mode dedekind evaluates over 2^m; mode demorgan over the
// doubled 2^(2m) with independent literal coordinates.
PosetMap formula_to_pm(const std::vector<DimPtr>& terms,
                       const std::vector<std::string>& vars, Theory mode);

// Inverse direction: each output coordinate becomes the join, over the
// minimal points where its bit is set, of the meet of the point's active
// literals.
std::vector<DimPtr> pm_to_formula(const PosetMap& pm,
                                  const std::vector<std::string>& vars,
                                  Theory mode);

// The unconstrained PPM: every value at every point.
Ppm total_ppm(int m, int n);

// All poset maps selected by the PPM, streamed in the deterministic
// order given by assigning points numerically and trying values in
// ascending order with forward checking against the fixed predecessors
// (the constant-0 map comes first when admissible).  The callback
// returns false to stop; `counter`, when given, counts yielded maps.
void unfold_ppm(const Ppm& p, const std::function<bool(const PosetMap&)>& cb,
                uint64_t* counter = nullptr);

// Replaces the value set at x (which must shrink it) and propagates both
// cover conditions to a fixpoint.  Returns the new PPM, or nothing when
// some point empties.
std::optional<Ppm> update_ppm(const Ppm& p, uint32_t x, ValueSet s);

// Sub-PPM over the points where the given coordinates are fixed.
// Remaining coordinates keep their relative order.
Ppm restrict_ppm(const Ppm& p,
                 const std::vector<std::pair<int, int>>& fixed_coords);

// Embeds a point of the restricted width back into the full width.
uint32_t embed_point(uint32_t x, int full_width,
                     const std::vector<std::pair<int, int>>& fixed_coords);

// Points of the doubled domain where each literal pair is consistent
// (coordinate 2i+1 is the flip of coordinate 2i).
std::vector<uint32_t> consistent_points(int m);

// One `bits -> {bits, ...}` line per point.
std::string ppm_dump(const Ppm& p);

}  // namespace cubesolve
