#include "cubesolve/poset.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace cubesolve {

int coord_bit(uint32_t x, int width, int coord) {
  return (x >> (width - 1 - coord)) & 1u;
}

uint32_t with_coord(uint32_t x, int width, int coord, int bit) {
  uint32_t mask = 1u << (width - 1 - coord);
  return bit ? (x | mask) : (x & ~mask);
}

std::string point_bits(uint32_t x, int width) {
  std::string s(static_cast<size_t>(width), '0');
  for (int c = 0; c < width; ++c)
    if (coord_bit(x, width, c)) s[static_cast<size_t>(c)] = '1';
  return s;
}

bool PosetMap::monotone() const {
  uint32_t N = 1u << m;
  for (uint32_t x = 0; x < N; ++x)
    for (int b = 0; b < m; ++b) {
      if (!(x >> b & 1u)) continue;
      uint32_t y = x & ~(1u << b);  // a cover below x
      if ((val[y] & val[x]) != val[y]) return false;
    }
  return true;
}

bool operator==(const PosetMap& a, const PosetMap& b) {
  return a.m == b.m && a.n == b.n && a.val == b.val;
}

bool operator==(const Ppm& a, const Ppm& b) {
  return a.m == b.m && a.n == b.n && a.sets == b.sets;
}

// Down-set and up-set of each value as a ValueSet, for the propagation
// filters.
static ValueSet down_mask(int n, uint8_t v) {
  (void)n;
  ValueSet out = 0;
  uint8_t sub = v;
  for (;;) {
    out |= 1ull << sub;
    if (sub == 0) break;
    sub = static_cast<uint8_t>((sub - 1) & v);
  }
  return out;
}

static ValueSet up_mask(int n, uint8_t v) {
  uint8_t full = static_cast<uint8_t>((1u << n) - 1);
  uint8_t comp = static_cast<uint8_t>(full & ~v);
  ValueSet out = 0;
  uint8_t add = 0;
  for (;;) {
    out |= 1ull << (v | add);
    if (add == comp) break;
    add = static_cast<uint8_t>((add - comp) & comp);
  }
  return out;
}

bool ppm_valid(const Ppm& p) {
  uint32_t N = 1u << p.m;
  for (uint32_t x = 0; x < N; ++x)
    if (p.sets[x] == 0) return false;
  for (uint32_t y = 0; y < N; ++y)
    for (int b = 0; b < p.m; ++b) {
      if (!(y >> b & 1u)) continue;
      uint32_t x = y & ~(1u << b);
      ValueSet down = 0, up = 0;
      for (uint8_t v = 0; v < (1u << p.n); ++v) {
        if (p.sets[y] >> v & 1ull) down |= down_mask(p.n, v);
        if (p.sets[x] >> v & 1ull) up |= up_mask(p.n, v);
      }
      if ((p.sets[x] & ~down) != 0) return false;  // some v has no u above
      if ((p.sets[y] & ~up) != 0) return false;    // some u has no v below
    }
  return true;
}

// Evaluates a term at a point, reading variables (and, in demorgan mode,
// their negated literals) from the point's coordinates.
static int eval_at_point(const DimPtr& t, bool pos, uint32_t x, int width,
                         const std::vector<std::string>& vars, bool doubled) {
  switch (t->kind) {
    case DimTerm::Kind::zero: return pos ? 0 : 1;
    case DimTerm::Kind::one: return pos ? 1 : 0;
    case DimTerm::Kind::var: {
      int i = -1;
      for (size_t k = 0; k < vars.size(); ++k)
        if (vars[k] == t->name) i = static_cast<int>(k);
      if (i < 0) throw UnboundVariable("dimension " + t->name);
      if (doubled) return coord_bit(x, width, 2 * i + (pos ? 0 : 1));
      int bit = coord_bit(x, width, i);
      return pos ? bit : 1 - bit;
    }
    case DimTerm::Kind::neg:
      return eval_at_point(t->a, !pos, x, width, vars, doubled);
    case DimTerm::Kind::join: {
      int a = eval_at_point(t->a, pos, x, width, vars, doubled);
      int b = eval_at_point(t->b, pos, x, width, vars, doubled);
      return pos ? std::max(a, b) : std::min(a, b);
    }
    case DimTerm::Kind::meet: {
      int a = eval_at_point(t->a, pos, x, width, vars, doubled);
      int b = eval_at_point(t->b, pos, x, width, vars, doubled);
      return pos ? std::min(a, b) : std::max(a, b);
    }
  }
  return 0;
}

PosetMap formula_to_pm(const std::vector<DimPtr>& terms,
                       const std::vector<std::string>& vars, Theory mode) {
  if (mode != Theory::dedekind && mode != Theory::demorgan)
    throw std::invalid_argument("poset maps represent dedekind or demorgan "
                                "contortions");
  bool doubled = mode == Theory::demorgan;
  for (const auto& t : terms)
    if (classify(t) > mode)
      throw TheoryViolation("term " + dim_to_string(t) + " outside " +
                            theory_name(mode));
  int m = static_cast<int>(vars.size()) * (doubled ? 2 : 1);
  int n = static_cast<int>(terms.size());
  PosetMap pm;
  pm.m = m;
  pm.n = n;
  pm.val.assign(1ull << m, 0);
  for (uint32_t x = 0; x < (1u << m); ++x) {
    uint8_t v = 0;
    for (int t = 0; t < n; ++t) {
      int bit = eval_at_point(terms[static_cast<size_t>(t)], true, x, m, vars,
                              doubled);
      if (bit) v = static_cast<uint8_t>(v | (1u << (n - 1 - t)));
    }
    pm.val[x] = v;
  }
  return pm;
}

std::vector<DimPtr> pm_to_formula(const PosetMap& pm,
                                  const std::vector<std::string>& vars,
                                  Theory mode) {
  bool doubled = mode == Theory::demorgan;
  int expected = static_cast<int>(vars.size()) * (doubled ? 2 : 1);
  if (pm.m != expected)
    throw std::invalid_argument("poset map width does not fit the context");
  uint32_t N = 1u << pm.m;
  std::vector<DimPtr> out;
  for (int t = 0; t < pm.n; ++t) {
    // minimal points where this output coordinate is set
    std::vector<uint32_t> minimal;
    for (uint32_t x = 0; x < N; ++x) {
      if (!(pm.val[x] >> (pm.n - 1 - t) & 1u)) continue;
      bool is_min = true;
      for (int b = 0; b < pm.m && is_min; ++b)
        if ((x >> b & 1u) &&
            (pm.val[x & ~(1u << b)] >> (pm.n - 1 - t) & 1u))
          is_min = false;
      if (is_min) minimal.push_back(x);
    }
    DimPtr term;
    for (uint32_t x : minimal) {
      DimPtr clause;
      for (int c = 0; c < pm.m; ++c) {
        if (!coord_bit(x, pm.m, c)) continue;
        DimPtr lit;
        if (doubled) {
          lit = dvar(vars[static_cast<size_t>(c / 2)]);
          if (c % 2) lit = dneg(lit);
        } else {
          lit = dvar(vars[static_cast<size_t>(c)]);
        }
        clause = clause ? dmeet(clause, lit) : lit;
      }
      if (!clause) clause = done();
      term = term ? djoin(term, clause) : clause;
    }
    out.push_back(term ? term : dzero());
  }
  return out;
}

Ppm total_ppm(int m, int n) {
  Ppm p;
  p.m = m;
  p.n = n;
  ValueSet all = (n == 6) ? ~0ull : ((1ull << (1 << n)) - 1);
  p.sets.assign(1ull << m, all);
  return p;
}

void unfold_ppm(const Ppm& p, const std::function<bool(const PosetMap&)>& cb,
                uint64_t* counter) {
  uint32_t N = 1u << p.m;
  PosetMap out;
  out.m = p.m;
  out.n = p.n;
  out.val.assign(N, 0);
  std::function<bool(uint32_t)> go = [&](uint32_t x) -> bool {
    if (x == N) {
      if (counter) ++*counter;
      return cb(out);
    }
    uint8_t lower = 0;
    for (int b = 0; b < p.m; ++b)
      if (x >> b & 1u) lower |= out.val[x & ~(1u << b)];
    ValueSet cands = p.sets[x];
    while (cands) {
      int v = std::countr_zero(cands);
      cands &= cands - 1;
      if ((static_cast<uint8_t>(v) & lower) == lower) {
        out.val[x] = static_cast<uint8_t>(v);
        if (!go(x + 1)) return false;
      }
    }
    return true;
  };
  go(0);
}

std::optional<Ppm> update_ppm(const Ppm& p, uint32_t x, ValueSet s) {
  if ((s & ~p.sets[x]) != 0)
    throw std::invalid_argument("update may only shrink a value set");
  if (s == 0) return std::nullopt;
  Ppm q = p;
  if (q.sets[x] == s) return q;
  q.sets[x] = s;
  std::vector<uint32_t> work{x};
  while (!work.empty()) {
    uint32_t y = work.back();
    work.pop_back();
    ValueSet down = 0, up = 0;
    for (int v = 0; v < (1 << q.n); ++v) {
      if (q.sets[y] >> v & 1ull) {
        down |= down_mask(q.n, static_cast<uint8_t>(v));
        up |= up_mask(q.n, static_cast<uint8_t>(v));
      }
    }
    for (int b = 0; b < q.m; ++b) {
      uint32_t z = y ^ (1u << b);
      // z below y must keep a value under some value of y; z above y
      // must keep a value over some value of y
      ValueSet keep = (z < y) ? down : up;
      ValueSet next = q.sets[z] & keep;
      if (next == 0) return std::nullopt;
      if (next != q.sets[z]) {
        q.sets[z] = next;
        work.push_back(z);
      }
    }
  }
  return q;
}

Ppm restrict_ppm(const Ppm& p,
                 const std::vector<std::pair<int, int>>& fixed_coords) {
  int m2 = p.m - static_cast<int>(fixed_coords.size());
  Ppm q;
  q.m = m2;
  q.n = p.n;
  q.sets.assign(1ull << m2, 0);
  for (uint32_t x = 0; x < (1u << m2); ++x)
    q.sets[x] = p.sets[embed_point(x, p.m, fixed_coords)];
  return q;
}

uint32_t embed_point(uint32_t x, int full_width,
                     const std::vector<std::pair<int, int>>& fixed_coords) {
  uint32_t out = 0;
  int sub_width = full_width - static_cast<int>(fixed_coords.size());
  int next = 0;
  for (int c = 0; c < full_width; ++c) {
    int bit = -1;
    for (const auto& [fc, fb] : fixed_coords)
      if (fc == c) bit = fb;
    if (bit < 0) {
      bit = coord_bit(x, sub_width, next);
      ++next;
    }
    out = with_coord(out, full_width, c, bit);
  }
  return out;
}

std::vector<uint32_t> consistent_points(int m) {
  std::vector<uint32_t> out;
  int w = 2 * m;
  for (uint32_t x = 0; x < (1u << w); ++x) {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      if (coord_bit(x, w, 2 * i) == coord_bit(x, w, 2 * i + 1)) ok = false;
    if (ok) out.push_back(x);
  }
  return out;
}

std::string ppm_dump(const Ppm& p) {
  std::ostringstream out;
  for (uint32_t x = 0; x < (1u << p.m); ++x) {
    out << point_bits(x, p.m) << " -> {";
    bool first = true;
    for (int v = 0; v < (1 << p.n); ++v) {
      if (!(p.sets[x] >> v & 1ull)) continue;
      if (!first) out << ", ";
      first = false;
      out << point_bits(static_cast<uint32_t>(v), p.n);
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace cubesolve
