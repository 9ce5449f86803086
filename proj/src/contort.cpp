#include "cubesolve/contort.hpp"

#include <algorithm>
#include <thread>

namespace cubesolve {

namespace {

constexpr uint64_t kSpaceLimit = 1000000;

// Dedekind numbers: free distributive-lattice sizes, the contortion
// counts per cell dimension.
constexpr uint64_t kDedekind[] = {2, 3, 6, 20, 168, 7581, 7828354};

int coords_per_var(Theory t) { return t == Theory::demorgan ? 2 : 1; }

struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;
  uint32_t tick = 0;

  void poll() {
    if (!at) return;
    if ((tick++ & 0xffu) == 0 && std::chrono::steady_clock::now() > *at)
      throw SolverTimeout("search deadline exceeded");
  }
};

struct GoalFace {
  DimPtr c;
  Endpoint e;
  CellPtr body;  // normalized, over fctx
  DimCtx fctx;
};

// Specified faces with consistent restricted contexts, widest contorted
// head first, ties in source order.  Nothing when some face can never be
// the restriction of a contorted context cell.
std::optional<std::vector<GoalFace>> goal_faces(const CellCtx& ctx,
                                                const DimCtx& dims,
                                                const Boundary& goal) {
  std::vector<std::pair<size_t, GoalFace>> tagged;
  for (const auto& f : goal.faces) {
    auto [fctx, rho] = constrain_context(dims, f.c, f.e);
    (void)rho;
    if (fctx.bot) continue;
    CellPtr body = normalize_cell(ctx, f.body);
    if (body->kind != Cell::Kind::var_app) return std::nullopt;
    size_t hd = 0;
    if (const CellDecl* d = find_decl(ctx, body->head)) hd = d->dims.size();
    tagged.push_back({hd, GoalFace{f.c, f.e, body, fctx}});
  }
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<GoalFace> out;
  out.reserve(tagged.size());
  for (auto& t : tagged) out.push_back(std::move(t.second));
  return out;
}

std::vector<std::pair<int, int>> face_fixed(const DimCtx& dims,
                                            const GoalFace& f, Theory theory) {
  std::vector<std::pair<int, int>> fixed;
  if (f.c->kind == DimTerm::Kind::var) {
    int t = dims.index_of(f.c->name);
    if (theory == Theory::demorgan) {
      fixed.emplace_back(2 * t, f.e);
      fixed.emplace_back(2 * t + 1, 1 - f.e);
    } else {
      fixed.emplace_back(t, f.e);
    }
  }
  return fixed;
}

bool map_matches_face(const CellCtx& ctx, const CellDecl& cand,
                      const GoalFace& f, const PosetMap& pm, Theory theory) {
  try {
    Contortion psi = contortion_from_pm(pm, f.fctx, cand.dims, theory);
    CellPtr c = normalize_cell(ctx, make_var_app(cand.name, psi));
    return alpha_eq(c, f.body);
  } catch (const std::exception&) {
    return false;
  }
}

// Union of the matching maps' values at each slice point, computed in
// parallel when asked to; the union is order independent.
std::vector<ValueSet> filter_theta(const CellCtx& ctx, const CellDecl& cand,
                                   const GoalFace& f,
                                   const std::vector<PosetMap>& batch,
                                   size_t npts, Theory theory, int threads,
                                   Deadline& dl) {
  std::vector<ValueSet> theta(npts, 0);
  if (threads > 1 && batch.size() >= 64) {
    size_t per = (batch.size() + threads - 1) / threads;
    std::vector<std::vector<ValueSet>> parts;
    parts.reserve(threads);
    std::vector<std::thread> workers;
    for (int w = 0; w < threads; ++w) {
      size_t lo = w * per;
      size_t hi = std::min(batch.size(), lo + per);
      if (lo >= hi) break;
      parts.emplace_back(npts, 0);
      auto& mine = parts.back();
      workers.emplace_back([&, lo, hi]() {
        for (size_t i = lo; i < hi; ++i)
          if (map_matches_face(ctx, cand, f, batch[i], theory))
            for (size_t x = 0; x < npts; ++x)
              mine[x] |= 1ull << batch[i].val[x];
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& part : parts)
      for (size_t x = 0; x < npts; ++x) theta[x] |= part[x];
  } else {
    for (const auto& pm : batch) {
      dl.poll();
      if (map_matches_face(ctx, cand, f, pm, theory))
        for (size_t x = 0; x < npts; ++x) theta[x] |= 1ull << pm.val[x];
    }
  }
  return theta;
}

void ppm_stream(const CellCtx& ctx, const DimCtx& dims, const Boundary& goal,
                const CellDecl& cand, const ContortOptions& opt,
                const std::vector<GoalFace>& faces,
                const std::function<bool(const Contortion&)>& on_solution,
                SearchStats* stats, Deadline& dl) {
  int m = static_cast<int>(dims.size());
  int n = static_cast<int>(cand.dims.size());
  if (n > 6) throw InstanceTooLarge("cell dimension beyond value-set width");
  int w = m * coords_per_var(opt.theory);
  if (w > 20) throw InstanceTooLarge("goal dimension beyond point width");
  if (opt.theory == Theory::demorgan && m >= 3)
    stats->notes.push_back(
        "De Morgan search doubles " + std::to_string(m) +
        " dimensions; the dedekind theory is usually a better fit");

  Ppm sigma = total_ppm(w, n);
  for (const GoalFace& f : faces) {
    dl.poll();
    auto fixed = face_fixed(dims, f, opt.theory);
    size_t npts = size_t{1} << (w - fixed.size());
    std::vector<ValueSet> theta;
    if (f.body->head == cand.name) {
      // the face is the candidate itself: its contortion pins the slice
      for (const auto& t : f.body->psi.terms) {
        if (classify(t) > opt.theory) return;
        for (const auto& v : free_vars(t))
          if (!f.fctx.contains(v)) return;
      }
      PosetMap pin = formula_to_pm(f.body->psi.terms, f.fctx.vars, opt.theory);
      theta.assign(npts, 0);
      for (size_t x = 0; x < npts; ++x) theta[x] = 1ull << pin.val[x];
    } else {
      Ppm sub = restrict_ppm(sigma, fixed);
      std::vector<PosetMap> batch;
      unfold_ppm(
          sub,
          [&](const PosetMap& pm) {
            dl.poll();
            batch.push_back(pm);
            return true;
          },
          &stats->maps_unfolded);
      theta = filter_theta(ctx, cand, f, batch, npts, opt.theory, opt.threads,
                           dl);
    }
    for (size_t x = 0; x < npts; ++x) {
      uint32_t full = embed_point(static_cast<uint32_t>(x), w, fixed);
      ValueSet s = theta[x] & sigma.sets[full];
      if (s == sigma.sets[full]) continue;
      if (s == 0) return;
      auto next = update_ppm(sigma, full, s);
      if (!next) return;
      sigma = std::move(*next);
    }
    if (stats->record_face_counts) {
      uint64_t count = 0;
      unfold_ppm(sigma, [](const PosetMap&) { return true; }, &count);
      stats->face_ppm_counts.push_back(count);
    }
  }

  bool keep_going = true;
  unfold_ppm(
      sigma,
      [&](const PosetMap& pm) {
        dl.poll();
        Contortion psi = contortion_from_pm(pm, dims, cand.dims, opt.theory);
        CellPtr t = make_var_app(cand.name, psi);
        if (check_ok(ctx, t, dims, goal, opt.theory))
          keep_going = on_solution(psi);
        return keep_going;
      },
      &stats->maps_unfolded);
}

void enum_stream(const CellCtx& ctx, const DimCtx& dims, const Boundary& goal,
                 const CellDecl& cand, const ContortOptions& opt,
                 const std::vector<GoalFace>& faces,
                 const std::function<bool(const Contortion&)>& on_solution,
                 Deadline& dl) {
  auto tuples = enumerate_contortion_terms(dims, cand.dims.size(), opt.theory);
  for (auto& terms : tuples) {
    dl.poll();
    Contortion psi{dims, cand.dims, std::move(terms), false};
    CellPtr t = make_var_app(cand.name, psi);
    bool ok = true;
    for (const GoalFace& f : faces) {
      if (!alpha_eq(face_at(ctx, t, dims, f.c, f.e), f.body)) {
        ok = false;
        break;
      }
    }
    if (ok && check_ok(ctx, t, dims, goal, opt.theory))
      if (!on_solution(psi)) return;
  }
}

uint64_t contortion_space(Theory theory, size_t m, size_t n) {
  uint64_t base = 0;
  switch (theory) {
    case Theory::cartesian:
      base = m + 2;
      break;
    case Theory::disjunctive:
      if (m > 20) throw InstanceTooLarge("too many goal dimensions");
      base = (uint64_t{1} << m) + 1;
      break;
    case Theory::dedekind:
      if (m > 6) throw InstanceTooLarge("no contortion count for this width");
      base = kDedekind[m];
      break;
    case Theory::demorgan:
      if (2 * m > 6) throw InstanceTooLarge("no contortion count for this width");
      base = kDedekind[2 * m];
      break;
  }
  uint64_t total = 1;
  for (size_t i = 0; i < n; ++i) {
    if (total > kSpaceLimit / std::max<uint64_t>(base, 1) + 1)
      return kSpaceLimit + 1;
    total *= base;
  }
  return total;
}

}  // namespace

Contortion contortion_from_pm(const PosetMap& pm, const DimCtx& target,
                              const DimCtx& source, Theory mode) {
  return Contortion{target, source, pm_to_formula(pm, target.vars, mode),
                    false};
}

std::vector<std::vector<DimPtr>> enumerate_contortion_terms(
    const DimCtx& target, size_t n, Theory theory) {
  std::vector<DimPtr> vocab{dzero(), done()};
  if (theory == Theory::cartesian) {
    for (const auto& v : target.vars) vocab.push_back(dvar(v));
  } else if (theory == Theory::disjunctive) {
    if (target.size() > 20) throw InstanceTooLarge("too many goal dimensions");
    for (uint32_t mask = 1; mask < (1u << target.size()); ++mask) {
      DimPtr t;
      for (size_t i = 0; i < target.size(); ++i)
        if (mask >> i & 1)
          t = t ? djoin(t, dvar(target.vars[i])) : dvar(target.vars[i]);
      vocab.push_back(t);
    }
  } else {
    throw std::invalid_argument("finite term vocabulary needs cartesian or disjunctive");
  }

  uint64_t total = 1;
  for (size_t i = 0; i < n; ++i) {
    total *= vocab.size();
    if (total > kSpaceLimit)
      throw InstanceTooLarge("contortion space beyond enumeration limit");
  }
  std::vector<std::vector<DimPtr>> out;
  out.reserve(total);
  std::vector<size_t> odo(n, 0);
  for (uint64_t k = 0; k < total; ++k) {
    std::vector<DimPtr> terms(n);
    for (size_t i = 0; i < n; ++i) terms[i] = vocab[odo[i]];
    out.push_back(std::move(terms));
    for (size_t i = n; i-- > 0;) {
      if (++odo[i] < vocab.size()) break;
      odo[i] = 0;
    }
  }
  return out;
}

void contort_stream(const CellCtx& ctx, const DimCtx& dims,
                    const Boundary& goal, const CellDecl& cand,
                    const ContortOptions& opt,
                    const std::function<bool(const Contortion&)>& on_solution,
                    SearchStats* stats) {
  SearchStats scratch;
  if (!stats) stats = &scratch;
  Deadline dl{opt.deadline, 0};
  dl.poll();
  auto faces = goal_faces(ctx, dims, goal);
  if (!faces) return;
  if (opt.theory == Theory::cartesian || opt.theory == Theory::disjunctive)
    enum_stream(ctx, dims, goal, cand, opt, *faces, on_solution, dl);
  else
    ppm_stream(ctx, dims, goal, cand, opt, *faces, on_solution, stats, dl);
}

std::optional<Contortion> contort(const CellCtx& ctx, const DimCtx& dims,
                                  const Boundary& goal, const CellDecl& cand,
                                  const ContortOptions& opt,
                                  SearchStats* stats) {
  std::optional<Contortion> found;
  contort_stream(
      ctx, dims, goal, cand, opt,
      [&](const Contortion& psi) {
        found = psi;
        return false;
      },
      stats);
  return found;
}

std::optional<Contortion> brute_force_contort(const CellCtx& ctx,
                                              const DimCtx& dims,
                                              const Boundary& goal,
                                              const CellDecl& cand,
                                              const ContortOptions& opt,
                                              SearchStats* stats) {
  SearchStats scratch;
  if (!stats) stats = &scratch;
  Deadline dl{opt.deadline, 0};
  dl.poll();
  size_t m = dims.size();
  size_t n = cand.dims.size();
  if (contortion_space(opt.theory, m, n) > kSpaceLimit)
    throw InstanceTooLarge("contortion space beyond enumeration limit");

  std::optional<Contortion> found;
  if (opt.theory == Theory::cartesian || opt.theory == Theory::disjunctive) {
    for (auto& terms : enumerate_contortion_terms(dims, n, opt.theory)) {
      dl.poll();
      Contortion psi{dims, cand.dims, std::move(terms), false};
      if (check_ok(ctx, make_var_app(cand.name, psi), dims, goal,
                   opt.theory)) {
        found = std::move(psi);
        break;
      }
    }
  } else {
    int w = static_cast<int>(m) * coords_per_var(opt.theory);
    unfold_ppm(
        total_ppm(w, static_cast<int>(n)),
        [&](const PosetMap& pm) {
          dl.poll();
          Contortion psi = contortion_from_pm(pm, dims, cand.dims, opt.theory);
          if (check_ok(ctx, make_var_app(cand.name, psi), dims, goal,
                       opt.theory)) {
            found = std::move(psi);
            return false;
          }
          return true;
        },
        &stats->maps_unfolded);
  }
  return found;
}

}  // namespace cubesolve
