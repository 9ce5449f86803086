#include "cubesolve/kan.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cubesolve {

namespace {

void poll_deadline(
    const std::optional<std::chrono::steady_clock::time_point>& at) {
  if (at && std::chrono::steady_clock::now() > *at)
    throw SolverTimeout("search deadline exceeded");
}

void key_dim(const DimPtr& t, const std::map<std::string, std::string>& ren,
             std::string& out) {
  switch (t->kind) {
    case DimTerm::Kind::zero:
      out += '0';
      break;
    case DimTerm::Kind::one:
      out += '1';
      break;
    case DimTerm::Kind::var: {
      auto it = ren.find(t->name);
      out += it != ren.end() ? it->second : t->name;
      break;
    }
    case DimTerm::Kind::neg:
      out += '~';
      key_dim(t->a, ren, out);
      break;
    case DimTerm::Kind::join:
      out += '(';
      key_dim(t->a, ren, out);
      out += 'v';
      key_dim(t->b, ren, out);
      out += ')';
      break;
    case DimTerm::Kind::meet:
      out += '(';
      key_dim(t->a, ren, out);
      out += '^';
      key_dim(t->b, ren, out);
      out += ')';
      break;
  }
}

void key_cell(const CellPtr& t, std::map<std::string, std::string> ren,
              int& ctr, std::string& out) {
  switch (t->kind) {
    case Cell::Kind::bot:
      out += '!';
      return;
    case Cell::Kind::var_app:
      out += t->head;
      out += '(';
      for (const auto& d : t->psi.terms) {
        key_dim(d, ren, out);
        out += ',';
      }
      out += ')';
      return;
    case Cell::Kind::fill: {
      out += 'f';
      out += static_cast<char>('0' + t->from);
      key_dim(t->to, ren, out);
      auto ren2 = ren;
      ren2[t->bound] = "#" + std::to_string(ctr++);
      std::vector<std::pair<std::string, const CellFace*>> order;
      for (const auto& f : t->sides) {
        std::string k;
        key_dim(f.c, ren, k);
        k += '=';
        k += static_cast<char>('0' + f.e);
        order.emplace_back(std::move(k), &f);
      }
      std::sort(order.begin(), order.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      out += '{';
      for (const auto& [k, f] : order) {
        out += k;
        out += ':';
        key_cell(f->body, ren2, ctr, out);
        out += ';';
      }
      out += '}';
      out += '(';
      key_cell(t->base, ren, ctr, out);
      out += ')';
      return;
    }
  }
}

// Fingerprint of a normalized cell, invariant under binder renaming.
std::string alpha_key(const CellPtr& t) {
  std::string out;
  int ctr = 0;
  key_cell(t, {}, ctr, out);
  return out;
}

// sub-problem results keyed by budget, dimensions and normalized faces;
// restrictions of different slot values often collapse to the same goal
struct Memo {
  std::map<std::string, std::optional<CellPtr>> table;
};

std::string goal_key(const DimCtx& dims, const Boundary& goal, int budget) {
  std::string k = std::to_string(budget);
  k += '|';
  for (const auto& v : dims.vars) {
    k += v;
    k += ',';
  }
  std::vector<std::string> fk;
  fk.reserve(goal.faces.size());
  for (const auto& f : goal.faces) {
    std::string s = dim_to_string(f.c);
    s += '=';
    s += static_cast<char>('0' + f.e);
    s += alpha_key(f.body);
    fk.push_back(std::move(s));
  }
  std::sort(fk.begin(), fk.end());
  for (const auto& s : fk) {
    k += '|';
    k += s;
  }
  return k;
}

std::optional<CellPtr> solve_rec(const CellCtx& ctx, const DimCtx& dims,
                                 const Boundary& goal, int budget,
                                 const KanOptions& opt, SearchStats* stats,
                                 Memo& memo,
                                 const std::string* pkey = nullptr);

// Direct filler rule: a goal face that is itself a complete composition
// extends naturally along the constrained direction.
std::optional<CellPtr> kan_fill(const CellCtx& ctx, const DimCtx& dims,
                                const Boundary& goal, Theory theory) {
  for (const auto& f : goal.faces) {
    if (f.c->kind != DimTerm::Kind::var) continue;
    auto [fctx, rho] = constrain_context(dims, f.c, f.e);
    (void)rho;
    if (fctx.bot) continue;
    CellPtr b;
    try {
      b = normalize_cell(ctx, f.body);
    } catch (const std::exception&) {
      continue;
    }
    if (b->kind != Cell::Kind::fill || !is_const(b->to)) continue;
    Endpoint to_e = b->to->kind == DimTerm::Kind::one ? 1 : 0;
    if (to_e != f.e) continue;
    if (dims.contains(b->bound))
      b = apply_subst_cell(ctx, b, Contortion::identity(dims));
    CellPtr cand = make_fill(b->from, dvar(f.c->name), b->bound, b->sides,
                             b->base);
    try {
      if (check_ok(ctx, cand, dims, goal, theory)) return cand;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

struct Slot {
  int x;  // goal dimension index; -1 for the base of the cube
  Endpoint e;

  bool is_back() const { return x < 0; }
};

// Open-box search: pick a set of open slots, fill the rest with
// contortions consistent along every shared ridge, then solve the open
// slots one dimension down and assemble the filler.
std::optional<CellPtr> kan_cube(const CellCtx& ctx, const DimCtx& dims,
                                const Boundary& goal, int depth,
                                const KanOptions& opt, SearchStats* stats,
                                Memo& memo) {
  int m = static_cast<int>(dims.size());
  int nslots = 2 * m + 1;
  int back_idx = 2 * m;
  std::string bound = fresh_bound(dims);

  auto slot_of = [&](int idx) {
    return idx == back_idx ? Slot{-1, 0} : Slot{idx / 2, idx % 2};
  };
  auto slot_dims = [&](const Slot& s) {
    return s.is_back() ? dims
                       : dims.without(dims.vars[s.x]).extended(bound);
  };

  std::map<int, CellPtr> gface;
  uint32_t forced = 0;
  for (const auto& f : goal.faces) {
    if (f.c->kind != DimTerm::Kind::var) continue;
    auto [fctx, rho] = constrain_context(dims, f.c, f.e);
    (void)rho;
    if (fctx.bot) continue;
    int idx = 2 * dims.index_of(f.c->name) + f.e;
    CellPtr b = normalize_cell(ctx, f.body);
    gface[idx] = b;
    if (b->kind == Cell::Kind::fill) forced |= 1u << idx;
  }
  // a slot whose goal face is a filler must stay open, and its
  // sub-problem inherits that filler as a face; with no depth left the
  // sub-problem only sees contortions, which cannot produce one unless
  // some declared cell carries a filler on its own boundary
  if (depth <= 1 && forced != 0) {
    bool decl_fill = false;
    for (const auto& d : ctx)
      for (const auto& f : d.boundary)
        if (f.body && f.body->kind == Cell::Kind::fill) decl_fill = true;
    if (!decl_fill) return std::nullopt;
  }

  // slot domains are independent of the open set; build them once,
  // along with per-value restrictions shared by the pairwise constraint
  // checks and the sub-problem boundaries
  std::vector<std::vector<CellPtr>> all_dom(nslots);
  std::vector<std::vector<std::map<int, std::pair<CellPtr, std::string>>>> rc(
      nslots);
  std::vector<std::string> sd_str(nslots);
  std::map<int, std::string> gkey;
  bool domains_built = false;
  auto build_domains = [&]() {
    if (domains_built) return;
    domains_built = true;
    for (int idx = 0; idx < nslots; ++idx) {
      Slot s = slot_of(idx);
      DimCtx vd = slot_dims(s);
      for (const auto& v : vd.vars) {
        sd_str[idx] += v;
        sd_str[idx] += ',';
      }
      Boundary unary;
      if (!s.is_back()) {
        auto it = gface.find(idx);
        if (it != gface.end())
          unary.faces.push_back({dvar(bound), 1, it->second});
      }
      ContortOptions copt(opt.theory);
      copt.threads = opt.threads;
      copt.deadline = opt.deadline;
      for (const auto& decl : ctx) {
        try {
          contort_stream(
              ctx, vd, unary, decl, copt,
              [&](const Contortion& psi) {
                all_dom[idx].push_back(make_var_app(decl.name, psi));
                return true;
              },
              stats);
        } catch (const InstanceTooLarge&) {
          if (stats) stats->notes.push_back("skipped " + decl.name +
                                            ": contortion space too large");
        }
      }
      rc[idx].resize(all_dom[idx].size());
    }
    for (const auto& [idx, b] : gface) gkey[idx] = alpha_key(b);
  };
  auto ridge = [&](int idx, int val,
                   int toward) -> const std::pair<CellPtr, std::string>& {
    auto& slot_memo = rc[idx][val];
    auto it = slot_memo.find(toward);
    if (it != slot_memo.end()) return it->second;
    Slot a = slot_of(idx);
    Slot b = slot_of(toward);
    DimPtr c = b.is_back() ? dvar(bound) : dvar(dims.vars[b.x]);
    Endpoint e = b.is_back() ? 0 : b.e;
    CellPtr face = face_at(ctx, all_dom[idx][val], slot_dims(a), c, e);
    std::string k = alpha_key(face);
    return slot_memo
        .emplace(toward, std::make_pair(std::move(face), std::move(k)))
        .first->second;
  };

  // open sets ordered by size, then lexicographically on slot indices
  std::vector<uint32_t> opes;
  for (uint32_t mask = 0; mask < (1u << nslots); ++mask) opes.push_back(mask);
  std::sort(opes.begin(), opes.end(), [](uint32_t a, uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    while (a && b) {
      int la = __builtin_ctz(a), lb = __builtin_ctz(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return false;
  });

  for (uint32_t ope : opes) {
    if ((ope & forced) != forced) continue;
    // with one level of budget left, an open slot is solved by plain
    // contortion against the same faces the pairwise constraints impose on
    // a closed one, so opening anything beyond the forced slots cannot
    // reach new solutions
    if (depth <= 1 && ope != forced) break;
    poll_deadline(opt.deadline);
    build_domains();

    std::vector<int> cvars;
    for (int idx = 0; idx < nslots; ++idx)
      if (!(ope >> idx & 1)) cvars.push_back(idx);
    bool hopeless = false;
    for (int v : cvars)
      if (all_dom[v].empty()) {
        hopeless = true;
        break;
      }
    if (hopeless) continue;

    size_t nv = cvars.size();
    std::map<std::string, int> interned;
    std::vector<std::vector<std::map<size_t, int>>> keys(nv);
    for (size_t vi = 0; vi < nv; ++vi) keys[vi].resize(all_dom[cvars[vi]].size());
    auto face_key = [&](size_t vi, int val, size_t vj) -> int {
      auto& key_memo = keys[vi][val];
      auto it = key_memo.find(vj);
      if (it != key_memo.end()) return it->second;
      const std::string& s = ridge(cvars[vi], val, cvars[vj]).second;
      int id = static_cast<int>(interned.size());
      auto [pos, fresh] = interned.emplace(s, id);
      if (!fresh) id = pos->second;
      return key_memo.emplace(vj, id).first->second;
    };
    auto compatible = [&](size_t vi, size_t vj) {
      Slot a = slot_of(cvars[vi]), b = slot_of(cvars[vj]);
      if (!a.is_back() && !b.is_back() && a.x == b.x) return false;
      return true;
    };

    std::vector<std::vector<int>> live(nv);
    for (size_t vi = 0; vi < nv; ++vi) {
      live[vi].resize(all_dom[cvars[vi]].size());
      for (size_t k = 0; k < live[vi].size(); ++k) live[vi][k] = k;
    }
    std::vector<int> assigned(nv, -1);
    std::optional<CellPtr> result;

    // with every constrained slot assigned, solve the open ones a level
    // down, letting earlier solutions shape later boundaries; sides whose
    // goal face is a filler go first (their natural extensions are rigid
    // and cheap to reject), the back side goes last, once every solved
    // side has contributed its edge to the base's boundary
    std::vector<int> open_order;
    for (int idx = 0; idx < nslots - 1; ++idx)
      if ((ope >> idx & 1) && (forced >> idx & 1)) open_order.push_back(idx);
    for (int idx = 0; idx < nslots - 1; ++idx)
      if ((ope >> idx & 1) && !(forced >> idx & 1)) open_order.push_back(idx);
    if (ope >> back_idx & 1) open_order.push_back(back_idx);
    auto try_assignment = [&]() -> bool {
      std::vector<int> val(nslots, -1);
      std::map<int, CellPtr> value;
      for (size_t vi = 0; vi < nv; ++vi) {
        val[cvars[vi]] = assigned[vi];
        value[cvars[vi]] = all_dom[cvars[vi]][assigned[vi]];
      }
      for (int idx : open_order) {
        Slot s = slot_of(idx);
        std::vector<std::pair<std::string, CellFace>> pieces;
        for (const auto& [idx2, cell2] : value) {
          Slot t = slot_of(idx2);
          if (!s.is_back() && !t.is_back() && t.x == s.x) continue;
          CellPtr fc;
          const std::string* fk = nullptr;
          std::string fresh_key;
          if (val[idx2] >= 0) {
            const auto& r = ridge(idx2, val[idx2], idx);
            fc = r.first;
            fk = &r.second;
          } else {
            Slot sd = slot_of(idx);
            DimPtr c = sd.is_back() ? dvar(bound) : dvar(dims.vars[sd.x]);
            Endpoint e = sd.is_back() ? 0 : sd.e;
            fc = face_at(ctx, cell2, slot_dims(t), c, e);
            fresh_key = alpha_key(fc);
            fk = &fresh_key;
          }
          std::string piece = t.is_back() ? bound : dims.vars[t.x];
          piece += '=';
          piece += static_cast<char>('0' + (t.is_back() ? 0 : t.e));
          piece += *fk;
          DimPtr fcon = t.is_back() ? dvar(bound) : dvar(dims.vars[t.x]);
          pieces.emplace_back(
              std::move(piece),
              CellFace{std::move(fcon), t.is_back() ? Endpoint{0} : t.e, fc});
        }
        if (!s.is_back()) {
          auto git = gface.find(idx);
          if (git != gface.end()) {
            std::string piece = bound;
            piece += "=1";
            piece += gkey[idx];
            pieces.emplace_back(std::move(piece),
                                CellFace{dvar(bound), 1, git->second});
          }
        }
        std::sort(pieces.begin(), pieces.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string key = std::to_string(depth - 1);
        key += '|';
        key += sd_str[idx];
        for (const auto& [pk, pf] : pieces) {
          key += '|';
          key += pk;
        }
        std::optional<CellPtr> sol;
        auto hit = memo.table.find(key);
        if (hit != memo.table.end()) {
          sol = hit->second;
        } else {
          Boundary sub;
          for (auto& [pk, pf] : pieces) sub.faces.push_back(std::move(pf));
          sol = solve_rec(ctx, slot_dims(s), sub, depth - 1, opt, stats, memo,
                          &key);
        }
        if (!sol) return false;
        value[idx] = *sol;
      }
      FaceList sides;
      for (int idx = 0; idx < back_idx; ++idx)
        sides.push_back({dvar(dims.vars[idx / 2]), idx % 2, value[idx]});
      CellPtr filler = make_fill(0, done(), bound, sides, value[back_idx]);
      try {
        if (check_ok(ctx, filler, dims, goal, opt.theory)) {
          result = filler;
          return true;
        }
      } catch (const std::exception&) {
      }
      return false;
    };

    std::function<bool()> search = [&]() -> bool {
      int pick = -1;
      size_t best = SIZE_MAX;
      for (size_t vi = 0; vi < nv; ++vi)
        if (assigned[vi] < 0 && live[vi].size() < best) {
          best = live[vi].size();
          pick = static_cast<int>(vi);
        }
      if (pick < 0) return try_assignment();
      std::vector<int> cands = live[pick];
      for (int val : cands) {
        if (stats) ++stats->csp_branches;
        poll_deadline(opt.deadline);
        assigned[pick] = val;
        std::vector<std::pair<size_t, std::vector<int>>> saved;
        bool dead = false;
        for (size_t vj = 0; vj < nv && !dead; ++vj) {
          if (assigned[vj] >= 0 || !compatible(pick, vj)) continue;
          int want = face_key(pick, val, vj);
          std::vector<int> keep;
          for (int w : live[vj])
            if (want == face_key(vj, w, pick)) keep.push_back(w);
          if (keep.size() != live[vj].size()) {
            saved.emplace_back(vj, std::move(live[vj]));
            live[vj] = std::move(keep);
          }
          if (live[vj].empty()) dead = true;
        }
        if (!dead && search()) return true;
        for (auto& [vj, old] : saved) live[vj] = std::move(old);
        assigned[pick] = -1;
      }
      return false;
    };

    if (search()) return result;
  }
  return std::nullopt;
}

std::optional<CellPtr> kan_impl(const CellCtx& ctx, const DimCtx& dims,
                                const Boundary& goal, int depth,
                                const KanOptions& opt, SearchStats* stats,
                                Memo& memo) {
  if (depth <= 0) return std::nullopt;
  poll_deadline(opt.deadline);
  if (auto direct = kan_fill(ctx, dims, goal, opt.theory)) return direct;
  return kan_cube(ctx, dims, goal, depth, opt, stats, memo);
}

std::optional<CellPtr> solve_rec(const CellCtx& ctx, const DimCtx& dims,
                                 const Boundary& goal, int budget,
                                 const KanOptions& opt, SearchStats* stats,
                                 Memo& memo, const std::string* pkey) {
  std::string key = pkey ? *pkey : goal_key(dims, goal, budget);
  auto hit = memo.table.find(key);
  if (hit != memo.table.end()) return hit->second;
  std::optional<CellPtr> out;
  ContortOptions copt(opt.theory);
  copt.threads = opt.threads;
  copt.deadline = opt.deadline;
  for (const auto& decl : ctx) {
    try {
      if (auto psi = contort(ctx, dims, goal, decl, copt, stats)) {
        out = make_var_app(decl.name, *psi);
        break;
      }
    } catch (const InstanceTooLarge&) {
    }
  }
  if (!out && budget >= 1)
    out = kan_impl(ctx, dims, goal, budget, opt, stats, memo);
  memo.table.emplace(std::move(key), out);
  return out;
}

}  // namespace

std::optional<CellPtr> kan_solver(const CellCtx& ctx, const DimCtx& dims,
                                  const Boundary& goal, int depth,
                                  const KanOptions& opt, SearchStats* stats) {
  Memo memo;
  return kan_impl(ctx, dims, goal, depth, opt, stats, memo);
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved:
      return "solved";
    case SolveStatus::timeout:
      return "timeout";
    case SolveStatus::depth_exhausted:
      return "depth-exhausted";
    case SolveStatus::error:
      return "error";
  }
  return "unknown";
}

SolveResult solve(const BoundaryProblem& problem, int threads) {
  SolveResult r;
  r.theory =
      problem.config.theory.value_or(default_theory(problem.dims.size()));
  KanOptions opt(r.theory);
  opt.threads = threads;
  if (problem.config.timeout_ms >= 0)
    opt.deadline = std::chrono::steady_clock::now() +
                   std::chrono::milliseconds(problem.config.timeout_ms);
  try {
    wf_context(problem.ctx, Theory::demorgan);
    wf_boundary(problem.ctx, problem.dims, problem.goal, Theory::demorgan);
    ContortOptions copt(r.theory);
    copt.threads = threads;
    copt.deadline = opt.deadline;
    for (const auto& decl : problem.ctx) {
      try {
        if (auto psi =
                contort(problem.ctx, problem.dims, problem.goal, decl, copt,
                        &r.stats)) {
          r.status = SolveStatus::solved;
          r.cell = make_var_app(decl.name, *psi);
          return r;
        }
      } catch (const InstanceTooLarge&) {
        r.stats.notes.push_back("skipped " + decl.name +
                                ": contortion space too large");
      }
    }
    Memo memo;
    for (int d = 1; d <= problem.config.max_depth; ++d) {
      r.stats.depth_reached = d;
      if (auto cell =
              kan_impl(problem.ctx, problem.dims, problem.goal, d, opt,
                       &r.stats, memo)) {
        r.status = SolveStatus::solved;
        r.cell = *cell;
        return r;
      }
    }
    r.status = SolveStatus::depth_exhausted;
  } catch (const SolverTimeout&) {
    r.status = SolveStatus::timeout;
  } catch (const std::exception& e) {
    r.status = SolveStatus::error;
    r.message = e.what();
  }
  return r;
}

}  // namespace cubesolve
