#include "cubesolve/agda.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cubesolve {

namespace {

// precedence levels: 0 surrounding ∨, 1 child of ∨, 2 child of ∧,
// 3 argument or ~ operand (any compound needs parens)
void agda_dim(std::ostringstream& out, const DimPtr& t, int parent,
              const std::map<std::string, std::string>& ren) {
  switch (t->kind) {
    case DimTerm::Kind::zero:
      out << "i0";
      return;
    case DimTerm::Kind::one:
      out << "i1";
      return;
    case DimTerm::Kind::var: {
      auto it = ren.find(t->name);
      out << (it == ren.end() ? t->name : it->second);
      return;
    }
    case DimTerm::Kind::neg: {
      bool paren = parent > 2;
      if (paren) out << "(";
      out << "~ ";
      agda_dim(out, t->a, 3, ren);
      if (paren) out << ")";
      return;
    }
    case DimTerm::Kind::join: {
      bool paren = parent > 1;
      if (paren) out << "(";
      agda_dim(out, t->a, 1, ren);
      out << " ∨ ";
      agda_dim(out, t->b, 1, ren);
      if (paren) out << ")";
      return;
    }
    case DimTerm::Kind::meet: {
      bool paren = parent > 2;
      if (paren) out << "(";
      agda_dim(out, t->a, 2, ren);
      out << " ∧ ";
      agda_dim(out, t->b, 2, ren);
      if (paren) out << ")";
      return;
    }
  }
}

struct AgdaPrinter {
  std::set<std::string> taken;   // goal dims, context cells, issued binders
  std::vector<std::string> pool = {"l", "m", "n", "o"};
  size_t next = 0;
  std::map<std::string, std::string> ren;

  std::string fresh_binder() {
    for (;;) {
      std::string cand = pool[next % pool.size()];
      if (next >= pool.size()) cand += std::to_string(next / pool.size());
      ++next;
      if (taken.insert(cand).second) return cand;
    }
  }

  void term(std::ostringstream& out, const CellPtr& t,
            const std::string& ind) {
    switch (t->kind) {
      case Cell::Kind::bot:
        throw UnsupportedDirection("inconsistent cell has no rendering");
      case Cell::Kind::var_app: {
        out << t->head;
        for (const auto& a : t->psi.terms) {
          out << " ";
          agda_dim(out, a, 3, ren);
        }
        return;
      }
      case Cell::Kind::fill: {
        if (t->from != 0)
          throw UnsupportedDirection(
              "fill from 1 has no hcomp/hfill rendering");
        bool to_one = t->to->kind == DimTerm::Kind::one;
        if (!to_one && t->to->kind != DimTerm::Kind::var)
          throw UnsupportedDirection("fill into 0 has no rendering");

        std::string b = fresh_binder();
        ren[t->bound] = b;
        std::vector<size_t> order(t->sides.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
          const CellFace& fx = t->sides[x];
          const CellFace& fy = t->sides[y];
          if (fx.c->name != fy.c->name) return fx.c->name < fy.c->name;
          return fx.e < fy.e;
        });

        out << (to_one ? "hcomp" : "hfill") << " (λ " << b << " → λ {\n";
        std::string inner = ind + "    ";
        for (size_t i = 0; i < order.size(); ++i) {
          const CellFace& f = t->sides[order[i]];
          if (f.c->kind != DimTerm::Kind::var)
            throw UnsupportedDirection("constant face constraint");
          out << ind << (i == 0 ? "    " : "  ; ");
          std::string cvar = f.c->name;
          auto it = ren.find(cvar);
          out << "(" << (it == ren.end() ? cvar : it->second) << " = i"
              << f.e << ") → ";
          term(out, f.body, inner);
          out << "\n";
        }
        out << ind << "  })\n";
        out << ind << "  ";
        if (!to_one) out << "(inS ";
        bool bare = t->base->kind == Cell::Kind::var_app &&
                    t->base->psi.terms.empty();
        if (!bare) out << "(";
        term(out, t->base, ind + "  ");
        if (!bare) out << ")";
        if (!to_one) {
          out << ") ";
          agda_dim(out, t->to, 3, ren);
        }
        ren.erase(t->bound);
        return;
      }
    }
  }
};

}  // namespace

std::string print_agda(const CellCtx& ctx, const CellPtr& t,
                       const DimCtx& dims, const Boundary& goal,
                       Theory theory) {
  check(ctx, t, dims, goal, theory);
  AgdaPrinter pr;
  pr.taken.insert(dims.vars.begin(), dims.vars.end());
  for (const auto& d : ctx) pr.taken.insert(d.name);

  std::ostringstream out;
  if (!dims.vars.empty()) {
    out << "λ";
    for (const auto& v : dims.vars) out << " " << v;
    out << " → ";
  }
  pr.term(out, t, "");
  return out.str();
}

std::string print_agda(const CellPtr& t, const BoundaryProblem& problem) {
  Theory theory =
      problem.config.theory.value_or(default_theory(problem.dims.size()));
  return print_agda(problem.ctx, t, problem.dims, problem.goal, theory);
}

bool agda_well_formed(const std::string& text) {
  std::vector<char> stack;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '{') stack.push_back(c);
    if (c == ')') {
      if (stack.empty() || stack.back() != '(') return false;
      stack.pop_back();
    }
    if (c == '}') {
      if (stack.empty() || stack.back() != '{') return false;
      stack.pop_back();
    }
  }
  if (!stack.empty()) return false;
  // every face group holds at least one arrow-shaped entry
  const std::string opener = "λ {";
  size_t at = 0;
  while ((at = text.find(opener, at)) != std::string::npos) {
    size_t close = at, depth = 0;
    for (size_t i = at + opener.size(); i < text.size(); ++i) {
      if (text[i] == '{') ++depth;
      if (text[i] == '}') {
        if (depth == 0) {
          close = i;
          break;
        }
        --depth;
      }
    }
    if (close == at) return false;
    if (text.substr(at, close - at).find("→") == std::string::npos)
      return false;
    at = close;
  }
  return true;
}

}  // namespace cubesolve
