#include "cubesolve/cube_format.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cubesolve {

BoundaryProblem GoalSpec::problem(const CellCtx& ctx) const {
  BoundaryProblem p;
  p.ctx = ctx;
  p.dims = dims;
  p.goal = goal;
  p.config = config;
  return p;
}

const GoalSpec* CubeFile::find_goal(const std::string& name) const {
  for (const auto& g : goals)
    if (g.name == name) return &g;
  return nullptr;
}

namespace {

struct Tok {
  enum Kind { ident, number, punct, eof };
  Kind kind;
  std::string text;
  int line, col;
};

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') bump(1);
      continue;
    }
    int tl = line, tc = col;
    if (c == '-') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Tok::punct, "->", tl, tc});
        bump(2);
        continue;
      }
      throw SyntaxError(tl, tc, "'->' or '--'");
    }
    if (c == '/') {
      if (i + 1 < s.size() && s[i + 1] == '\\') {
        out.push_back({Tok::punct, "/\\", tl, tc});
        bump(2);
        continue;
      }
      throw SyntaxError(tl, tc, "'/\\'");
    }
    if (c == '\\') {
      if (i + 1 < s.size() && s[i + 1] == '/') {
        out.push_back({Tok::punct, "\\/", tl, tc});
        bump(2);
        continue;
      }
      throw SyntaxError(tl, tc, "'\\/'");
    }
    if (std::string("~[]{}(),=:").find(c) != std::string::npos) {
      out.push_back({Tok::punct, std::string(1, c), tl, tc});
      bump(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
          ++j;
      }
      out.push_back({Tok::number, s.substr(i, j - i), tl, tc});
      bump(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i + 1;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
              s[j] == '\''))
        ++j;
      out.push_back({Tok::ident, s.substr(i, j - i), tl, tc});
      bump(j - i);
      continue;
    }
    throw SyntaxError(tl, tc, "a token (got '" + std::string(1, c) + "')");
  }
  out.push_back({Tok::eof, "", line, col});
  return out;
}

struct Parser {
  std::vector<Tok> toks;
  size_t pos = 0;
  CellCtx ctx;

  const Tok& cur() const { return toks[pos]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(cur().line, cur().col, expected);
  }

  bool at_punct(const std::string& p) const {
    return cur().kind == Tok::punct && cur().text == p;
  }
  bool accept_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    ++pos;
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("'" + p + "'");
  }
  std::string expect_ident(const std::string& what) {
    if (cur().kind != Tok::ident) fail(what);
    return toks[pos++].text;
  }
  Endpoint expect_endpoint() {
    if (cur().kind != Tok::number || (cur().text != "0" && cur().text != "1"))
      fail("0 or 1");
    return toks[pos++].text == "1" ? 1 : 0;
  }

  DimCtx parse_dims() {
    DimCtx d;
    expect_punct("[");
    if (!at_punct("]")) {
      d.vars.push_back(expect_ident("a dimension name"));
      while (accept_punct(",")) d.vars.push_back(expect_ident("a dimension name"));
    }
    expect_punct("]");
    return d;
  }

  // ~ binds tightest, then /\, then \/
  DimPtr parse_dim() {
    DimPtr t = parse_meet();
    while (accept_punct("\\/")) t = djoin(t, parse_meet());
    return t;
  }
  DimPtr parse_meet() {
    DimPtr t = parse_dim_atom();
    while (accept_punct("/\\")) t = dmeet(t, parse_dim_atom());
    return t;
  }
  DimPtr parse_dim_atom() {
    if (accept_punct("~")) return dneg(parse_dim_atom());
    if (accept_punct("(")) {
      DimPtr t = parse_dim();
      expect_punct(")");
      return t;
    }
    if (cur().kind == Tok::number && (cur().text == "0" || cur().text == "1"))
      return dconst(toks[pos++].text == "1" ? 1 : 0);
    if (cur().kind == Tok::ident) return dvar(toks[pos++].text);
    fail("a dimension term");
  }

  DimPtr parse_atom() {
    if (cur().kind == Tok::number && (cur().text == "0" || cur().text == "1"))
      return dconst(toks[pos++].text == "1" ? 1 : 0);
    if (cur().kind == Tok::ident) return dvar(toks[pos++].text);
    fail("a dimension variable or endpoint");
  }

  CellPtr parse_term() {
    if (cur().kind == Tok::ident && cur().text == "fill") {
      ++pos;
      std::string bound = expect_ident("a bound direction name");
      expect_punct(":");
      Endpoint from = expect_endpoint();
      expect_punct("->");
      DimPtr to = parse_atom();
      FaceList sides = parse_faces();
      expect_punct("(");
      CellPtr base = parse_term();
      expect_punct(")");
      return make_fill(from, std::move(to), std::move(bound),
                       std::move(sides), std::move(base));
    }
    const Tok& head_tok = cur();
    std::string head = expect_ident("a cell name");
    const CellDecl* decl = find_decl(ctx, head);
    if (!decl)
      throw ScopeError("line " + std::to_string(head_tok.line) +
                       ": unknown cell " + head);
    Contortion psi;
    psi.source = decl->dims;
    if (accept_punct("(")) {
      if (!at_punct(")")) {
        psi.terms.push_back(parse_dim());
        while (accept_punct(",")) psi.terms.push_back(parse_dim());
      }
      expect_punct(")");
    }
    if (psi.terms.size() != decl->dims.size())
      throw ScopeError("line " + std::to_string(head_tok.line) + ": cell " +
                       head + " has " + std::to_string(decl->dims.size()) +
                       " dimensions, applied to " +
                       std::to_string(psi.terms.size()));
    return make_var_app(std::move(head), std::move(psi));
  }

  FaceList parse_faces() {
    FaceList faces;
    expect_punct("{");
    if (!at_punct("}")) {
      faces.push_back(parse_face());
      while (accept_punct(",")) faces.push_back(parse_face());
    }
    expect_punct("}");
    return faces;
  }

  CellFace parse_face() {
    DimPtr c = parse_atom();
    expect_punct("=");
    Endpoint e = expect_endpoint();
    expect_punct("->");
    return {std::move(c), e, parse_term()};
  }

  GoalSpec parse_goal() {
    GoalSpec g;
    g.name = expect_ident("a goal name");
    g.dims = parse_dims();
    while (cur().kind == Tok::ident &&
           (cur().text == "theory" || cur().text == "depth" ||
            cur().text == "timeout" || cur().text == "expect")) {
      std::string key = toks[pos++].text;
      expect_punct("=");
      const Tok& val = cur();
      if (key == "theory") {
        std::string name = expect_ident("a theory name");
        try {
          g.config.theory = theory_from_name(name);
        } catch (const std::exception&) {
          throw SyntaxError(val.line, val.col,
                            "cartesian, disjunctive, dedekind or demorgan");
        }
      } else if (key == "depth") {
        if (val.kind != Tok::number ||
            val.text.find('.') != std::string::npos)
          fail("an integer depth");
        g.config.max_depth = std::stoi(toks[pos++].text);
      } else if (key == "timeout") {
        if (val.kind != Tok::number) fail("a timeout in seconds");
        g.config.timeout_ms =
            std::llround(std::stod(toks[pos++].text) * 1000.0);
      } else {
        std::string want = expect_ident("an expected status");
        if (want != "solved" && want != "timeout" &&
            want != "depth_exhausted" && want != "unsolved")
          throw SyntaxError(val.line, val.col,
                            "solved, timeout, depth_exhausted or unsolved");
        g.expect = want;
      }
    }
    if (at_punct("{")) g.goal.faces = parse_faces();
    if (accept_punct("=")) g.provided = parse_term();
    return g;
  }

  CubeFile parse_file() {
    CubeFile f;
    while (cur().kind != Tok::eof) {
      if (cur().kind == Tok::ident && cur().text == "goal") {
        ++pos;
        f.goals.push_back(parse_goal());
        continue;
      }
      CellDecl d;
      d.name = expect_ident("a declaration or 'goal'");
      if (d.name == "fill") fail("a declaration name other than 'fill'");
      d.dims = parse_dims();
      // self-references parse but are rejected by the context check below
      ctx.push_back(d);
      if (at_punct("{")) ctx.back().boundary = parse_faces();
    }
    f.ctx = ctx;
    wf_context(f.ctx, Theory::demorgan);
    for (const auto& g : f.goals)
      wf_boundary(f.ctx, g.dims, g.goal, Theory::demorgan);
    return f;
  }
};

void print_dims(std::ostringstream& out, const DimCtx& d) {
  out << "[";
  for (size_t i = 0; i < d.vars.size(); ++i) {
    if (i) out << ", ";
    out << d.vars[i];
  }
  out << "]";
}

void print_faces(std::ostringstream& out, const FaceList& faces,
                 const char* indent) {
  out << "{\n";
  for (size_t i = 0; i < faces.size(); ++i) {
    out << indent << "  " << dim_to_string(faces[i].c) << "=" << faces[i].e
        << " -> " << cell_to_string(faces[i].body);
    if (i + 1 < faces.size()) out << ",";
    out << "\n";
  }
  out << indent << "}";
}

}  // namespace

CubeFile parse_cube(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  return p.parse_file();
}

std::string print_cube(const CubeFile& f) {
  std::ostringstream out;
  for (const auto& d : f.ctx) {
    out << d.name << " ";
    print_dims(out, d.dims);
    if (!d.boundary.empty()) {
      out << " ";
      print_faces(out, d.boundary, "");
    }
    out << "\n";
  }
  for (const auto& g : f.goals) {
    out << "\ngoal " << g.name << " ";
    print_dims(out, g.dims);
    if (g.config.theory) out << " theory=" << theory_name(*g.config.theory);
    SolveConfig defaults;
    if (g.config.max_depth != defaults.max_depth)
      out << " depth=" << g.config.max_depth;
    if (g.config.timeout_ms != defaults.timeout_ms) {
      out << " timeout=";
      if (g.config.timeout_ms % 1000 == 0)
        out << g.config.timeout_ms / 1000;
      else
        out << g.config.timeout_ms / 1000.0;
    }
    if (g.expect) out << " expect=" << *g.expect;
    if (!g.goal.faces.empty()) {
      out << " ";
      print_faces(out, g.goal.faces, "");
    }
    if (g.provided) out << "\n  = " << cell_to_string(g.provided);
    out << "\n";
  }
  return out.str();
}

CubeFile load_cube(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cube(buf.str());
}

}  // namespace cubesolve
