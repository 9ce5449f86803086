#pragma once

#include <optional>
#include <string>

#include "cubesolve/cell.hpp"

namespace cubesolve {

// Parse error with a source position and what the parser was after.
struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(int line, int col, const std::string& expected)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": expected " + expected),
        line(line),
        col(col) {}
};

// A name used before declaration, a face on an undeclared dimension, or
// an application with the wrong number of arguments.
struct ScopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One goal of a file: a boundary over its own dimensions, solver settings,
// an optional expected outcome for benchmarking, and an optional inline
// solution term for `check`.
struct GoalSpec {
  std::string name;
  DimCtx dims;
  Boundary goal;
  SolveConfig config;
  std::optional<std::string> expect;
  CellPtr provided;

  BoundaryProblem problem(const CellCtx& ctx) const;
};

struct CubeFile {
  CellCtx ctx;
  std::vector<GoalSpec> goals;

  const GoalSpec* find_goal(const std::string& name) const;
};

// Grammar (documented in docs/format.md):
//   decl   := name '[' dims ']' [ '{' faces '}' ]
//   goal   := 'goal' name '[' dims ']' option* [ '{' faces '}' ] [ '=' term ]
//   option := ('theory'|'depth'|'timeout'|'expect') '=' value
//   face   := atom '=' endpoint '->' term
//   term   := name [ '(' dim {',' dim} ')' ]
//           | 'fill' name ':' endpoint '->' atom '{' faces '}' '(' term ')'
// with `--` line comments and the usual ~ /\ \/ dimension syntax.
// Scope and boundary compatibility are checked on everything declared.
CubeFile parse_cube(const std::string& text);

// Canonical rendering in the same grammar; parse(print(f)) reproduces f.
std::string print_cube(const CubeFile& f);

// Convenience wrapper over parse_cube for a file on disk.
CubeFile load_cube(const std::string& path);

}  // namespace cubesolve
