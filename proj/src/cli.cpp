#include "cubesolve/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "cubesolve/agda.hpp"
#include "cubesolve/cube_format.hpp"
#include "cubesolve/group.hpp"
#include "cubesolve/kan.hpp"

namespace cubesolve {

namespace {

int env_threads() {
  if (const char* s = std::getenv("CUBESOLVE_THREADS")) {
    try {
      int n = std::stoi(s);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

long long ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// outcome of one goal: the solver result, or the full solution list when
// enumerating contortions
struct GoalReport {
  std::string name;
  SolveResult result;
  long long ms = 0;
  bool enumerated = false;
  std::vector<CellPtr> solutions;

  const char* status() const {
    if (!enumerated) return status_name(result.status);
    if (result.status == SolveStatus::timeout) return "timeout";
    if (result.status == SolveStatus::error) return "error";
    return solutions.empty() ? "exhausted" : "solved";
  }
  bool failed() const {
    return enumerated ? solutions.empty()
                      : result.status != SolveStatus::solved;
  }
};

// Agda text, or empty plus the reason it cannot be printed
std::pair<std::string, std::string> try_agda(const BoundaryProblem& p,
                                             const CellPtr& t) {
  try {
    return {print_agda(t, p), ""};
  } catch (const UnsupportedDirection& e) {
    return {"", e.what()};
  }
}

void print_term(std::ostream& out, const BoundaryProblem& p, const CellPtr& t,
                const std::string& format) {
  if (format == "internal") {
    out << cell_to_string(t) << "\n";
    return;
  }
  auto [agda, reason] = try_agda(p, t);
  if (reason.empty()) {
    out << agda << "\n";
  } else {
    out << "-- no hcomp/hfill form (" << reason << "); internal term:\n"
        << cell_to_string(t) << "\n";
  }
}

void report_text(std::ostream& out, const GoalReport& rep,
                 const BoundaryProblem& p, bool stats,
                 const std::string& format) {
  if (rep.enumerated) {
    out << "-- " << rep.name << ": " << rep.solutions.size()
        << " contortion solution" << (rep.solutions.size() == 1 ? "" : "s");
    if (rep.result.status == SolveStatus::timeout) out << ", search timed out";
    out << " (" << rep.ms << " ms)";
  } else {
    out << "-- " << rep.name << ": " << rep.status() << " (" << rep.ms
        << " ms)";
  }
  if (rep.result.status == SolveStatus::error && !rep.result.message.empty())
    out << ": " << rep.result.message;
  out << "\n";
  if (rep.enumerated) {
    for (const auto& t : rep.solutions) print_term(out, p, t, format);
  } else if (rep.result.status == SolveStatus::solved) {
    print_term(out, p, rep.result.cell, format);
  }
  if (stats) {
    const SearchStats& s = rep.result.stats;
    out << "--   maps unfolded: " << s.maps_unfolded
        << ", csp branches: " << s.csp_branches
        << ", depth reached: " << s.depth_reached << "\n";
    for (const auto& n : s.notes) out << "--   " << n << "\n";
  }
}

nlohmann::json report_json(const GoalReport& rep, const BoundaryProblem& p,
                           bool stats) {
  nlohmann::json j;
  j["goal"] = rep.name;
  j["status"] = rep.status();
  j["ms"] = rep.ms;
  j["theory"] = theory_name(rep.result.theory);
  if (!rep.result.message.empty()) j["message"] = rep.result.message;
  auto term_json = [&](const CellPtr& t) {
    nlohmann::json e;
    e["term"] = cell_to_string(t);
    auto [agda, reason] = try_agda(p, t);
    if (reason.empty())
      e["agda"] = agda;
    else
      e["agda"] = nullptr;
    return e;
  };
  if (rep.enumerated) {
    j["solutions"] = nlohmann::json::array();
    for (const auto& t : rep.solutions) j["solutions"].push_back(term_json(t));
  } else if (rep.result.status == SolveStatus::solved) {
    nlohmann::json e = term_json(rep.result.cell);
    j["term"] = e["term"];
    j["agda"] = e["agda"];
  }
  if (stats) {
    const SearchStats& s = rep.result.stats;
    j["stats"] = {{"maps_unfolded", s.maps_unfolded},
                  {"csp_branches", s.csp_branches},
                  {"depth_reached", s.depth_reached},
                  {"notes", s.notes}};
  }
  return j;
}

// every verified contortion of every context cell, in declaration order
void enumerate_all(const BoundaryProblem& p, int threads, GoalReport& rep) {
  Theory th = p.config.theory.value_or(default_theory(p.dims.vars.size()));
  rep.result.theory = th;
  ContortOptions opt(th);
  opt.threads = threads;
  if (p.config.timeout_ms >= 0)
    opt.deadline = std::chrono::steady_clock::now() +
                   std::chrono::milliseconds(p.config.timeout_ms);
  try {
    wf_context(p.ctx, Theory::demorgan);
    wf_boundary(p.ctx, p.dims, p.goal, Theory::demorgan);
    for (const auto& decl : p.ctx) {
      try {
        contort_stream(
            p.ctx, p.dims, p.goal, decl, opt,
            [&](const Contortion& psi) {
              rep.solutions.push_back(make_var_app(decl.name, psi));
              return true;
            },
            &rep.result.stats);
      } catch (const InstanceTooLarge& e) {
        rep.result.stats.notes.push_back("skipped " + decl.name + ": " +
                                         e.what());
      }
    }
    rep.result.status = rep.solutions.empty() ? SolveStatus::depth_exhausted
                                              : SolveStatus::solved;
  } catch (const SolverTimeout&) {
    rep.result.status = SolveStatus::timeout;
  } catch (const std::exception& e) {
    rep.result.status = SolveStatus::error;
    rep.result.message = e.what();
  }
}

struct SolveFlags {
  std::string file;
  std::string goal;
  std::string theory;
  int depth = 0;
  double timeout = 0;
  bool all = false;
  bool stats = false;
  std::string format = "agda";
  bool has_theory = false, has_depth = false, has_timeout = false;
};

int do_solve(const SolveFlags& fl, std::ostream& out, std::ostream& err) {
  CubeFile f = load_cube(fl.file);
  std::vector<const GoalSpec*> goals;
  if (!fl.goal.empty()) {
    const GoalSpec* g = f.find_goal(fl.goal);
    if (!g) {
      err << "error: no goal named '" << fl.goal << "' in " << fl.file << "\n";
      return 2;
    }
    goals.push_back(g);
  } else {
    for (const auto& g : f.goals) goals.push_back(&g);
    if (goals.empty()) {
      err << "error: " << fl.file << " declares no goals\n";
      return 2;
    }
  }
  int threads = env_threads();
  bool any_unsolved = false, any_error = false;
  nlohmann::json jarr = nlohmann::json::array();
  for (const GoalSpec* g : goals) {
    BoundaryProblem p = g->problem(f.ctx);
    if (fl.has_theory) p.config.theory = theory_from_name(fl.theory);
    if (fl.has_depth) p.config.max_depth = fl.depth;
    if (fl.has_timeout) p.config.timeout_ms = std::llround(fl.timeout * 1000.0);
    GoalReport rep;
    rep.name = g->name;
    auto t0 = std::chrono::steady_clock::now();
    if (fl.all) {
      rep.enumerated = true;
      enumerate_all(p, threads, rep);
    } else {
      rep.result = solve(p, threads);
    }
    rep.ms = ms_since(t0);
    if (rep.result.status == SolveStatus::error)
      any_error = true;
    else if (rep.failed())
      any_unsolved = true;
    if (fl.format == "json")
      jarr.push_back(report_json(rep, p, fl.stats));
    else
      report_text(out, rep, p, fl.stats, fl.format);
  }
  if (fl.format == "json") out << jarr.dump(2) << "\n";
  return any_error ? 2 : any_unsolved ? 1 : 0;
}

int do_check(const std::string& file, std::ostream& out) {
  CubeFile f = load_cube(file);
  int failed = 0;
  for (const auto& g : f.goals) {
    if (!g.provided) {
      out << "-- " << g.name << ": skipped (no term given)\n";
      continue;
    }
    Theory th = g.config.theory.value_or(default_theory(g.dims.vars.size()));
    try {
      check(f.ctx, g.provided, g.dims, g.goal, th);
      out << "-- " << g.name << ": verified\n";
    } catch (const std::exception& e) {
      out << "-- " << g.name << ": FAILED: " << e.what() << "\n";
      ++failed;
    }
  }
  return failed ? 1 : 0;
}

bool expect_met(const std::string& want, SolveStatus got) {
  if (want == "solved") return got == SolveStatus::solved;
  if (want == "timeout") return got == SolveStatus::timeout;
  if (want == "depth_exhausted") return got == SolveStatus::depth_exhausted;
  return got == SolveStatus::timeout || got == SolveStatus::depth_exhausted;
}

int do_bench(const std::string& dir, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    err << "error: " << dir << " is not a directory\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& ent : fs::directory_iterator(dir))
    if (ent.path().extension() == ".cube") files.push_back(ent.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "error: no .cube files in " << dir << "\n";
    return 2;
  }
  struct Row {
    std::string file, goal, status, expected;
    long long ms;
    bool ok;
  };
  int threads = env_threads();
  std::vector<Row> rows;
  for (const auto& path : files) {
    CubeFile f = load_cube(path.string());
    for (const auto& g : f.goals) {
      BoundaryProblem p = g.problem(f.ctx);
      auto t0 = std::chrono::steady_clock::now();
      SolveResult r = solve(p, threads);
      std::string want = g.expect.value_or("solved");
      Row row;
      row.file = path.filename().string();
      row.goal = g.name;
      row.status = status_name(r.status);
      row.expected = want == "depth_exhausted" ? "depth-exhausted" : want;
      row.ms = ms_since(t0);
      row.ok = expect_met(want, r.status);
      rows.push_back(row);
    }
  }
  size_t wf = 4, wg = 4, ws = 6, we = 8;
  for (const auto& r : rows) {
    wf = std::max(wf, r.file.size());
    wg = std::max(wg, r.goal.size());
    ws = std::max(ws, r.status.size());
    we = std::max(we, r.expected.size());
  }
  out << std::left << std::setw(static_cast<int>(wf) + 2) << "file"
      << std::setw(static_cast<int>(wg) + 2) << "goal"
      << std::setw(static_cast<int>(ws) + 2) << "status" << std::right
      << std::setw(8) << "ms"
      << "  " << std::left << std::setw(static_cast<int>(we) + 2) << "expected"
      << "ok"
      << "\n";
  size_t met = 0;
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(wf) + 2) << r.file
        << std::setw(static_cast<int>(wg) + 2) << r.goal
        << std::setw(static_cast<int>(ws) + 2) << r.status << std::right
        << std::setw(8) << r.ms << "  " << std::left
        << std::setw(static_cast<int>(we) + 2) << r.expected
        << (r.ok ? "yes" : "NO") << "\n";
    if (r.ok) ++met;
  }
  out << met << "/" << rows.size() << " expectations met\n";
  return met == rows.size() ? 0 : 1;
}

// space-separated generator symbols, each optionally suffixed ^-1
Word parse_word_text(const Presentation& p, const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    Letter l{tok, 1};
    if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
      l.sym = tok.substr(0, tok.size() - 3);
      l.exp = -1;
    }
    if (!p.has_generator(l.sym))
      throw PresentationSyntaxError("unknown generator '" + l.sym + "'");
    w.push_back(l);
  }
  return w;
}

int do_gen_group(const std::string& file, const std::vector<std::string>& eqs,
                 std::ostream& out, std::ostream& err) {
  std::ifstream in(file);
  if (!in) {
    err << "error: cannot open " << file << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Presentation p = parse_presentation(buf.str());
  CubeFile f;
  f.ctx = encode_context(p);
  DimCtx square;
  square.vars = {"i", "k"};
  int n = 0;
  for (const auto& eq : eqs) {
    auto sep = eq.find('=');
    if (sep == std::string::npos)
      throw PresentationSyntaxError("expected 'lhs = rhs', got '" + eq + "'");
    Word lhs = parse_word_text(p, eq.substr(0, sep));
    Word rhs = parse_word_text(p, eq.substr(sep + 1));
    GoalSpec g;
    g.name = "eq" + std::to_string(++n);
    g.dims = square;
    g.config.theory = Theory::cartesian;
    g.goal.faces.push_back({dvar("i"), 0, star_cell()});
    g.goal.faces.push_back({dvar("i"), 1, star_cell()});
    g.goal.faces.push_back({dvar("k"), 0, encode_word(lhs)});
    g.goal.faces.push_back({dvar("k"), 1, encode_word(rhs)});
    f.goals.push_back(std::move(g));
  }
  out << print_cube(f);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"cube boundary problem solver", "cubesolve"};
  app.require_subcommand(1);

  SolveFlags fl;
  auto* sc_solve =
      app.add_subcommand("solve", "solve the goals of a .cube file");
  sc_solve->add_option("file", fl.file, ".cube input file")->required();
  sc_solve->add_option("--goal", fl.goal, "solve only the named goal");
  auto* opt_theory =
      sc_solve->add_option("--theory", fl.theory, "contortion theory")
          ->check(CLI::IsMember(
              {"cartesian", "disjunctive", "dedekind", "demorgan"}));
  auto* opt_depth =
      sc_solve->add_option("--depth", fl.depth, "maximum filler nesting depth")
          ->check(CLI::PositiveNumber);
  auto* opt_timeout =
      sc_solve
          ->add_option("--timeout", fl.timeout, "per-goal timeout in seconds")
          ->check(CLI::NonNegativeNumber);
  sc_solve->add_flag("--all", fl.all, "enumerate every contortion solution");
  sc_solve->add_flag("--stats", fl.stats, "print search statistics");
  sc_solve->add_option("--format", fl.format, "agda, internal or json")
      ->check(CLI::IsMember({"agda", "internal", "json"}));

  std::string check_file;
  auto* sc_check =
      app.add_subcommand("check", "verify the terms given in a .cube file");
  sc_check->add_option("file", check_file, ".cube input file")->required();

  std::string bench_dir;
  auto* sc_bench =
      app.add_subcommand("bench", "solve every .cube file in a directory");
  sc_bench->add_option("dir", bench_dir, "directory of .cube files")
      ->required();

  std::string gen_file;
  std::vector<std::string> gen_eqs;
  auto* sc_gen = app.add_subcommand(
      "gen-group", "encode a group presentation as a .cube context");
  sc_gen->add_option("file", gen_file, "presentation text file")->required();
  sc_gen->add_option("--eq", gen_eqs, "word equality goal, written 'w1 = w2'");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cubesolve");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  fl.has_theory = opt_theory->count() > 0;
  fl.has_depth = opt_depth->count() > 0;
  fl.has_timeout = opt_timeout->count() > 0;
  try {
    if (sc_solve->parsed()) return do_solve(fl, out, err);
    if (sc_check->parsed()) return do_check(check_file, out);
    if (sc_bench->parsed()) return do_bench(bench_dir, out, err);
    return do_gen_group(gen_file, gen_eqs, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cubesolve
