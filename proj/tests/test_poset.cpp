#include <random>
#include <set>

#include "cubesolve/poset.hpp"
#include "doctest.h"

using namespace cubesolve;

namespace {

uint64_t unfold_count(const Ppm& p) {
  uint64_t n = 0;
  unfold_ppm(p, [](const PosetMap&) { return true; }, &n);
  return n;
}

std::vector<PosetMap> unfold_all(const Ppm& p) {
  std::vector<PosetMap> out;
  unfold_ppm(p, [&](const PosetMap& pm) {
    out.push_back(pm);
    return true;
  });
  return out;
}

DimPtr random_monotone(std::mt19937& rng, const std::vector<std::string>& vars,
                       int depth) {
  std::uniform_int_distribution<int> leaf(0, 1 + static_cast<int>(vars.size()));
  std::uniform_int_distribution<int> node(0, 2);
  if (depth == 0 || node(rng) == 0) {
    int l = leaf(rng);
    if (l == 0) return dzero();
    if (l == 1) return done();
    return dvar(vars[static_cast<size_t>(l - 2)]);
  }
  auto a = random_monotone(rng, vars, depth - 1);
  auto b = random_monotone(rng, vars, depth - 1);
  return node(rng) == 1 ? djoin(a, b) : dmeet(a, b);
}

DimPtr random_demorgan(std::mt19937& rng, const std::vector<std::string>& vars,
                       int depth) {
  DimPtr t = random_monotone(rng, vars, depth);
  // sprinkle negations by rebuilding some leaves
  std::uniform_int_distribution<int> flip(0, 3);
  if (flip(rng) == 0) t = dneg(t);
  return t;
}

}  // namespace

TEST_CASE("point display convention") {
  CHECK(point_bits(4, 3) == "100");
  CHECK(coord_bit(4, 3, 0) == 1);
  CHECK(coord_bit(4, 3, 2) == 0);
  CHECK(with_coord(0, 3, 0, 1) == 4);
}

TEST_CASE("formula_to_pm in dedekind mode") {
  std::vector<std::string> vars{"j", "k"};
  auto pm = formula_to_pm({parse_dim("j /\\ k"), parse_dim("j \\/ k")}, vars,
                          Theory::dedekind);
  REQUIRE(pm.m == 2);
  REQUIRE(pm.n == 2);
  CHECK(pm.val == std::vector<uint8_t>{0, 1, 1, 3});
  CHECK(pm.monotone());
  CHECK_THROWS_AS(formula_to_pm({parse_dim("~j")}, {"j"}, Theory::dedekind),
                  TheoryViolation);
}

TEST_CASE("formula_to_pm doubles and interleaves literals in demorgan mode") {
  auto pm_pos = formula_to_pm({parse_dim("j")}, {"j"}, Theory::demorgan);
  REQUIRE(pm_pos.m == 2);
  CHECK(pm_pos.val == std::vector<uint8_t>{0, 0, 1, 1});
  auto pm_neg = formula_to_pm({parse_dim("~j")}, {"j"}, Theory::demorgan);
  CHECK(pm_neg.val == std::vector<uint8_t>{0, 1, 0, 1});

  // interleaving: coordinates are j, ~j, k, ~k in that order
  auto pm = formula_to_pm({parse_dim("~j /\\ k")}, {"j", "k"},
                          Theory::demorgan);
  for (uint32_t x = 0; x < 16; ++x) {
    int want = coord_bit(x, 4, 1) & coord_bit(x, 4, 2);
    CHECK(pm.val[x] == want);
  }
}

TEST_CASE("pm_to_formula roundtrip") {
  std::mt19937 rng(42);
  std::vector<std::string> vars{"i", "j", "k"};
  DimCtx ctx{vars, false};
  for (int it = 0; it < 500; ++it) {
    std::vector<DimPtr> terms{random_monotone(rng, vars, 3),
                              random_monotone(rng, vars, 3)};
    auto pm = formula_to_pm(terms, vars, Theory::dedekind);
    auto back = pm_to_formula(pm, vars, Theory::dedekind);
    REQUIRE(back.size() == terms.size());
    for (size_t t = 0; t < terms.size(); ++t)
      CHECK(dim_equal(terms[t], back[t], ctx));
  }
  std::vector<std::string> vars2{"i", "j"};
  DimCtx ctx2{vars2, false};
  for (int it = 0; it < 500; ++it) {
    std::vector<DimPtr> terms{random_demorgan(rng, vars2, 3)};
    auto pm = formula_to_pm(terms, vars2, Theory::demorgan);
    auto back = pm_to_formula(pm, vars2, Theory::demorgan);
    CHECK(dim_equal(terms[0], back[0], ctx2));
  }
}

TEST_CASE("unfold counts match the dedekind numbers") {
  CHECK(unfold_count(total_ppm(0, 1)) == 2);
  CHECK(unfold_count(total_ppm(1, 1)) == 3);
  CHECK(unfold_count(total_ppm(2, 1)) == 6);
  CHECK(unfold_count(total_ppm(3, 1)) == 20);
  CHECK(unfold_count(total_ppm(4, 1)) == 168);
  CHECK(unfold_count(total_ppm(5, 1)) == 7581);
  CHECK(unfold_count(total_ppm(3, 2)) == 400);  // D(3)^2
}

TEST_CASE("the 168 demorgan reparameterizations of a path into a square") {
  // maps 2^(2*2) -> 2 are exactly the demorgan terms in two dimensions
  std::vector<std::string> vars{"j", "k"};
  std::set<std::vector<std::vector<int>>> distinct;
  unfold_ppm(total_ppm(4, 1), [&](const PosetMap& pm) {
    auto terms = pm_to_formula(pm, vars, Theory::demorgan);
    auto nf = normalize_dim_over(terms[0], Theory::demorgan, vars);
    distinct.insert(nf.clauses);
    return true;
  });
  CHECK(distinct.size() == 168);
}

TEST_CASE("unfold is complete and deterministic") {
  for (int m = 0; m <= 3; ++m) {
    for (int n = 1; n <= 2; ++n) {
      // direct double enumeration of all functions, filtered monotone
      uint32_t points = 1u << m;
      uint64_t vals = 1u << n;
      std::set<std::vector<uint8_t>> monotone;
      std::vector<uint8_t> f(points, 0);
      std::function<void(uint32_t)> go = [&](uint32_t x) {
        if (x == points) {
          PosetMap pm{m, n, f};
          if (pm.monotone()) monotone.insert(f);
          return;
        }
        for (uint8_t v = 0; v < vals; ++v) {
          f[x] = v;
          go(x + 1);
        }
      };
      go(0);
      auto maps = unfold_all(total_ppm(m, n));
      CHECK(maps.size() == monotone.size());
      for (const auto& pm : maps) CHECK(monotone.count(pm.val) == 1);
    }
  }

  auto seq = unfold_all(total_ppm(2, 1));
  REQUIRE(seq.size() == 6);
  CHECK(seq[0].val == std::vector<uint8_t>{0, 0, 0, 0});  // constant 0 first
  CHECK(seq[1].val == std::vector<uint8_t>{0, 0, 0, 1});
  CHECK(seq[2].val == std::vector<uint8_t>{0, 0, 1, 1});
  CHECK(seq[3].val == std::vector<uint8_t>{0, 1, 0, 1});
  CHECK(seq[4].val == std::vector<uint8_t>{0, 1, 1, 1});
  CHECK(seq[5].val == std::vector<uint8_t>{1, 1, 1, 1});
}

TEST_CASE("update propagates both cover conditions") {
  Ppm p = total_ppm(1, 1);
  auto q = update_ppm(p, 1, 1ull << 0);  // pin the top point to value 0
  REQUIRE(q.has_value());
  CHECK(q->sets[0] == (1ull << 0));  // forced down to 0 as well
  CHECK(ppm_valid(*q));

  auto r = update_ppm(p, 0, 1ull << 1);  // pin the bottom point to value 1
  REQUIRE(r.has_value());
  CHECK(r->sets[1] == (1ull << 1));

  CHECK_FALSE(update_ppm(p, 0, 0).has_value());
  CHECK_THROWS_AS(update_ppm(*q, 0, 1ull << 1), std::invalid_argument);
}

TEST_CASE("a ppm is lossy but keeps the diagonal") {
  // maps {0 -> 00, 1 -> 10} and {0 -> 01, 1 -> 11} produce value sets
  // whose unfolding also contains the diagonal {0 -> 00, 1 -> 11}
  Ppm p = total_ppm(1, 2);
  p = *update_ppm(p, 0, (1ull << 0) | (1ull << 1));
  p = *update_ppm(p, 1, (1ull << 2) | (1ull << 3));
  CHECK(ppm_valid(p));
  auto maps = unfold_all(p);
  REQUIRE(maps.size() == 3);
  bool has_diag = false;
  for (const auto& pm : maps)
    if (pm.val == std::vector<uint8_t>{0, 3}) has_diag = true;
  CHECK(has_diag);
}

TEST_CASE("update never removes a globally consistent selection") {
  std::mt19937 rng(2025);
  for (int it = 0; it < 100; ++it) {
    Ppm p = total_ppm(2, 2);
    auto maps = unfold_all(p);
    const PosetMap& sigma =
        maps[std::uniform_int_distribution<size_t>(0, maps.size() - 1)(rng)];
    bool dead = false;
    for (int step = 0; step < 4 && !dead; ++step) {
      uint32_t x = std::uniform_int_distribution<uint32_t>(0, 3)(rng);
      ValueSet keep = std::uniform_int_distribution<ValueSet>(0, 15)(rng);
      ValueSet s = (keep & p.sets[x]) | (1ull << sigma.val[x]);
      auto q = update_ppm(p, x, s);
      REQUIRE(q.has_value());
      p = *q;
    }
    for (uint32_t x = 0; x < 4; ++x)
      CHECK((p.sets[x] >> sigma.val[x] & 1ull) == 1ull);
    bool found = false;
    unfold_ppm(p, [&](const PosetMap& pm) {
      if (pm.val == sigma.val) found = true;
      return !found;
    });
    CHECK(found);
  }
}

TEST_CASE("restriction and embedding") {
  CHECK(embed_point(1, 3, {{1, 1}}) == 3);   // 01 with coord1=1 -> 011
  CHECK(embed_point(2, 3, {{1, 1}}) == 6);   // 10 -> 110
  CHECK(embed_point(0, 4, {{0, 1}, {1, 0}}) == 8);  // 00 -> 1000

  Ppm p = total_ppm(2, 1);
  p = *update_ppm(p, 3, 1ull << 1);  // top point pinned to 1
  Ppm s = restrict_ppm(p, {{0, 1}});  // slice where the first coordinate is 1
  REQUIRE(s.m == 1);
  CHECK(s.sets[0] == p.sets[2]);
  CHECK(s.sets[1] == p.sets[3]);
}

TEST_CASE("consistent points flip each literal pair") {
  CHECK(consistent_points(1) == std::vector<uint32_t>{1, 2});
  auto cp = consistent_points(2);
  CHECK(cp == std::vector<uint32_t>{5, 6, 9, 10});
}

TEST_CASE("ppm dump") {
  Ppm p = total_ppm(1, 1);
  p = *update_ppm(p, 1, 1ull << 1);
  CHECK(ppm_dump(p) == "0 -> {0, 1}\n1 -> {1}\n");
}

TEST_CASE("validity rejects a broken pair") {
  Ppm p = total_ppm(1, 1);
  p.sets[0] = 1ull << 1;
  p.sets[1] = 1ull << 0;
  CHECK_FALSE(ppm_valid(p));
}
