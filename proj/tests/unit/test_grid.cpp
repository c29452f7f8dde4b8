#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "logicforge/core/registry.h"
#include "logicforge/tasks/builtin.h"
#include "logicforge/tasks/grid.h"

using namespace logicforge;
using namespace logicforge::grid;

namespace {

// Brute-force solution sets written straight from the puzzle rules. They share
// nothing with the library solvers beyond the payload layout.

using Board = std::vector<std::vector<int>>;
// Compact dumps, so set order does not depend on Json comparisons.
using Solutions = std::set<std::string>;

Board board_of(const Json& j) { return j.get<Board>(); }

Json cells_json(std::vector<std::pair<int, int>> cells) {
  std::sort(cells.begin(), cells.end());
  Json out = Json::array();
  for (auto [r, c] : cells) out.push_back(Json::array({r + 1, c + 1}));
  return out;
}

int visible(const std::vector<int>& line) {
  int best = 0, seen = 0;
  for (int h : line) {
    if (h > best) {
      best = h;
      ++seen;
    }
  }
  return seen;
}

// Fills a Latin square cell by cell, then applies `accept` to the full board.
Solutions latin_oracle(int n, const Board& givens, const std::function<bool(const Board&)>& accept) {
  Solutions out;
  Board b = givens;
  std::function<void(int)> rec = [&](int idx) {
    if (idx == n * n) {
      if (accept(b)) out.insert(Json(b).dump());
      return;
    }
    int r = idx / n, c = idx % n;
    auto fits = [&](int v) {
      for (int j = 0; j < c; ++j) {
        if (b[r][j] == v) return false;
      }
      for (int i = 0; i < r; ++i) {
        if (b[i][c] == v) return false;
      }
      return true;
    };
    if (givens[r][c] != 0) {
      if (fits(givens[r][c])) rec(idx + 1);
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (!fits(v)) continue;
      b[r][c] = v;
      rec(idx + 1);
      b[r][c] = 0;
    }
  };
  rec(0);
  return out;
}

Solutions sudoku_oracle(const Json& p) {
  int n = p["n"], br = p["box_rows"], bc = p["box_cols"];
  Board givens = board_of(p["givens"]);
  for (auto& row : givens) {
    for (auto& v : row) v = std::max(v, 0);
  }
  return latin_oracle(n, givens, [&](const Board& b) {
    if (br == 0) return true;
    for (int top = 0; top < n; top += br) {
      for (int left = 0; left < n; left += bc) {
        std::set<int> seen;
        for (int r = top; r < top + br; ++r) {
          for (int c = left; c < left + bc; ++c) seen.insert(b[r][c]);
        }
        if (static_cast<int>(seen.size()) != n) return false;
      }
    }
    return true;
  });
}

Solutions futoshiki_oracle(const Json& p) {
  int n = p["n"];
  auto ineq = p["inequalities"].get<std::vector<std::vector<int>>>();
  return latin_oracle(n, board_of(p["givens"]), [&](const Board& b) {
    for (const auto& e : ineq) {
      if (!(b[e[0] - 1][e[1] - 1] < b[e[2] - 1][e[3] - 1])) return false;
    }
    return true;
  });
}

Solutions skyscraper_oracle(const Json& p) {
  int n = p["n"];
  auto top = p["top"].get<std::vector<int>>(), bottom = p["bottom"].get<std::vector<int>>();
  auto left = p["left"].get<std::vector<int>>(), right = p["right"].get<std::vector<int>>();
  return latin_oracle(n, board_of(p["givens"]), [&](const Board& b) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> row = b[i], col;
      for (int r = 0; r < n; ++r) col.push_back(b[r][i]);
      std::vector<int> row_rev(row.rbegin(), row.rend()), col_rev(col.rbegin(), col.rend());
      if (left[i] && visible(row) != left[i]) return false;
      if (right[i] && visible(row_rev) != right[i]) return false;
      if (top[i] && visible(col) != top[i]) return false;
      if (bottom[i] && visible(col_rev) != bottom[i]) return false;
    }
    return true;
  });
}

Solutions campsite_oracle(const Json& p) {
  int rows = p["rows"], cols = p["cols"];
  std::vector<std::pair<int, int>> trees, revealed;
  for (const auto& t : p["trees"]) trees.push_back({t[0].get<int>() - 1, t[1].get<int>() - 1});
  for (const auto& t : p["revealed_tents"]) revealed.push_back({t[0].get<int>() - 1, t[1].get<int>() - 1});
  auto row_counts = p["row_counts"].get<std::vector<int>>();
  auto col_counts = p["col_counts"].get<std::vector<int>>();
  std::set<std::pair<int, int>> tree_set(trees.begin(), trees.end());
  Solutions out;
  std::vector<std::pair<int, int>> tents;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == trees.size()) {
      std::set<std::pair<int, int>> s(tents.begin(), tents.end());
      for (auto a : tents) {
        for (auto b : tents) {
          if (a != b && std::abs(a.first - b.first) <= 1 && std::abs(a.second - b.second) <= 1) return;
        }
      }
      for (int r = 0; r < rows; ++r) {
        if (std::count_if(tents.begin(), tents.end(), [&](auto t) { return t.first == r; }) != row_counts[r])
          return;
      }
      for (int c = 0; c < cols; ++c) {
        if (std::count_if(tents.begin(), tents.end(), [&](auto t) { return t.second == c; }) != col_counts[c])
          return;
      }
      for (auto t : revealed) {
        if (!s.count(t)) return;
      }
      out.insert(cells_json(tents).dump());
      return;
    }
    const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    for (int d = 0; d < 4; ++d) {
      std::pair<int, int> cell{trees[i].first + dr[d], trees[i].second + dc[d]};
      if (cell.first < 0 || cell.first >= rows || cell.second < 0 || cell.second >= cols) continue;
      if (tree_set.count(cell) || std::find(tents.begin(), tents.end(), cell) != tents.end()) continue;
      tents.push_back(cell);
      rec(i + 1);
      tents.pop_back();
    }
  };
  rec(0);
  return out;
}

// One star per row, column and region (k = 1 only).
Solutions star_oracle(const Json& p) {
  int n = p["n"];
  REQUIRE(p["k"] == 1);
  Board regions = board_of(p["regions"]);
  Solutions out;
  std::vector<int> col_of(static_cast<std::size_t>(n));
  std::function<void(int)> rec = [&](int r) {
    if (r == n) {
      std::set<int> cols(col_of.begin(), col_of.end()), regs;
      for (int i = 0; i < n; ++i) regs.insert(regions[i][col_of[i]]);
      if (static_cast<int>(cols.size()) != n || static_cast<int>(regs.size()) != n) return;
      for (int i = 1; i < n; ++i) {
        if (std::abs(col_of[i] - col_of[i - 1]) <= 1) return;
      }
      std::vector<std::pair<int, int>> stars;
      for (int i = 0; i < n; ++i) stars.push_back({i, col_of[i]});
      out.insert(cells_json(stars).dump());
      return;
    }
    for (int c = 0; c < n; ++c) {
      col_of[r] = c;
      rec(r + 1);
    }
  };
  rec(0);
  return out;
}

Solutions numbrix_oracle(const Json& p) {
  int rows = p["rows"], cols = p["cols"], total = rows * cols;
  Board givens = board_of(p["givens"]);
  Solutions out;
  Board b(static_cast<std::size_t>(rows), std::vector<int>(static_cast<std::size_t>(cols), 0));
  std::function<void(int, int, int)> walk = [&](int r, int c, int v) {
    if (givens[r][c] != 0 && givens[r][c] != v) return;
    b[r][c] = v;
    if (v == total) {
      out.insert(Json(b).dump());
    } else {
      const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        int nr = r + dr[d], nc = c + dc[d];
        if (nr >= 0 && nr < rows && nc >= 0 && nc < cols && b[nr][nc] == 0) walk(nr, nc, v + 1);
      }
    }
    b[r][c] = 0;
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) walk(r, c, 1);
  }
  return out;
}

Solutions minesweeper_oracle(const Json& p) {
  int rows = p["rows"], cols = p["cols"], mines = p["mines"];
  Board revealed = board_of(p["revealed"]);
  std::vector<std::pair<int, int>> hidden;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (revealed[r][c] < 0) hidden.push_back({r, c});
    }
  }
  Solutions out;
  std::vector<std::pair<int, int>> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (static_cast<int>(chosen.size()) == mines) {
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          if (revealed[r][c] < 0) continue;
          int around = 0;
          for (auto [mr, mc] : chosen) {
            if (std::abs(mr - r) <= 1 && std::abs(mc - c) <= 1) ++around;
          }
          if (around != revealed[r][c]) return;
        }
      }
      out.insert(cells_json(chosen).dump());
      return;
    }
    if (i == hidden.size()) return;
    chosen.push_back(hidden[i]);
    rec(i + 1);
    chosen.pop_back();
    rec(i + 1);
  };
  rec(0);
  return out;
}

Solutions library_solutions(const std::string& task, const Json& payload) {
  CountOptions options;
  options.limit = 100000;
  auto sols = enumerate_solutions(task, payload, options);
  Solutions out;
  for (const auto& s : sols) out.insert(s.dump());
  CHECK(out.size() == sols.size());
  return out;
}

void check_against(const std::string& task, const Json& payload, const Json& reference,
                   const std::function<Solutions(const Json&)>& oracle) {
  CAPTURE(task);
  CAPTURE(payload.dump());
  Solutions expected = oracle(payload);
  REQUIRE(expected.size() == 1);
  CHECK(*expected.begin() == reference.dump());
  CHECK(count_solutions(task, payload) == 1);
  CHECK(library_solutions(task, payload) == expected);
}

void check_multi(const std::string& task, const Json& payload,
                 const std::function<Solutions(const Json&)>& oracle) {
  CAPTURE(task);
  CAPTURE(payload.dump());
  Solutions expected = oracle(payload);
  CHECK(library_solutions(task, payload) == expected);
  CountOptions two;
  CHECK(count_solutions(task, payload, two) == std::min<std::uint64_t>(expected.size(), 2));
  for (const auto& s : expected) CHECK(verify_answer(builtin_registry(), task, payload, Json::parse(s)));
}

}  // namespace

TEST_CASE("sudoku generator and counter agree with brute force") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Rng rng(seed);
    auto g = seed % 2 ? sudoku_generate(4, 2, 2, 10, rng) : sudoku_generate(6, 2, 3, 16, rng);
    check_against("sudoku", g.payload, g.answer, sudoku_oracle);
    Json loose = g.payload;
    int n = loose["n"];
    for (int i = 0; i < n; ++i) loose["givens"][i][(i * 2) % n] = 0;
    for (int i = 0; i < n; ++i) loose["givens"][i][(i * 2 + 1) % n] = 0;
    check_multi("sudoku", loose, sudoku_oracle);
  }
}

TEST_CASE("prime sudoku sizes are plain Latin squares") {
  Rng rng(3);
  auto g = sudoku_generate(5, 0, 0, 12, rng);
  CHECK(g.payload["latin"] == true);
  check_against("sudoku", g.payload, g.answer, sudoku_oracle);
  CHECK(sudoku_box_shape(5) == std::pair{0, 0});
  CHECK(sudoku_box_shape(9) == std::pair{3, 3});
  CHECK(sudoku_box_shape(6) == std::pair{2, 3});
}

TEST_CASE("futoshiki generator and counter agree with brute force") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    auto g = futoshiki_generate(seed % 2 ? 4 : 5, 5, 12, rng);
    check_against("futoshiki", g.payload, g.answer, futoshiki_oracle);
    Json loose = g.payload;
    loose["inequalities"] = Json::array();
    for (auto& row : loose["givens"]) row[0] = 0;
    check_multi("futoshiki", loose, futoshiki_oracle);
  }
}

TEST_CASE("skyscraper generator and counter agree with brute force") {
  CHECK(visible_count({1, 2, 3, 4}) == 4);
  CHECK(visible_count({4, 3, 2, 1}) == 1);
  CHECK(visible_count({2, 1, 4, 3}) == 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    auto g = skyscraper_generate(seed % 2 ? 4 : 5, 6, rng);
    check_against("skyscraper_puzzle", g.payload, g.answer, skyscraper_oracle);
    Json loose = g.payload;
    int n = loose["n"];
    for (const char* side : {"top", "left"}) {
      for (int i = 0; i < n; ++i) loose[side][i] = 0;
    }
    check_multi("skyscraper_puzzle", loose, skyscraper_oracle);
  }
}

TEST_CASE("campsite generator and counter agree with brute force") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Rng rng(seed);
    auto g = campsite_generate(5, 5, 5, rng);
    check_against("campsite", g.payload, g.answer, campsite_oracle);
    Json loose = g.payload;
    loose["revealed_tents"] = Json::array();
    check_multi("campsite", loose, campsite_oracle);
  }
}

TEST_CASE("star placement generator and counter agree with brute force") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    int n = seed % 2 ? 5 : 6;
    auto g = star_generate(n, 1, rng);
    check_against("star_placement", g.payload, g.answer, star_oracle);

    // Arbitrary region maps give any number of solutions, including none.
    Json random = g.payload;
    std::vector<int> labels;
    for (int i = 0; i < n * n; ++i) labels.push_back(i < n ? i + 1 : rng.uniform_int(1, n));
    rng.shuffle(labels);
    for (int i = 0; i < n * n; ++i) random["regions"][i / n][i % n] = labels[static_cast<std::size_t>(i)];
    check_multi("star_placement", random, star_oracle);
  }
  CHECK(star_arrangement_exists(5, 1));
  CHECK_FALSE(star_arrangement_exists(3, 1));
}

TEST_CASE("numbrix generator and counter agree with brute force") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    auto g = seed % 2 ? numbrix_generate(4, 4, 6, rng) : numbrix_generate(3, 4, 4, rng);
    check_against("numbrix", g.payload, g.answer, numbrix_oracle);
    Json loose = g.payload;
    for (auto& row : loose["givens"]) {
      for (auto& v : row) {
        if (v != 1) v = 0;
      }
    }
    check_multi("numbrix", loose, numbrix_oracle);
  }
}

TEST_CASE("minesweeper generator and counter agree with brute force") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Rng rng(seed);
    auto g = minesweeper_generate(5, 5, 5, Rational::of(1, 2), rng);
    check_against("minesweeper", g.payload, g.answer, minesweeper_oracle);
    Json loose = g.payload;
    int hidden_more = 0;
    for (auto& row : loose["revealed"]) {
      for (auto& v : row) {
        if (v >= 0 && hidden_more < 4) {
          v = -1;
          ++hidden_more;
        }
      }
    }
    check_multi("minesweeper", loose, minesweeper_oracle);
  }
}

TEST_CASE("grid verifiers reject broken answers") {
  const Registry& reg = builtin_registry();
  Rng rng(11);
  auto s = sudoku_generate(4, 2, 2, 8, rng);
  Json swapped = s.answer;
  std::swap(swapped[0][0], swapped[0][1]);
  CHECK_FALSE(verify_answer(reg, "sudoku", s.payload, swapped));
  CHECK_THROWS_AS(verify_answer(reg, "sudoku", s.payload, Json::array({Json::array({1, 2})})), StructuralError);

  auto m = minesweeper_generate(5, 5, 5, Rational::of(1, 2), rng);
  Json fewer = m.answer;
  fewer.erase(fewer.size() - 1);
  CHECK_FALSE(verify_answer(reg, "minesweeper", m.payload, fewer));
}

TEST_CASE("grid answer text round trips") {
  const Registry& reg = builtin_registry();
  for (const char* task : {"sudoku", "futoshiki", "skyscraper_puzzle", "campsite", "star_placement",
                           "numbrix", "minesweeper"}) {
    CAPTURE(task);
    const Task& t = reg.task(task);
    Instance inst = generate_instance(reg, task, t.schema().resolve(Preset::kEasy), 5);
    std::string text = t.format_answer(inst.reference_answer);
    auto parsed = t.parse_answer(inst.payload, text);
    REQUIRE(parsed);
    CHECK(t.verify(inst.payload, *parsed));
    CHECK_FALSE(t.parse_answer(inst.payload, "no answer here"));
  }
  auto g = parse_grid_text("1 2\n3 4", 2, 2);
  REQUIRE(g);
  CHECK(g->at(1, 0) == 3);
  CHECK_FALSE(parse_grid_text("1 2 3", 2, 2));
  auto cells = parse_cells_text("(1,2), (3, 4)");
  REQUIRE(cells);
  CHECK(cells->size() == 2);
}
