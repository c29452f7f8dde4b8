#include <algorithm>
#include <bit>
#include <numeric>

#include "internal.h"
#include "latin_solver.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::SearchBudget;

constexpr std::uint64_t kGenBudget = 1'000'000;

struct SkyscraperSpec {
  int n;
  SkyscraperClues clues;  // 0 = hidden
  Grid givens;
};

SkyscraperSpec read_spec(const Json& payload) {
  int n = static_cast<int>(payload::require_int(payload, "n", 1, 9));
  auto side = [&](const char* key) {
    return payload::require_int_array(payload, key, static_cast<std::size_t>(n), 0, n);
  };
  SkyscraperSpec spec{n, {side("top"), side("bottom"), side("left"), side("right")},
                      grid_from_json(payload::require_field(payload, "givens"), n, n, 0, n)};
  return spec;
}

// Row-major backtracking. Visibility from the left and top is tracked
// incrementally and bounded by the number of still-unused taller heights;
// right and bottom clues are checked once their line is complete.
class SkyscraperSolver {
 public:
  explicit SkyscraperSolver(const SkyscraperSpec& spec)
      : spec_(spec),
        n_(spec.n),
        full_((1u << spec.n) - 1),
        cells_(static_cast<std::size_t>(n_ * n_), 0),
        row_used_(static_cast<std::size_t>(n_), 0),
        col_used_(static_cast<std::size_t>(n_), 0),
        row_max_(static_cast<std::size_t>(n_), 0),
        row_vis_(static_cast<std::size_t>(n_), 0),
        col_max_(static_cast<std::size_t>(n_), 0),
        col_vis_(static_cast<std::size_t>(n_), 0) {}

  std::uint64_t count(std::uint64_t limit, SearchBudget& budget, std::vector<Grid>* solutions) {
    found_ = 0;
    limit_ = limit;
    if (limit == 0) return 0;
    // Repeated givens in one line can never be completed.
    for (int r = 0; r < n_; ++r) {
      std::uint32_t row = 0;
      std::uint32_t col = 0;
      for (int c = 0; c < n_; ++c) {
        int a = spec_.givens.at(r, c);
        int b = spec_.givens.at(c, r);
        if (a && (row & (1u << (a - 1)))) return 0;
        if (b && (col & (1u << (b - 1)))) return 0;
        if (a) row |= 1u << (a - 1);
        if (b) col |= 1u << (b - 1);
      }
    }
    rec(0, budget, solutions);
    return found_;
  }

 private:
  bool line_ok(int r, int c) const {
    auto ur = static_cast<std::size_t>(r);
    auto uc = static_cast<std::size_t>(c);
    int left = spec_.clues.left[ur];
    if (left > 0) {
      int vis = row_vis_[ur];
      int mx = row_max_[ur];
      std::uint32_t unused = full_ & ~row_used_[ur];
      if (vis > left) return false;
      if (vis + std::popcount(unused >> mx) < left) return false;
      if (mx < n_ && vis + 1 > left) return false;
    }
    int top = spec_.clues.top[uc];
    if (top > 0) {
      int vis = col_vis_[uc];
      int mx = col_max_[uc];
      std::uint32_t unused = full_ & ~col_used_[uc];
      if (vis > top) return false;
      if (vis + std::popcount(unused >> mx) < top) return false;
      if (mx < n_ && vis + 1 > top) return false;
    }
    if (c == n_ - 1 && spec_.clues.right[ur] > 0) {
      int vis = 0, mx = 0;
      for (int k = n_ - 1; k >= 0; --k) {
        int h = cells_[static_cast<std::size_t>(r * n_ + k)];
        if (h > mx) ++vis, mx = h;
      }
      if (vis != spec_.clues.right[ur]) return false;
    }
    if (r == n_ - 1 && spec_.clues.bottom[uc] > 0) {
      int vis = 0, mx = 0;
      for (int k = n_ - 1; k >= 0; --k) {
        int h = cells_[static_cast<std::size_t>(k * n_ + c)];
        if (h > mx) ++vis, mx = h;
      }
      if (vis != spec_.clues.bottom[uc]) return false;
    }
    return true;
  }

  void rec(int idx, SearchBudget& budget, std::vector<Grid>* solutions) {
    budget.tick();
    if (idx == n_ * n_) {
      ++found_;
      if (solutions) {
        Grid g(n_, n_);
        g.cells = cells_;
        solutions->push_back(std::move(g));
      }
      return;
    }
    int r = idx / n_;
    int c = idx % n_;
    auto ur = static_cast<std::size_t>(r);
    auto uc = static_cast<std::size_t>(c);
    std::uint32_t mask = full_ & ~row_used_[ur] & ~col_used_[uc];
    int given = spec_.givens.at(r, c);
    if (given) mask &= 1u << (given - 1);
    while (mask && found_ < limit_) {
      int v = std::countr_zero(mask) + 1;
      mask &= mask - 1;
      std::uint32_t bit = 1u << (v - 1);
      int saved[4] = {row_max_[ur], row_vis_[ur], col_max_[uc], col_vis_[uc]};
      cells_[static_cast<std::size_t>(idx)] = v;
      row_used_[ur] |= bit;
      col_used_[uc] |= bit;
      if (v > row_max_[ur]) row_max_[ur] = v, ++row_vis_[ur];
      if (v > col_max_[uc]) col_max_[uc] = v, ++col_vis_[uc];
      if (line_ok(r, c)) rec(idx + 1, budget, solutions);
      row_max_[ur] = saved[0];
      row_vis_[ur] = saved[1];
      col_max_[uc] = saved[2];
      col_vis_[uc] = saved[3];
      row_used_[ur] &= ~bit;
      col_used_[uc] &= ~bit;
      cells_[static_cast<std::size_t>(idx)] = 0;
    }
  }

  const SkyscraperSpec& spec_;
  int n_;
  std::uint32_t full_;
  std::vector<int> cells_;
  std::vector<std::uint32_t> row_used_;
  std::vector<std::uint32_t> col_used_;
  std::vector<int> row_max_;
  std::vector<int> row_vis_;
  std::vector<int> col_max_;
  std::vector<int> col_vis_;
  std::uint64_t found_ = 0;
  std::uint64_t limit_ = 0;
};

bool unique_under(const SkyscraperSpec& spec) {
  return detail::provably_unique([&] {
    SkyscraperSolver solver(spec);
    SearchBudget budget(kGenBudget);
    return solver.count(2, budget, nullptr);
  });
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += std::to_string(values[i]);
  }
  return out;
}

class SkyscraperTask : public detail::GridAnswerTask {
 public:
  SkyscraperTask()
      : GridAnswerTask("skyscraper_puzzle",
                       {tasks::int_param("n", 3, 6, 4, 5, "side length"),
                        tasks::int_param("hidden_clues", 0, 24, 4, 8,
                                         "edge clues withheld out of 4n")}) {}

  void check_params(const DifficultyParams& params) const override {
    if (params.get_small("hidden_clues") > 4 * params.get_small("n")) {
      throw ParamError("skyscraper_puzzle: hidden_clues must be at most 4n");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return skyscraper_generate(params.get_small("n"), params.get_small("hidden_clues"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    int n = spec.n;
    Grid g = detail::answer_grid(answer, n, n);
    for (int i = 0; i < n * n; ++i) {
      int v = g.cells[static_cast<std::size_t>(i)];
      if (v < 1 || v > n) return false;
      int given = spec.givens.cells[static_cast<std::size_t>(i)];
      if (given != 0 && given != v) return false;
    }
    SkyscraperClues actual;
    try {
      actual = skyscraper_clues(g);
    } catch (const StructuralError&) {
      return false;  // repeated height in a line
    }
    auto matches = [](const std::vector<int>& want, const std::vector<int>& got) {
      for (std::size_t i = 0; i < want.size(); ++i) {
        if (want[i] != 0 && want[i] != got[i]) return false;
      }
      return true;
    };
    return matches(spec.clues.top, actual.top) && matches(spec.clues.bottom, actual.bottom) &&
           matches(spec.clues.left, actual.left) && matches(spec.clues.right, actual.right);
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string n = std::to_string(spec.n);
    std::string out =
        "Solve the following " + detail::dims(spec.n, spec.n) +
        " Skyscraper puzzle. Place a building of height 1 to " + n +
        " in every cell so that each row and each column contains every height exactly once. "
        "An edge clue states how many buildings can be seen from that edge looking along its row "
        "or column; a taller building hides every shorter one behind it. A clue of 0 means no "
        "clue is given.\n\n";
    out += "Top clues (columns 1 to " + n + ", looking down): " + join_ints(spec.clues.top) + "\n";
    out += "Bottom clues (columns 1 to " + n + ", looking up): " + join_ints(spec.clues.bottom) +
           "\n";
    out += "Left clues (rows 1 to " + n + ", looking right): " + join_ints(spec.clues.left) + "\n";
    out += "Right clues (rows 1 to " + n + ", looking left): " + join_ints(spec.clues.right);
    out += "\n\nGrid (0 marks an empty cell, other numbers are given heights):\n" +
           format_grid(spec.givens);
    out += "\n\nGive the completed grid as " + n + " lines of " + n +
           " numbers separated by spaces.";
    return out;
  }

 protected:
  std::pair<int, int> answer_shape(const Json& payload) const override {
    int n = static_cast<int>(payload::require_int(payload, "n", 1, 9));
    return {n, n};
  }
};

}  // namespace

int visible_count(const std::vector<int>& line) {
  int visible = 0;
  int tallest = 0;
  for (int h : line) {
    if (h > tallest) {
      ++visible;
      tallest = h;
    }
  }
  return visible;
}

SkyscraperClues skyscraper_clues(const Grid& latin) {
  int n = latin.rows;
  if (latin.cols != n || n < 1) throw StructuralError("skyscraper: grid must be square");
  for (int i = 0; i < n; ++i) {
    std::vector<bool> row_seen(static_cast<std::size_t>(n + 1)), col_seen(row_seen);
    for (int j = 0; j < n; ++j) {
      int a = latin.at(i, j);
      int b = latin.at(j, i);
      if (a < 1 || a > n || b < 1 || b > n || row_seen[static_cast<std::size_t>(a)] ||
          col_seen[static_cast<std::size_t>(b)]) {
        throw StructuralError("skyscraper: grid is not a Latin square over 1..n");
      }
      row_seen[static_cast<std::size_t>(a)] = true;
      col_seen[static_cast<std::size_t>(b)] = true;
    }
  }
  SkyscraperClues clues;
  for (int i = 0; i < n; ++i) {
    std::vector<int> row, col;
    for (int j = 0; j < n; ++j) {
      row.push_back(latin.at(i, j));
      col.push_back(latin.at(j, i));
    }
    clues.top.push_back(visible_count(col));
    clues.left.push_back(visible_count(row));
    std::reverse(row.begin(), row.end());
    std::reverse(col.begin(), col.end());
    clues.bottom.push_back(visible_count(col));
    clues.right.push_back(visible_count(row));
  }
  return clues;
}

Generated skyscraper_generate(int n, int hidden_clues, Rng& rng) {
  if (n < 1 || n > 9) throw ParamError("skyscraper_puzzle: n must be in [1, 9]");
  if (hidden_clues < 0 || hidden_clues > 4 * n) {
    throw ParamError("skyscraper_puzzle: hidden_clues out of range");
  }
  Grid latin = detail::random_latin(n, 0, 0, rng);
  SkyscraperSpec spec{n, skyscraper_clues(latin), Grid(n, n)};

  std::vector<int> slots(static_cast<std::size_t>(4 * n));
  std::iota(slots.begin(), slots.end(), 0);
  rng.shuffle(slots);
  std::vector<int>* sides[4] = {&spec.clues.top, &spec.clues.bottom, &spec.clues.left,
                                &spec.clues.right};
  for (int i = 0; i < hidden_clues; ++i) {
    int s = slots[static_cast<std::size_t>(i)];
    (*sides[s / n])[static_cast<std::size_t>(s % n)] = 0;
  }

  // Reveal cells until the clues pin down the grid, then drop the reveals
  // that turned out unnecessary.
  std::vector<int> order(static_cast<std::size_t>(n * n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> revealed;
  for (int idx : order) {
    if (unique_under(spec)) break;
    spec.givens.cells[static_cast<std::size_t>(idx)] = latin.cells[static_cast<std::size_t>(idx)];
    revealed.push_back(idx);
  }
  for (int idx : revealed) {
    int keep = spec.givens.cells[static_cast<std::size_t>(idx)];
    spec.givens.cells[static_cast<std::size_t>(idx)] = 0;
    if (!unique_under(spec)) spec.givens.cells[static_cast<std::size_t>(idx)] = keep;
  }

  Json p = payload::new_payload();
  p["n"] = n;
  p["top"] = spec.clues.top;
  p["bottom"] = spec.clues.bottom;
  p["left"] = spec.clues.left;
  p["right"] = spec.clues.right;
  p["givens"] = grid_to_json(spec.givens);
  return Generated{std::move(p), grid_to_json(latin)};
}

namespace detail {

std::uint64_t count_skyscraper(const Json& payload, CountOptions options,
                               std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  SkyscraperSolver solver(spec);
  SearchBudget budget(options.node_budget);
  std::vector<Grid> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    for (const auto& g : found) solutions->push_back(grid_to_json(g));
  }
  return count;
}

}  // namespace detail

std::shared_ptr<const Task> make_skyscraper_task() { return std::make_shared<SkyscraperTask>(); }

}  // namespace logicforge::grid
