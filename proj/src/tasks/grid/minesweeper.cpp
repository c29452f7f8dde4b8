#include <algorithm>
#include <numeric>

#include "internal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::kDirs8;
using detail::SearchBudget;

constexpr int kHidden = -1;
constexpr std::uint64_t kDigBudget = 1'000'000;

struct MineSpec {
  int rows;
  int cols;
  int mines;
  Grid revealed;  // kHidden or the neighbouring mine count
};

MineSpec read_spec(const Json& payload) {
  int rows = static_cast<int>(payload::require_int(payload, "rows", 1, 30));
  int cols = static_cast<int>(payload::require_int(payload, "cols", 1, 30));
  int mines = static_cast<int>(payload::require_int(payload, "mines", 0, rows * cols));
  return MineSpec{rows, cols, mines,
                  grid_from_json(payload::require_field(payload, "revealed"), rows, cols, kHidden, 8)};
}

// Saturating binomial coefficient.
std::uint64_t choose(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result >= cap) return cap;
  }
  return static_cast<std::uint64_t>(result);
}

// Hidden cells next to a number are decided one by one with per-number
// bounds; hidden cells away from every number only contribute a binomial
// factor for the leftover mines.
class MineSolver {
 public:
  explicit MineSolver(const MineSpec& spec) : spec_(spec) {
    int total = spec.rows * spec.cols;
    std::vector<int> var_of(static_cast<std::size_t>(total), -1);
    for (int idx = 0; idx < total; ++idx) {
      if (spec.revealed.cells[static_cast<std::size_t>(idx)] != kHidden) continue;
      bool constrained = false;
      for_neighbors(idx, [&](int nb) {
        if (spec.revealed.cells[static_cast<std::size_t>(nb)] != kHidden) constrained = true;
      });
      if (constrained) {
        var_of[static_cast<std::size_t>(idx)] = static_cast<int>(vars_.size());
        vars_.push_back(idx);
      } else {
        free_.push_back(idx);
      }
    }
    var_numbers_.resize(vars_.size());
    for (int idx = 0; idx < total; ++idx) {
      int v = spec.revealed.cells[static_cast<std::size_t>(idx)];
      if (v == kHidden) continue;
      int number = static_cast<int>(need_.size());
      need_.push_back(v);
      int open = 0;
      for_neighbors(idx, [&](int nb) {
        int var = var_of[static_cast<std::size_t>(nb)];
        if (var >= 0) {
          var_numbers_[static_cast<std::size_t>(var)].push_back(number);
          ++open;
        }
      });
      open_.push_back(open);
    }
  }

  std::uint64_t count(std::uint64_t limit, SearchBudget& budget,
                      std::vector<std::vector<Cell>>* solutions) {
    found_ = 0;
    limit_ = limit;
    if (limit == 0) return 0;
    for (std::size_t i = 0; i < need_.size(); ++i) {
      if (need_[i] > open_[i]) return 0;
    }
    placed_.assign(need_.size(), 0);
    mine_.assign(vars_.size(), 0);
    rec(0, 0, budget, solutions);
    return found_;
  }

 private:
  template <typename Fn>
  void for_neighbors(int idx, Fn&& fn) const {
    int r = idx / spec_.cols, c = idx % spec_.cols;
    for (const auto& d : kDirs8) {
      int rr = r + d[0], cc = c + d[1];
      if (rr >= 0 && rr < spec_.rows && cc >= 0 && cc < spec_.cols) fn(rr * spec_.cols + cc);
    }
  }

  void rec(std::size_t k, int mines, SearchBudget& budget,
           std::vector<std::vector<Cell>>* solutions) {
    budget.tick();
    if (mines > spec_.mines) return;
    if (k == vars_.size()) {
      int rest = spec_.mines - mines;
      std::uint64_t ways = choose(static_cast<int>(free_.size()), rest, limit_ - found_);
      if (solutions) {
        // Enumerate the leftover-mine layouts in lexicographic order.
        std::vector<int> pick(static_cast<std::size_t>(rest));
        std::iota(pick.begin(), pick.end(), 0);
        for (std::uint64_t w = 0; w < ways; ++w) {
          std::vector<Cell> cells;
          for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (mine_[i]) cells.push_back(cell_of(vars_[i]));
          }
          for (int p : pick) cells.push_back(cell_of(free_[static_cast<std::size_t>(p)]));
          solutions->push_back(std::move(cells));
          int i = rest - 1;
          int f = static_cast<int>(free_.size());
          while (i >= 0 && pick[static_cast<std::size_t>(i)] == f - rest + i) --i;
          if (i < 0) break;
          ++pick[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < rest; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
          }
        }
      }
      found_ += ways;
      return;
    }
    const auto& numbers = var_numbers_[k];
    for (int m : numbers) --open_[static_cast<std::size_t>(m)];
    for (int is_mine = 0; is_mine <= 1 && found_ < limit_; ++is_mine) {
      bool ok = true;
      for (int m : numbers) {
        auto um = static_cast<std::size_t>(m);
        placed_[um] += is_mine;
        if (placed_[um] > need_[um] || placed_[um] + open_[um] < need_[um]) ok = false;
      }
      mine_[k] = static_cast<char>(is_mine);
      if (ok) rec(k + 1, mines + is_mine, budget, solutions);
      for (int m : numbers) placed_[static_cast<std::size_t>(m)] -= is_mine;
    }
    mine_[k] = 0;
    for (int m : numbers) ++open_[static_cast<std::size_t>(m)];
  }

  Cell cell_of(int idx) const { return Cell{idx / spec_.cols, idx % spec_.cols}; }

  const MineSpec& spec_;
  std::vector<int> vars_;
  std::vector<int> free_;
  std::vector<std::vector<int>> var_numbers_;
  std::vector<int> need_;
  std::vector<int> open_;
  std::vector<int> placed_;
  std::vector<char> mine_;
  std::uint64_t found_ = 0;
  std::uint64_t limit_ = 0;
};

bool unique_under(const MineSpec& spec) {
  return detail::provably_unique([&] {
    MineSolver solver(spec);
    SearchBudget budget(kDigBudget);
    return solver.count(2, budget, nullptr);
  });
}

class MinesweeperTask : public detail::CellSetAnswerTask {
 public:
  MinesweeperTask()
      : CellSetAnswerTask(
            "minesweeper",
            {tasks::int_param("rows", 2, 10, 5, 8, "grid rows"),
             tasks::int_param("cols", 2, 10, 5, 8, "grid columns"),
             tasks::int_param("mines", 1, 40, 5, 12, "hidden mines"),
             tasks::rational_param("revealed_fraction", 0, 1, Rational::of(1, 2), Rational::of(1, 3),
                                   "target share of safe cells shown", false)}) {}

  void check_params(const DifficultyParams& params) const override {
    if (params.get_small("mines") >= params.get_small("rows") * params.get_small("cols")) {
      throw ParamError("minesweeper: mines must be fewer than rows*cols");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return minesweeper_generate(params.get_small("rows"), params.get_small("cols"),
                                params.get_small("mines"), params.get("revealed_fraction"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    auto mines = cells_from_json(answer, spec.rows, spec.cols);
    if (static_cast<int>(mines.size()) != spec.mines) return false;
    Grid layout(spec.rows, spec.cols);
    for (const auto& m : mines) {
      if (spec.revealed.at(m.r, m.c) != kHidden) return false;
      layout.at(m.r, m.c) = 1;
    }
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        int shown = spec.revealed.at(r, c);
        if (shown == kHidden) continue;
        int around = 0;
        for (const auto& d : kDirs8) {
          int rr = r + d[0], cc = c + d[1];
          if (layout.in_bounds(rr, cc)) around += layout.at(rr, cc);
        }
        if (around != shown) return false;
      }
    }
    return true;
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string picture;
    for (int r = 0; r < spec.rows; ++r) {
      if (r > 0) picture.push_back('\n');
      for (int c = 0; c < spec.cols; ++c) {
        if (c > 0) picture.push_back(' ');
        int v = spec.revealed.at(r, c);
        picture.push_back(v == kHidden ? '?' : static_cast<char>('0' + v));
      }
    }
    return "The following " + detail::dims(spec.rows, spec.cols) +
           " Minesweeper board hides exactly " + std::to_string(spec.mines) +
           (spec.mines == 1 ? " mine" : " mines") +
           ". A number is a revealed cell without a mine and states how many mines lie in the "
           "eight cells around it (including diagonals). A ? is a hidden cell that may or may "
           "not hold a mine. Find where every mine is.\n\n" +
           picture +
           "\n\nGive the positions of all mines as (row,column) pairs with 1-based indices "
           "separated by commas, for example (1,2), (3,4).";
  }

 protected:
  std::pair<int, int> board_shape(const Json& payload) const override {
    return {static_cast<int>(payload::require_int(payload, "rows", 1, 30)),
            static_cast<int>(payload::require_int(payload, "cols", 1, 30))};
  }
};

}  // namespace

Generated minesweeper_generate(int rows, int cols, int mines, Rational revealed_fraction,
                               Rng& rng) {
  if (rows < 1 || rows > 30 || cols < 1 || cols > 30) {
    throw ParamError("minesweeper: grid dimensions out of range");
  }
  int total = rows * cols;
  if (mines < 0 || mines >= total) throw ParamError("minesweeper: mines must be in [0, rows*cols)");
  if (revealed_fraction < Rational(0) || revealed_fraction > Rational(1)) {
    throw ParamError("minesweeper: revealed_fraction must be in [0, 1]");
  }
  std::vector<int> cells(static_cast<std::size_t>(total));
  std::iota(cells.begin(), cells.end(), 0);
  rng.shuffle(cells);
  Grid layout(rows, cols);
  std::vector<Cell> mine_cells;
  for (int i = 0; i < mines; ++i) {
    int idx = cells[static_cast<std::size_t>(i)];
    layout.cells[static_cast<std::size_t>(idx)] = 1;
    mine_cells.push_back(Cell{idx / cols, idx % cols});
  }

  MineSpec spec{rows, cols, mines, Grid(rows, cols, kHidden)};
  std::vector<int> safe;
  for (int idx = 0; idx < total; ++idx) {
    if (layout.cells[static_cast<std::size_t>(idx)]) continue;
    int r = idx / cols, c = idx % cols, around = 0;
    for (const auto& d : kDirs8) {
      int rr = r + d[0], cc = c + d[1];
      if (layout.in_bounds(rr, cc)) around += layout.at(rr, cc);
    }
    spec.revealed.cells[static_cast<std::size_t>(idx)] = around;
    safe.push_back(idx);
  }

  // ceil(fraction * safe cells)
  auto safe_count = static_cast<std::int64_t>(safe.size());
  std::int64_t target = (revealed_fraction.num() * safe_count + revealed_fraction.den() - 1) /
                        revealed_fraction.den();
  std::int64_t shown = safe_count;
  rng.shuffle(safe);
  for (int idx : safe) {
    if (shown <= target) break;
    int keep = spec.revealed.cells[static_cast<std::size_t>(idx)];
    spec.revealed.cells[static_cast<std::size_t>(idx)] = kHidden;
    if (unique_under(spec)) {
      --shown;
    } else {
      spec.revealed.cells[static_cast<std::size_t>(idx)] = keep;
    }
  }

  Json p = payload::new_payload();
  p["rows"] = rows;
  p["cols"] = cols;
  p["mines"] = mines;
  p["revealed"] = grid_to_json(spec.revealed);
  return Generated{std::move(p), cells_to_json(std::move(mine_cells))};
}

namespace detail {

std::uint64_t count_minesweeper(const Json& payload, CountOptions options,
                                std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  MineSolver solver(spec);
  SearchBudget budget(options.node_budget);
  std::vector<std::vector<Cell>> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    if (found.size() > options.limit) found.resize(options.limit);
    for (auto& mines : found) solutions->push_back(cells_to_json(std::move(mines)));
  }
  return std::min(count, options.limit);
}

}  // namespace detail

std::shared_ptr<const Task> make_minesweeper_task() { return std::make_shared<MinesweeperTask>(); }

}  // namespace logicforge::grid
