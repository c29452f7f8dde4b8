#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>

#include "internal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::kDirs4;
using detail::SearchBudget;

constexpr std::uint64_t kGenBudget = 2'000'000;
constexpr int kRepairRounds = 400;

struct StarSpec {
  int n;
  int k;
  Grid regions;  // 0-based region ids
};

StarSpec read_spec(const Json& payload) {
  int n = static_cast<int>(payload::require_int(payload, "n", 1, 12));
  int k = static_cast<int>(payload::require_int(payload, "k", 1, 3));
  Grid regions = grid_from_json(payload::require_field(payload, "regions"), n, n, 1, n);
  std::vector<bool> used(static_cast<std::size_t>(n));
  for (auto& v : regions.cells) {
    --v;
    used[static_cast<std::size_t>(v)] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw StructuralError("star_placement: every region id 1..n must occur");
  }
  return StarSpec{n, k, std::move(regions)};
}

// Row patterns with exactly k stars and no two side by side.
std::vector<std::uint32_t> row_masks(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) == k && (m & (m << 1)) == 0) out.push_back(m);
  }
  return out;
}

std::uint32_t shadow(std::uint32_t m) { return m | (m << 1) | (m >> 1); }

// Row-by-row search over star patterns. Columns and regions are capped at k
// and must still be able to reach k from the rows below.
class StarSolver {
 public:
  // An empty region grid searches arrangements that ignore regions.
  StarSolver(int n, int k, const Grid* regions)
      : n_(n), k_(k), regions_(regions), masks_(row_masks(n, k)) {
    col_count_.assign(static_cast<std::size_t>(n), 0);
    if (regions_) {
      region_count_.assign(static_cast<std::size_t>(n), 0);
      // reach_[r][g]: stars region g can still collect in rows r..n-1.
      reach_.assign(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n), 0));
      for (int r = n - 1; r >= 0; --r) {
        std::vector<int> in_row(static_cast<std::size_t>(n), 0);
        for (int c = 0; c < n; ++c) ++in_row[static_cast<std::size_t>(regions_->at(r, c))];
        for (int g = 0; g < n; ++g) {
          auto ug = static_cast<std::size_t>(g);
          reach_[static_cast<std::size_t>(r)][ug] =
              reach_[static_cast<std::size_t>(r + 1)][ug] + std::min(in_row[ug], k);
        }
      }
    }
  }

  std::uint64_t count(std::uint64_t limit, SearchBudget& budget,
                      std::vector<std::vector<std::uint32_t>>* solutions, Rng* rng = nullptr) {
    found_ = 0;
    limit_ = limit;
    rng_ = rng;
    rows_.assign(static_cast<std::size_t>(n_), 0);
    if (limit == 0 || masks_.empty()) return 0;
    rec(0, 0, budget, solutions);
    return found_;
  }

 private:
  bool apply(int row, std::uint32_t m, int delta) {
    bool ok = true;
    for (std::uint32_t bits = m; bits; bits &= bits - 1) {
      int c = std::countr_zero(bits);
      auto uc = static_cast<std::size_t>(c);
      col_count_[uc] += delta;
      if (col_count_[uc] > k_) ok = false;
      if (regions_) {
        auto g = static_cast<std::size_t>(regions_->at(row, c));
        region_count_[g] += delta;
        if (region_count_[g] > k_) ok = false;
      }
    }
    return ok;
  }

  bool reachable(int row) const {
    int rest = n_ - row - 1;
    for (int c = 0; c < n_; ++c) {
      if (col_count_[static_cast<std::size_t>(c)] + (rest + 1) / 2 < k_) return false;
    }
    if (regions_) {
      for (int g = 0; g < n_; ++g) {
        auto ug = static_cast<std::size_t>(g);
        if (region_count_[ug] + reach_[static_cast<std::size_t>(row + 1)][ug] < k_) return false;
      }
    }
    return true;
  }

  void rec(int row, std::uint32_t prev, SearchBudget& budget,
           std::vector<std::vector<std::uint32_t>>* solutions) {
    budget.tick();
    if (row == n_) {
      ++found_;
      if (solutions) solutions->push_back(rows_);
      return;
    }
    std::vector<std::uint32_t> order;
    const std::vector<std::uint32_t>* options = &masks_;
    if (rng_) {
      order = masks_;
      rng_->shuffle(order);
      options = &order;
    }
    std::uint32_t blocked = shadow(prev);
    for (std::uint32_t m : *options) {
      if (found_ >= limit_) break;
      if (m & blocked) continue;
      bool ok = apply(row, m, 1);
      if (ok && reachable(row)) {
        rows_[static_cast<std::size_t>(row)] = m;
        rec(row + 1, m, budget, solutions);
      }
      apply(row, m, -1);
    }
  }

  int n_;
  int k_;
  const Grid* regions_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> col_count_;
  std::vector<int> region_count_;
  std::vector<std::vector<int>> reach_;
  std::vector<std::uint32_t> rows_;
  std::uint64_t found_ = 0;
  std::uint64_t limit_ = 0;
  Rng* rng_ = nullptr;
};

std::vector<Cell> stars_of(const std::vector<std::uint32_t>& rows) {
  std::vector<Cell> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::uint32_t bits = rows[r]; bits; bits &= bits - 1) {
      out.push_back(Cell{static_cast<int>(r), std::countr_zero(bits)});
    }
  }
  return out;
}

// Grows one region per seed by repeatedly annexing a random unowned cell that
// touches an owned one.
Grid grow_regions(int n, const std::vector<Cell>& seeds, Rng& rng) {
  Grid owner(n, n, -1);
  for (std::size_t i = 0; i < seeds.size(); ++i) owner.at(seeds[i].r, seeds[i].c) = static_cast<int>(i);
  int unowned = n * n - static_cast<int>(seeds.size());
  std::vector<std::pair<Cell, int>> frontier;
  while (unowned > 0) {
    frontier.clear();
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (owner.at(r, c) >= 0) continue;
        for (const auto& d : kDirs4) {
          int rr = r + d[0], cc = c + d[1];
          if (owner.in_bounds(rr, cc) && owner.at(rr, cc) >= 0) {
            frontier.push_back({Cell{r, c}, owner.at(rr, cc)});
          }
        }
      }
    }
    auto [cell, id] = rng.pick(frontier);
    owner.at(cell.r, cell.c) = id;
    --unowned;
  }
  return owner;
}

// Pairs up 2n seed regions into n adjacent pairs. Returns false when no
// perfect pairing exists.
bool pair_regions(int count, const std::vector<std::vector<bool>>& adjacent, Rng& rng,
                  std::vector<int>& partner, int& nodes) {
  int first = -1;
  for (int i = 0; i < count; ++i) {
    if (partner[static_cast<std::size_t>(i)] < 0) {
      first = i;
      break;
    }
  }
  if (first < 0) return true;
  if (++nodes > 100'000) return false;
  std::vector<int> options;
  for (int j = first + 1; j < count; ++j) {
    if (partner[static_cast<std::size_t>(j)] < 0 &&
        adjacent[static_cast<std::size_t>(first)][static_cast<std::size_t>(j)]) {
      options.push_back(j);
    }
  }
  rng.shuffle(options);
  for (int j : options) {
    partner[static_cast<std::size_t>(first)] = j;
    partner[static_cast<std::size_t>(j)] = first;
    if (pair_regions(count, adjacent, rng, partner, nodes)) return true;
    partner[static_cast<std::size_t>(first)] = -1;
    partner[static_cast<std::size_t>(j)] = -1;
  }
  return false;
}

bool region_connected_without(const Grid& regions, int id, Cell removed) {
  int n = regions.rows;
  std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
  std::deque<Cell> queue;
  int total = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (regions.at(r, c) != id || Cell{r, c} == removed) continue;
      ++total;
      if (queue.empty()) {
        queue.push_back(Cell{r, c});
        seen[static_cast<std::size_t>(r * n + c)] = 1;
      }
    }
  }
  int reached = 0;
  while (!queue.empty()) {
    Cell cell = queue.front();
    queue.pop_front();
    ++reached;
    for (const auto& d : kDirs4) {
      int r = cell.r + d[0], c = cell.c + d[1];
      if (!regions.in_bounds(r, c) || regions.at(r, c) != id || Cell{r, c} == removed) continue;
      auto idx = static_cast<std::size_t>(r * n + c);
      if (seen[idx]) continue;
      seen[idx] = 1;
      queue.push_back(Cell{r, c});
    }
  }
  return total > 0 && reached == total;
}

Json make_payload(int n, int k, const Grid& regions) {
  Json p = payload::new_payload();
  p["n"] = n;
  p["k"] = k;
  Grid shown = regions;
  for (auto& v : shown.cells) ++v;
  p["regions"] = grid_to_json(shown);
  return p;
}

class StarPlacementTask : public detail::CellSetAnswerTask {
 public:
  StarPlacementTask()
      : CellSetAnswerTask("star_placement",
                          {tasks::int_param("n", 4, 10, 5, 8, "side length and region count"),
                           tasks::int_param("k", 1, 2, 1, 2, "stars per row, column and region")}) {}

  void check_params(const DifficultyParams& params) const override {
    int n = params.get_small("n");
    int k = params.get_small("k");
    if (!star_arrangement_exists(n, k)) {
      throw ParamError("star_placement: no arrangement of " + std::to_string(k) +
                       " stars per line exists on a " + detail::dims(n, n) + " board");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return star_generate(params.get_small("n"), params.get_small("k"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    int n = spec.n;
    auto stars = cells_from_json(answer, n, n);
    std::vector<int> rows(static_cast<std::size_t>(n)), cols(rows), regions(rows);
    for (const auto& s : stars) {
      ++rows[static_cast<std::size_t>(s.r)];
      ++cols[static_cast<std::size_t>(s.c)];
      ++regions[static_cast<std::size_t>(spec.regions.at(s.r, s.c))];
      for (const auto& t : stars) {
        if (!(s == t) && std::abs(s.r - t.r) <= 1 && std::abs(s.c - t.c) <= 1) return false;
      }
    }
    for (int i = 0; i < n; ++i) {
      auto ui = static_cast<std::size_t>(i);
      if (rows[ui] != spec.k || cols[ui] != spec.k || regions[ui] != spec.k) return false;
    }
    return true;
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string picture;
    for (int r = 0; r < spec.n; ++r) {
      if (r > 0) picture.push_back('\n');
      for (int c = 0; c < spec.n; ++c) {
        if (c > 0) picture.push_back(' ');
        picture.push_back(static_cast<char>('A' + spec.regions.at(r, c)));
      }
    }
    std::string k = std::to_string(spec.k);
    std::string stars = spec.k == 1 ? "star" : "stars";
    return "Place stars on the following " + detail::dims(spec.n, spec.n) +
           " grid, which is divided into " + std::to_string(spec.n) +
           " regions marked by letters. Every row, every column and every region must contain "
           "exactly " + k + " " + stars +
           ", and no two stars may touch each other, not even diagonally.\n\n" + picture +
           "\n\nGive the positions of all stars as (row,column) pairs with 1-based indices "
           "separated by commas, for example (1,2), (3,4).";
  }

 protected:
  std::pair<int, int> board_shape(const Json& payload) const override {
    int n = static_cast<int>(payload::require_int(payload, "n", 1, 12));
    return {n, n};
  }
};

}  // namespace

bool star_arrangement_exists(int n, int k) {
  if (n < 1 || n > 12 || k < 1) return false;
  StarSolver solver(n, k, nullptr);
  SearchBudget budget(kDefaultNodeBudget);
  return solver.count(1, budget, nullptr) == 1;
}

Generated star_generate(int n, int k, Rng& rng) {
  if (n < 1 || n > 12 || k < 1 || k > 3) throw ParamError("star_placement: n or k out of range");
  if (!star_arrangement_exists(n, k)) {
    throw ParamError("star_placement: no arrangement of " + std::to_string(k) +
                     " stars per line exists on a " + detail::dims(n, n) + " board");
  }
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    StarSolver free_solver(n, k, nullptr);
    std::vector<std::vector<std::uint32_t>> picked;
    SearchBudget pick_budget(kGenBudget);
    try {
      if (free_solver.count(1, pick_budget, &picked, &rng) != 1) continue;
    } catch (const BudgetExceeded&) {
      continue;
    }
    std::vector<Cell> stars = stars_of(picked[0]);
    std::vector<char> is_star(static_cast<std::size_t>(n * n), 0);
    for (const auto& s : stars) is_star[static_cast<std::size_t>(s.r * n + s.c)] = 1;

    Grid regions;
    if (k == 1) {
      regions = grow_regions(n, stars, rng);
    } else {
      // Grow one region per star, then merge adjacent regions pairwise.
      Grid pieces = grow_regions(n, stars, rng);
      int count = static_cast<int>(stars.size());
      std::vector<std::vector<bool>> adjacent(static_cast<std::size_t>(count),
                                              std::vector<bool>(static_cast<std::size_t>(count)));
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          for (const auto& d : kDirs4) {
            int rr = r + d[0], cc = c + d[1];
            if (!pieces.in_bounds(rr, cc)) continue;
            int a = pieces.at(r, c), b = pieces.at(rr, cc);
            if (a != b) adjacent[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
          }
        }
      }
      std::vector<int> partner(static_cast<std::size_t>(count), -1);
      int nodes = 0;
      if (!pair_regions(count, adjacent, rng, partner, nodes)) continue;
      std::vector<int> merged(static_cast<std::size_t>(count), -1);
      int next = 0;
      for (int i = 0; i < count; ++i) {
        if (merged[static_cast<std::size_t>(i)] >= 0) continue;
        merged[static_cast<std::size_t>(i)] = next;
        merged[static_cast<std::size_t>(partner[static_cast<std::size_t>(i)])] = next;
        ++next;
      }
      regions = pieces;
      for (auto& v : regions.cells) v = merged[static_cast<std::size_t>(v)];
    }

    // While another arrangement fits, hand one of its stray star cells to a
    // neighbouring region; the intended stars stay valid, the stray one no
    // longer does.
    bool unique = false;
    for (int round = 0; round < kRepairRounds; ++round) {
      StarSolver solver(n, k, &regions);
      std::vector<std::vector<std::uint32_t>> found;
      SearchBudget budget(kGenBudget);
      try {
        if (solver.count(2, budget, &found) == 1) {
          unique = true;
          break;
        }
      } catch (const BudgetExceeded&) {
        break;
      }
      std::vector<std::vector<Cell>> alternatives;
      for (const auto& rows : found) {
        auto cells = stars_of(rows);
        std::vector<Cell> stray;
        for (const auto& c : cells) {
          if (!is_star[static_cast<std::size_t>(c.r * n + c.c)]) stray.push_back(c);
        }
        if (!stray.empty()) alternatives.push_back(std::move(stray));
      }
      if (alternatives.empty()) break;
      std::vector<Cell>& stray = rng.pick(alternatives);
      rng.shuffle(stray);
      bool moved = false;
      for (const auto& cell : stray) {
        int from = regions.at(cell.r, cell.c);
        std::vector<int> targets;
        for (const auto& d : kDirs4) {
          int r = cell.r + d[0], c = cell.c + d[1];
          if (regions.in_bounds(r, c) && regions.at(r, c) != from) targets.push_back(regions.at(r, c));
        }
        if (targets.empty() || !region_connected_without(regions, from, cell)) continue;
        regions.at(cell.r, cell.c) = rng.pick(targets);
        moved = true;
        break;
      }
      if (!moved) break;
    }
    if (!unique) continue;
    return Generated{make_payload(n, k, regions), cells_to_json(stars)};
  }
  throw GenerationExhausted("star_placement: no unique board", kMaxGenerationAttempts);
}

namespace detail {

std::uint64_t count_star_placement(const Json& payload, CountOptions options,
                                   std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  StarSolver solver(spec.n, spec.k, &spec.regions);
  SearchBudget budget(options.node_budget);
  std::vector<std::vector<std::uint32_t>> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    for (const auto& rows : found) solutions->push_back(cells_to_json(stars_of(rows)));
  }
  return count;
}

}  // namespace detail

std::shared_ptr<const Task> make_star_placement_task() {
  return std::make_shared<StarPlacementTask>();
}

}  // namespace logicforge::grid
