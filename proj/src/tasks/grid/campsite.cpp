#include <algorithm>
#include <numeric>
#include <set>

#include "internal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::kDirs4;
using detail::kDirs8;
using detail::SearchBudget;

constexpr std::uint64_t kGenBudget = 1'000'000;

struct CampsiteSpec {
  int rows;
  int cols;
  std::vector<Cell> trees;
  std::vector<int> row_counts;
  std::vector<int> col_counts;
  std::vector<Cell> revealed;
};

CampsiteSpec read_spec(const Json& payload) {
  int rows = static_cast<int>(payload::require_int(payload, "rows", 1, 30));
  int cols = static_cast<int>(payload::require_int(payload, "cols", 1, 30));
  CampsiteSpec spec{rows,
                    cols,
                    cells_from_json(payload::require_field(payload, "trees"), rows, cols),
                    payload::require_int_array(payload, "row_counts",
                                               static_cast<std::size_t>(rows), 0, cols),
                    payload::require_int_array(payload, "col_counts",
                                               static_cast<std::size_t>(cols), 0, rows),
                    cells_from_json(payload::require_field(payload, "revealed_tents"), rows, cols)};
  std::set<Cell> trees(spec.trees.begin(), spec.trees.end());
  for (const auto& t : spec.revealed) {
    if (trees.count(t)) throw StructuralError("campsite: revealed tent on a tree");
  }
  return spec;
}

// Kuhn's augmenting-path matching of trees to orthogonally adjacent tents.
bool perfect_matching(const std::vector<Cell>& trees, const std::vector<Cell>& tents) {
  if (trees.size() != tents.size()) return false;
  std::vector<std::vector<int>> adj(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = 0; j < tents.size(); ++j) {
      if (std::abs(trees[i].r - tents[j].r) + std::abs(trees[i].c - tents[j].c) == 1) {
        adj[i].push_back(static_cast<int>(j));
      }
    }
  }
  std::vector<int> tent_owner(tents.size(), -1);
  std::vector<char> visited;
  auto augment = [&](auto&& self, int tree) -> bool {
    for (int tent : adj[static_cast<std::size_t>(tree)]) {
      if (visited[static_cast<std::size_t>(tent)]) continue;
      visited[static_cast<std::size_t>(tent)] = 1;
      int& owner = tent_owner[static_cast<std::size_t>(tent)];
      if (owner < 0 || self(self, owner)) {
        owner = tree;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < trees.size(); ++i) {
    visited.assign(tents.size(), 0);
    if (!augment(augment, static_cast<int>(i))) return false;
  }
  return true;
}

// Decides tent/no-tent for every non-tree cell orthogonally next to a tree, in
// row-major order, pruning on line counts, diagonal contact and trees left
// without any possible tent. Complete assignments must admit a tree-tent
// perfect matching.
class CampsiteSolver {
 public:
  explicit CampsiteSolver(const CampsiteSpec& spec) : spec_(spec) {
    int rows = spec.rows;
    int cols = spec.cols;
    std::vector<int> tree_at(static_cast<std::size_t>(rows * cols), -1);
    for (std::size_t t = 0; t < spec.trees.size(); ++t) {
      tree_at[static_cast<std::size_t>(spec.trees[t].r * cols + spec.trees[t].c)] =
          static_cast<int>(t);
    }
    forced_.assign(static_cast<std::size_t>(rows * cols), 0);
    for (const auto& cell : spec.revealed) forced_[static_cast<std::size_t>(cell.r * cols + cell.c)] = 1;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (tree_at[static_cast<std::size_t>(r * cols + c)] >= 0) continue;
        std::vector<int> near;
        for (const auto& d : kDirs4) {
          int rr = r + d[0], cc = c + d[1];
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
          int t = tree_at[static_cast<std::size_t>(rr * cols + cc)];
          if (t >= 0) near.push_back(t);
        }
        if (!near.empty()) {
          candidates_.push_back(Cell{r, c});
          candidate_trees_.push_back(std::move(near));
        } else if (forced_[static_cast<std::size_t>(r * cols + c)]) {
          impossible_ = true;  // a revealed tent no tree can own
        }
      }
    }
  }

  std::uint64_t count(std::uint64_t limit, SearchBudget& budget,
                      std::vector<std::vector<Cell>>* solutions) {
    found_ = 0;
    limit_ = limit;
    if (limit == 0 || impossible_) return 0;
    int rows = spec_.rows, cols = spec_.cols;
    tent_.assign(static_cast<std::size_t>(rows * cols), 0);
    row_placed_.assign(static_cast<std::size_t>(rows), 0);
    col_placed_.assign(static_cast<std::size_t>(cols), 0);
    row_open_.assign(static_cast<std::size_t>(rows), 0);
    col_open_.assign(static_cast<std::size_t>(cols), 0);
    tree_open_.assign(spec_.trees.size(), 0);
    tree_tents_.assign(spec_.trees.size(), 0);
    for (std::size_t k = 0; k < candidates_.size(); ++k) {
      ++row_open_[static_cast<std::size_t>(candidates_[k].r)];
      ++col_open_[static_cast<std::size_t>(candidates_[k].c)];
      for (int t : candidate_trees_[k]) ++tree_open_[static_cast<std::size_t>(t)];
    }
    for (int r = 0; r < rows; ++r) {
      if (row_open_[static_cast<std::size_t>(r)] < spec_.row_counts[static_cast<std::size_t>(r)]) return 0;
    }
    for (int c = 0; c < cols; ++c) {
      if (col_open_[static_cast<std::size_t>(c)] < spec_.col_counts[static_cast<std::size_t>(c)]) return 0;
    }
    for (std::size_t t = 0; t < spec_.trees.size(); ++t) {
      if (tree_open_[t] == 0) return 0;
    }
    rec(0, budget, solutions);
    return found_;
  }

 private:
  bool touches_tent(const Cell& cell) const {
    for (const auto& d : kDirs8) {
      int r = cell.r + d[0], c = cell.c + d[1];
      if (r < 0 || r >= spec_.rows || c < 0 || c >= spec_.cols) continue;
      if (tent_[static_cast<std::size_t>(r * spec_.cols + c)]) return true;
    }
    return false;
  }

  void rec(std::size_t k, SearchBudget& budget, std::vector<std::vector<Cell>>* solutions) {
    budget.tick();
    if (k == candidates_.size()) {
      std::vector<Cell> tents;
      for (const auto& cell : candidates_) {
        if (tent_[static_cast<std::size_t>(cell.r * spec_.cols + cell.c)]) tents.push_back(cell);
      }
      if (!perfect_matching(spec_.trees, tents)) return;
      ++found_;
      if (solutions) solutions->push_back(std::move(tents));
      return;
    }
    const Cell& cell = candidates_[k];
    auto r = static_cast<std::size_t>(cell.r);
    auto c = static_cast<std::size_t>(cell.c);
    auto idx = static_cast<std::size_t>(cell.r * spec_.cols + cell.c);
    --row_open_[r];
    --col_open_[c];
    for (int t : candidate_trees_[k]) --tree_open_[static_cast<std::size_t>(t)];

    for (int place = 1; place >= 0 && found_ < limit_; --place) {
      if (!place && forced_[idx]) continue;
      if (place && (row_placed_[r] >= spec_.row_counts[r] || col_placed_[c] >= spec_.col_counts[c] ||
                    touches_tent(cell))) {
        continue;
      }
      if (place) {
        tent_[idx] = 1;
        ++row_placed_[r];
        ++col_placed_[c];
        for (int t : candidate_trees_[k]) ++tree_tents_[static_cast<std::size_t>(t)];
      }
      bool ok = row_placed_[r] + row_open_[r] >= spec_.row_counts[r] &&
                col_placed_[c] + col_open_[c] >= spec_.col_counts[c];
      for (int t : candidate_trees_[k]) {
        auto ut = static_cast<std::size_t>(t);
        if (tree_open_[ut] == 0 && tree_tents_[ut] == 0) ok = false;
      }
      if (ok) rec(k + 1, budget, solutions);
      if (place) {
        tent_[idx] = 0;
        --row_placed_[r];
        --col_placed_[c];
        for (int t : candidate_trees_[k]) --tree_tents_[static_cast<std::size_t>(t)];
      }
    }

    ++row_open_[r];
    ++col_open_[c];
    for (int t : candidate_trees_[k]) ++tree_open_[static_cast<std::size_t>(t)];
  }

  const CampsiteSpec& spec_;
  std::vector<Cell> candidates_;
  std::vector<std::vector<int>> candidate_trees_;
  std::vector<char> forced_;
  bool impossible_ = false;
  std::vector<char> tent_;
  std::vector<int> row_placed_, col_placed_, row_open_, col_open_;
  std::vector<int> tree_open_, tree_tents_;
  std::uint64_t found_ = 0;
  std::uint64_t limit_ = 0;
};

bool unique_under(const CampsiteSpec& spec) {
  return detail::provably_unique([&] {
    CampsiteSolver solver(spec);
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

class CampsiteTask : public detail::CellSetAnswerTask {
 public:
  CampsiteTask()
      : CellSetAnswerTask("campsite", {tasks::int_param("rows", 3, 10, 5, 8, "grid rows"),
                                       tasks::int_param("cols", 3, 10, 5, 8, "grid columns"),
                                       tasks::int_param("num_trees", 1, 25, 5, 14,
                                                        "trees, each owning one tent")}) {}

  void check_params(const DifficultyParams& params) const override {
    int cells = params.get_small("rows") * params.get_small("cols");
    if (params.get_small("num_trees") * 4 > cells) {
      throw ParamError("campsite: num_trees must be at most rows*cols/4");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return campsite_generate(params.get_small("rows"), params.get_small("cols"),
                             params.get_small("num_trees"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_spec(payload);
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto spec = read_spec(payload);
    auto tents = cells_from_json(answer, spec.rows, spec.cols);
    std::set<Cell> tent_set(tents.begin(), tents.end());
    for (const auto& t : spec.trees) {
      if (tent_set.count(t)) return false;
    }
    for (const auto& t : spec.revealed) {
      if (!tent_set.count(t)) return false;
    }
    std::vector<int> rows(static_cast<std::size_t>(spec.rows)), cols(static_cast<std::size_t>(spec.cols));
    for (const auto& t : tents) {
      ++rows[static_cast<std::size_t>(t.r)];
      ++cols[static_cast<std::size_t>(t.c)];
      for (const auto& u : tents) {
        if (!(t == u) && std::abs(t.r - u.r) <= 1 && std::abs(t.c - u.c) <= 1) return false;
      }
    }
    if (rows != spec.row_counts || cols != spec.col_counts) return false;
    return perfect_matching(spec.trees, tents);
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    Grid board(spec.rows, spec.cols);
    for (const auto& t : spec.trees) board.at(t.r, t.c) = 1;
    for (const auto& t : spec.revealed) board.at(t.r, t.c) = 2;
    std::string picture;
    for (int r = 0; r < spec.rows; ++r) {
      if (r > 0) picture.push_back('\n');
      for (int c = 0; c < spec.cols; ++c) {
        if (c > 0) picture.push_back(' ');
        picture.push_back(".TA"[board.at(r, c)]);
      }
    }
    return "Solve the following " + detail::dims(spec.rows, spec.cols) +
           " Campsite (tents and trees) puzzle. Place tents on empty cells so that:\n"
           "- every tree is paired with exactly one tent orthogonally adjacent to it, and every "
           "tent is paired with exactly one tree, so there are as many tents as trees;\n"
           "- no two tents touch each other, not even diagonally;\n"
           "- each row and each column holds exactly the stated number of tents.\n\n"
           "Legend: T is a tree, A is a tent that is already placed, . is an empty cell.\n\n" +
           picture + "\n\nTents per row (top to bottom): " + join_ints(spec.row_counts) +
           "\nTents per column (left to right): " + join_ints(spec.col_counts) +
           "\n\nGive the positions of all tents, including the ones already placed, as "
           "(row,column) pairs with 1-based indices separated by commas, for example "
           "(1,2), (3,4).";
  }

 protected:
  std::pair<int, int> board_shape(const Json& payload) const override {
    return {static_cast<int>(payload::require_int(payload, "rows", 1, 30)),
            static_cast<int>(payload::require_int(payload, "cols", 1, 30))};
  }
};

}  // namespace

Generated campsite_generate(int rows, int cols, int num_trees, Rng& rng) {
  if (rows < 1 || rows > 30 || cols < 1 || cols > 30) {
    throw ParamError("campsite: grid dimensions out of range");
  }
  if (num_trees < 1 || num_trees * 4 > rows * cols) {
    throw ParamError("campsite: num_trees must be in [1, rows*cols/4]");
  }
  std::vector<int> order(static_cast<std::size_t>(rows * cols));
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Grid board(rows, cols);  // 1 = tent, 2 = tree
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<Cell> tents;
    for (int idx : order) {
      if (static_cast<int>(tents.size()) == num_trees) break;
      Cell cell{idx / cols, idx % cols};
      bool free = true;
      for (const auto& d : kDirs8) {
        int r = cell.r + d[0], c = cell.c + d[1];
        if (board.in_bounds(r, c) && board.at(r, c) == 1) free = false;
      }
      if (!free) continue;
      board.at(cell.r, cell.c) = 1;
      tents.push_back(cell);
    }
    if (static_cast<int>(tents.size()) != num_trees) continue;

    std::vector<Cell> trees;
    bool ok = true;
    for (const auto& tent : tents) {
      std::vector<Cell> spots;
      for (const auto& d : kDirs4) {
        int r = tent.r + d[0], c = tent.c + d[1];
        if (board.in_bounds(r, c) && board.at(r, c) == 0) spots.push_back(Cell{r, c});
      }
      if (spots.empty()) {
        ok = false;
        break;
      }
      Cell tree = rng.pick(spots);
      board.at(tree.r, tree.c) = 2;
      trees.push_back(tree);
    }
    if (!ok) continue;

    CampsiteSpec spec{rows, cols, trees, std::vector<int>(static_cast<std::size_t>(rows)),
                      std::vector<int>(static_cast<std::size_t>(cols)), {}};
    std::sort(spec.trees.begin(), spec.trees.end());
    for (const auto& t : tents) {
      ++spec.row_counts[static_cast<std::size_t>(t.r)];
      ++spec.col_counts[static_cast<std::size_t>(t.c)];
    }
    std::vector<Cell> reveal_order = tents;
    rng.shuffle(reveal_order);
    for (const auto& tent : reveal_order) {
      if (unique_under(spec)) break;
      spec.revealed.push_back(tent);
    }
    if (!unique_under(spec)) continue;
    for (std::size_t i = 0; i < spec.revealed.size();) {
      Cell keep = spec.revealed[i];
      spec.revealed.erase(spec.revealed.begin() + static_cast<std::ptrdiff_t>(i));
      if (unique_under(spec)) continue;
      spec.revealed.insert(spec.revealed.begin() + static_cast<std::ptrdiff_t>(i), keep);
      ++i;
    }

    Json p = payload::new_payload();
    p["rows"] = rows;
    p["cols"] = cols;
    p["trees"] = cells_to_json(spec.trees);
    p["row_counts"] = spec.row_counts;
    p["col_counts"] = spec.col_counts;
    p["revealed_tents"] = cells_to_json(spec.revealed);
    return Generated{std::move(p), cells_to_json(tents)};
  }
  throw GenerationExhausted("campsite: could not place " + std::to_string(num_trees) + " trees",
                            kMaxGenerationAttempts);
}

namespace detail {

std::uint64_t count_campsite(const Json& payload, CountOptions options,
                             std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  CampsiteSolver solver(spec);
  SearchBudget budget(options.node_budget);
  std::vector<std::vector<Cell>> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    for (auto& tents : found) solutions->push_back(cells_to_json(std::move(tents)));
  }
  return count;
}

}  // namespace detail

std::shared_ptr<const Task> make_campsite_task() { return std::make_shared<CampsiteTask>(); }

}  // namespace logicforge::grid
