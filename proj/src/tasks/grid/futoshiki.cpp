#include <algorithm>
#include <numeric>

#include "internal.h"
#include "latin_solver.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {
namespace {

using detail::Inequality;
using detail::LatinSolver;
using detail::SearchBudget;

constexpr std::uint64_t kDigBudget = 1'000'000;

struct FutoshikiSpec {
  int n;
  Grid givens;
  // Pairs of 0-based cells, first < second.
  std::vector<std::pair<Cell, Cell>> inequalities;
};

FutoshikiSpec read_spec(const Json& payload) {
  int n = static_cast<int>(payload::require_int(payload, "n", 2, 9));
  FutoshikiSpec spec{n, grid_from_json(payload::require_field(payload, "givens"), n, n, 0, n), {}};
  const Json& edges = payload::require_array(payload, "inequalities", 0,
                                             static_cast<std::size_t>(2 * n * (n - 1)));
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 4) {
      throw StructuralError("futoshiki: inequality must be [r1, c1, r2, c2]");
    }
    int v[4];
    for (int i = 0; i < 4; ++i) {
      if (!e[static_cast<std::size_t>(i)].is_number_integer()) {
        throw StructuralError("futoshiki: inequality coordinates must be integers");
      }
      v[i] = e[static_cast<std::size_t>(i)].get<int>() - 1;
      if (v[i] < 0 || v[i] >= n) throw StructuralError("futoshiki: inequality out of bounds");
    }
    if (std::abs(v[0] - v[2]) + std::abs(v[1] - v[3]) != 1) {
      throw StructuralError("futoshiki: inequality cells must be orthogonally adjacent");
    }
    spec.inequalities.push_back({Cell{v[0], v[1]}, Cell{v[2], v[3]}});
  }
  return spec;
}

std::vector<Inequality> solver_edges(const FutoshikiSpec& spec) {
  std::vector<Inequality> out;
  for (const auto& [a, b] : spec.inequalities) {
    out.push_back(Inequality{a.r * spec.n + a.c, b.r * spec.n + b.c});
  }
  return out;
}

class FutoshikiTask : public detail::GridAnswerTask {
 public:
  FutoshikiTask()
      : GridAnswerTask(
            "futoshiki",
            {tasks::int_param("n", 2, 7, 4, 6, "side length"),
             tasks::int_param("num_inequalities", 0, 84, 5, 8, "inequality signs shown", false),
             tasks::int_param("empties", 0, 49, 10, 28, "number of blank cells")}) {}

  void check_params(const DifficultyParams& params) const override {
    int n = params.get_small("n");
    if (params.get_small("num_inequalities") > 2 * n * (n - 1)) {
      throw ParamError("futoshiki: num_inequalities must be at most 2n(n-1)");
    }
    if (params.get_small("empties") > n * n) {
      throw ParamError("futoshiki: empties must be at most n*n");
    }
  }

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    return futoshiki_generate(params.get_small("n"), params.get_small("num_inequalities"),
                              params.get_small("empties"), rng);
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
    for (int i = 0; i < n; ++i) {
      std::vector<bool> row_seen(static_cast<std::size_t>(n + 1)), col_seen(row_seen);
      for (int j = 0; j < n; ++j) {
        if (row_seen[static_cast<std::size_t>(g.at(i, j))]) return false;
        if (col_seen[static_cast<std::size_t>(g.at(j, i))]) return false;
        row_seen[static_cast<std::size_t>(g.at(i, j))] = true;
        col_seen[static_cast<std::size_t>(g.at(j, i))] = true;
      }
    }
    for (const auto& [a, b] : spec.inequalities) {
      if (!(g.at(a.r, a.c) < g.at(b.r, b.c))) return false;
    }
    return true;
  }

  std::string render(const Json& payload) const override {
    auto spec = read_spec(payload);
    std::string n = std::to_string(spec.n);
    std::string out = "Solve the following " + detail::dims(spec.n, spec.n) +
                      " Futoshiki puzzle. Fill every empty cell (shown as 0) with a number from 1 to " +
                      n +
                      " so that every row and every column contains each number exactly once and "
                      "every inequality below holds.\n\nGrid:\n" +
                      format_grid(spec.givens);
    out += "\n\nInequalities (row, column), 1-based:";
    if (spec.inequalities.empty()) out += "\nnone";
    for (const auto& [a, b] : spec.inequalities) {
      out += "\n(" + std::to_string(a.r + 1) + "," + std::to_string(a.c + 1) + ") < (" +
             std::to_string(b.r + 1) + "," + std::to_string(b.c + 1) + ")";
    }
    out += "\n\nGive the completed grid as " + n + " lines of " + n +
           " numbers separated by spaces.";
    return out;
  }

 protected:
  std::pair<int, int> answer_shape(const Json& payload) const override {
    int n = static_cast<int>(payload::require_int(payload, "n", 2, 9));
    return {n, n};
  }
};

}  // namespace

Generated futoshiki_generate(int n, int num_inequalities, int empties, Rng& rng) {
  if (n < 2 || n > 9) throw ParamError("futoshiki: n must be in [2, 9]");
  if (num_inequalities < 0 || num_inequalities > 2 * n * (n - 1)) {
    throw ParamError("futoshiki: num_inequalities out of range");
  }
  if (empties < 0 || empties > n * n) throw ParamError("futoshiki: empties out of range");

  std::vector<std::pair<Cell, Cell>> adjacent;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) adjacent.push_back({Cell{r, c}, Cell{r, c + 1}});
      if (r + 1 < n) adjacent.push_back({Cell{r, c}, Cell{r + 1, c}});
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n * n));

  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Grid solution = detail::random_latin(n, 0, 0, rng);
    rng.shuffle(adjacent);
    FutoshikiSpec spec{n, solution, {}};
    for (int i = 0; i < num_inequalities; ++i) {
      auto [a, b] = adjacent[static_cast<std::size_t>(i)];
      if (solution.at(a.r, a.c) > solution.at(b.r, b.c)) std::swap(a, b);
      spec.inequalities.push_back({a, b});
    }
    std::sort(spec.inequalities.begin(), spec.inequalities.end());

    LatinSolver solver(n, 0, 0, solver_edges(spec));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    Grid& puzzle = spec.givens;
    int removed = 0;
    for (int idx : order) {
      if (removed == empties) break;
      int keep = puzzle.cells[static_cast<std::size_t>(idx)];
      puzzle.cells[static_cast<std::size_t>(idx)] = 0;
      solver.load(puzzle);
      bool unique = detail::provably_unique([&] {
        SearchBudget budget(kDigBudget);
        return solver.count(2, budget, nullptr);
      });
      if (unique) {
        ++removed;
      } else {
        puzzle.cells[static_cast<std::size_t>(idx)] = keep;
      }
    }
    if (removed != empties) continue;

    Json p = payload::new_payload();
    p["n"] = n;
    p["givens"] = grid_to_json(puzzle);
    Json edges = Json::array();
    for (const auto& [a, b] : spec.inequalities) {
      edges.push_back(Json::array({a.r + 1, a.c + 1, b.r + 1, b.c + 1}));
    }
    p["inequalities"] = std::move(edges);
    return Generated{std::move(p), grid_to_json(solution)};
  }
  throw GenerationExhausted("futoshiki: no unique puzzle with " + std::to_string(empties) +
                                " empties",
                            kMaxGenerationAttempts);
}

namespace detail {

std::uint64_t count_futoshiki(const Json& payload, CountOptions options,
                              std::vector<Json>* solutions) {
  auto spec = read_spec(payload);
  LatinSolver solver(spec.n, 0, 0, solver_edges(spec));
  if (!solver.load(spec.givens)) return 0;
  SearchBudget budget(options.node_budget);
  std::vector<Grid> found;
  auto count = solver.count(options.limit, budget, solutions ? &found : nullptr);
  if (solutions) {
    for (const auto& g : found) solutions->push_back(grid_to_json(g));
  }
  return count;
}

}  // namespace detail

std::shared_ptr<const Task> make_futoshiki_task() { return std::make_shared<FutoshikiTask>(); }

}  // namespace logicforge::grid
