#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/errors.h"
#include "logicforge/core/json.h"
#include "logicforge/core/rational.h"
#include "logicforge/core/rng.h"
#include "logicforge/core/task.h"

// Grid constraint puzzles: Sudoku (and its box-free Latin-square relaxation),
// Futoshiki, Skyscraper, Campsite (tents and trees), Star Placement, Numbrix
// and Minesweeper. Every generator emits puzzles with exactly one solution.
//
// JSON conventions: grids are arrays of rows, 0 marks an empty cell;
// coordinates are 1-based [row, col] pairs.
namespace logicforge::grid {

struct Cell {
  int r = 0;
  int c = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<int> cells;

  Grid() = default;
  Grid(int r, int c, int fill = 0) : rows(r), cols(c), cells(static_cast<std::size_t>(r * c), fill) {}

  int& at(int r, int c) { return cells[static_cast<std::size_t>(r * cols + c)]; }
  int at(int r, int c) const { return cells[static_cast<std::size_t>(r * cols + c)]; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
  friend bool operator==(const Grid&, const Grid&) = default;
};

// --- serialization -------------------------------------------------------

Json grid_to_json(const Grid& grid);
// Throws StructuralError unless `j` is a rows x cols array with values in [lo, hi].
Grid grid_from_json(const Json& j, int rows, int cols, int lo, int hi);

// Rows of space-separated integers joined by newlines.
std::string format_grid(const Grid& grid);
// Exactly rows*cols integers separated by any whitespace (commas tolerated).
std::optional<Grid> parse_grid_text(std::string_view text, int rows, int cols);

// 1-based, sorted, deduplicated.
Json cells_to_json(std::vector<Cell> cells);
// Throws StructuralError on out-of-bounds or duplicate cells.
std::vector<Cell> cells_from_json(const Json& j, int rows, int cols);
// "(r,c)" pairs, 1-based, sorted, comma-separated.
std::string format_cells(std::vector<Cell> cells);
// Accepts "(r,c)" pairs separated by commas/whitespace. Returns 0-based cells
// in input order; nullopt on any other content.
std::optional<std::vector<Cell>> parse_cells_text(std::string_view text);

// --- solution counting ---------------------------------------------------

struct CountOptions {
  std::uint64_t limit = 2;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

// Number of solutions of a payload of the named grid task, capped at
// options.limit. Exhaustive backtracking with per-task propagation. Throws
// StructuralError for a malformed payload, BudgetExceeded when the search
// visits more than options.node_budget nodes, and UnknownTaskError for a
// non-grid task.
std::uint64_t count_solutions(std::string_view task, const Json& payload,
                              CountOptions options = {});

// Solutions found while counting (at most options.limit), as canonical answers.
std::vector<Json> enumerate_solutions(std::string_view task, const Json& payload,
                                      CountOptions options = {});

// --- generators ----------------------------------------------------------

// box_rows = box_cols = 0 selects the Latin-square variant (no box rule).
Generated sudoku_generate(int n, int box_rows, int box_cols, int empties, Rng& rng);
// Box shape used for a side length: the most square factorization, or 0x0
// (Latin-square relaxation) for prime n.
std::pair<int, int> sudoku_box_shape(int n);

Generated futoshiki_generate(int n, int num_inequalities, int empties, Rng& rng);

struct SkyscraperClues {
  std::vector<int> top;     // looking down each column
  std::vector<int> bottom;  // looking up each column
  std::vector<int> left;    // looking right along each row
  std::vector<int> right;   // looking left along each row
};
// Number of running maxima in a line of heights.
int visible_count(const std::vector<int>& line);
// Throws StructuralError unless `latin` is a Latin square over 1..n.
SkyscraperClues skyscraper_clues(const Grid& latin);
Generated skyscraper_generate(int n, int hidden_clues, Rng& rng);

Generated campsite_generate(int rows, int cols, int num_trees, Rng& rng);

// n x n board with n regions and k stars per row, column and region.
// Throws ParamError when no valid star arrangement exists for (n, k).
Generated star_generate(int n, int k, Rng& rng);
bool star_arrangement_exists(int n, int k);

Generated numbrix_generate(int rows, int cols, int num_givens, Rng& rng);

// revealed_fraction is the target share of safe cells shown; more are kept
// revealed when needed for a unique mine layout.
Generated minesweeper_generate(int rows, int cols, int mines, Rational revealed_fraction,
                               Rng& rng);

// --- task plugins --------------------------------------------------------

std::shared_ptr<const Task> make_sudoku_task();
std::shared_ptr<const Task> make_futoshiki_task();
std::shared_ptr<const Task> make_skyscraper_task();
std::shared_ptr<const Task> make_campsite_task();
std::shared_ptr<const Task> make_star_placement_task();
std::shared_ptr<const Task> make_numbrix_task();
std::shared_ptr<const Task> make_minesweeper_task();

}  // namespace logicforge::grid
