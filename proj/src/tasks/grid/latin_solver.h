#pragma once

#include <cstdint>
#include <vector>

#include "internal.h"
#include "logicforge/core/rng.h"
#include "logicforge/tasks/grid.h"

namespace logicforge::grid::detail {

// Cell `less` must hold a smaller value than cell `greater` (row-major indices).
struct Inequality {
  int less = 0;
  int greater = 0;
};

// Backtracking over an n x n all-different grid (rows, columns and optional
// boxes) with optional strict inequalities between cells. Candidate sets are
// bitmasks (bit v-1 stands for value v); the next cell is the one with the
// fewest candidates.
class LatinSolver {
 public:
  LatinSolver(int n, int box_rows, int box_cols, std::vector<Inequality> inequalities = {});

  // Returns false when the givens already violate a constraint.
  bool load(const Grid& givens);

  std::uint64_t count(std::uint64_t limit, SearchBudget& budget, std::vector<Grid>* solutions);

  // Completes the loaded grid with values tried in random order. Returns
  // false when no completion exists.
  bool fill_random(Rng& rng, SearchBudget& budget, Grid& out);

 private:
  struct Link {
    int other;
    bool cell_is_less;
  };

  std::uint32_t candidates(int idx) const;
  int box_of(int idx) const;
  void place(int idx, int value);
  void unplace(int idx, int value);
  // Picks the empty cell with the fewest candidates. Returns -1 when the grid
  // is full, -2 on a dead end.
  int select(std::uint32_t& mask) const;
  void count_rec(std::uint64_t limit, SearchBudget& budget, std::vector<Grid>* solutions);
  bool random_rec(Rng& rng, SearchBudget& budget);
  Grid snapshot() const;

  int n_;
  int box_rows_;
  int box_cols_;
  std::uint32_t full_;
  std::vector<std::vector<Link>> links_;
  std::vector<int> cells_;
  std::vector<std::uint32_t> row_used_;
  std::vector<std::uint32_t> col_used_;
  std::vector<std::uint32_t> box_used_;
  std::uint64_t found_ = 0;
};

// Random n x n Latin square (no boxes) or Sudoku solution (with boxes).
Grid random_latin(int n, int box_rows, int box_cols, Rng& rng);

}  // namespace logicforge::grid::detail
