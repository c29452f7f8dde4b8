#include "latin_solver.h"

#include <bit>

namespace logicforge::grid::detail {

LatinSolver::LatinSolver(int n, int box_rows, int box_cols, std::vector<Inequality> inequalities)
    : n_(n),
      box_rows_(box_rows),
      box_cols_(box_cols),
      full_((1u << n) - 1),
      links_(static_cast<std::size_t>(n * n)),
      cells_(static_cast<std::size_t>(n * n), 0),
      row_used_(static_cast<std::size_t>(n), 0),
      col_used_(static_cast<std::size_t>(n), 0),
      box_used_(static_cast<std::size_t>(n), 0) {
  for (const auto& ineq : inequalities) {
    links_[static_cast<std::size_t>(ineq.less)].push_back(Link{ineq.greater, true});
    links_[static_cast<std::size_t>(ineq.greater)].push_back(Link{ineq.less, false});
  }
}

int LatinSolver::box_of(int idx) const {
  int r = idx / n_;
  int c = idx % n_;
  return (r / box_rows_) * (n_ / box_cols_) + c / box_cols_;
}

std::uint32_t LatinSolver::candidates(int idx) const {
  int r = idx / n_;
  int c = idx % n_;
  std::uint32_t used = row_used_[static_cast<std::size_t>(r)] | col_used_[static_cast<std::size_t>(c)];
  if (box_rows_ > 0) used |= box_used_[static_cast<std::size_t>(box_of(idx))];
  std::uint32_t mask = full_ & ~used;
  for (const auto& link : links_[static_cast<std::size_t>(idx)]) {
    int v = cells_[static_cast<std::size_t>(link.other)];
    if (v == 0) {
      mask &= link.cell_is_less ? ~(1u << (n_ - 1)) : ~1u;
    } else if (link.cell_is_less) {
      mask &= (1u << (v - 1)) - 1;
    } else {
      mask &= full_ & ~((1u << v) - 1);
    }
  }
  return mask;
}

void LatinSolver::place(int idx, int value) {
  std::uint32_t bit = 1u << (value - 1);
  cells_[static_cast<std::size_t>(idx)] = value;
  row_used_[static_cast<std::size_t>(idx / n_)] |= bit;
  col_used_[static_cast<std::size_t>(idx % n_)] |= bit;
  if (box_rows_ > 0) box_used_[static_cast<std::size_t>(box_of(idx))] |= bit;
}

void LatinSolver::unplace(int idx, int value) {
  std::uint32_t bit = 1u << (value - 1);
  cells_[static_cast<std::size_t>(idx)] = 0;
  row_used_[static_cast<std::size_t>(idx / n_)] &= ~bit;
  col_used_[static_cast<std::size_t>(idx % n_)] &= ~bit;
  if (box_rows_ > 0) box_used_[static_cast<std::size_t>(box_of(idx))] &= ~bit;
}

bool LatinSolver::load(const Grid& givens) {
  std::fill(cells_.begin(), cells_.end(), 0);
  std::fill(row_used_.begin(), row_used_.end(), 0);
  std::fill(col_used_.begin(), col_used_.end(), 0);
  std::fill(box_used_.begin(), box_used_.end(), 0);
  for (int idx = 0; idx < n_ * n_; ++idx) {
    int v = givens.cells[static_cast<std::size_t>(idx)];
    if (v == 0) continue;
    if (v < 1 || v > n_) return false;
    if (!(candidates(idx) & (1u << (v - 1)))) return false;
    place(idx, v);
  }
  // Inequalities between two givens placed in the wrong order slip past the
  // incremental check above when the later cell was placed first.
  for (int idx = 0; idx < n_ * n_; ++idx) {
    int v = cells_[static_cast<std::size_t>(idx)];
    if (v == 0) continue;
    for (const auto& link : links_[static_cast<std::size_t>(idx)]) {
      int w = cells_[static_cast<std::size_t>(link.other)];
      if (w == 0) continue;
      if (link.cell_is_less ? !(v < w) : !(v > w)) return false;
    }
  }
  return true;
}

int LatinSolver::select(std::uint32_t& mask) const {
  int best = -1;
  int best_count = 64;
  for (int idx = 0; idx < n_ * n_; ++idx) {
    if (cells_[static_cast<std::size_t>(idx)] != 0) continue;
    std::uint32_t m = candidates(idx);
    int count = std::popcount(m);
    if (count == 0) return -2;
    if (count < best_count) {
      best = idx;
      best_count = count;
      mask = m;
      if (count == 1) break;
    }
  }
  return best;
}

Grid LatinSolver::snapshot() const {
  Grid g(n_, n_);
  g.cells = cells_;
  return g;
}

void LatinSolver::count_rec(std::uint64_t limit, SearchBudget& budget, std::vector<Grid>* solutions) {
  budget.tick();
  std::uint32_t mask = 0;
  int idx = select(mask);
  if (idx == -2) return;
  if (idx == -1) {
    ++found_;
    if (solutions) solutions->push_back(snapshot());
    return;
  }
  while (mask && found_ < limit) {
    int value = std::countr_zero(mask) + 1;
    mask &= mask - 1;
    place(idx, value);
    count_rec(limit, budget, solutions);
    unplace(idx, value);
  }
}

std::uint64_t LatinSolver::count(std::uint64_t limit, SearchBudget& budget,
                                 std::vector<Grid>* solutions) {
  found_ = 0;
  if (limit == 0) return 0;
  count_rec(limit, budget, solutions);
  return found_;
}

bool LatinSolver::random_rec(Rng& rng, SearchBudget& budget) {
  budget.tick();
  std::uint32_t mask = 0;
  int idx = select(mask);
  if (idx == -2) return false;
  if (idx == -1) return true;
  std::vector<int> values;
  while (mask) {
    values.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  rng.shuffle(values);
  for (int value : values) {
    place(idx, value);
    if (random_rec(rng, budget)) return true;
    unplace(idx, value);
  }
  return false;
}

bool LatinSolver::fill_random(Rng& rng, SearchBudget& budget, Grid& out) {
  if (!random_rec(rng, budget)) return false;
  out = snapshot();
  return true;
}

Grid random_latin(int n, int box_rows, int box_cols, Rng& rng) {
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    LatinSolver solver(n, box_rows, box_cols);
    solver.load(Grid(n, n));
    SearchBudget budget(200'000);
    Grid out;
    try {
      if (solver.fill_random(rng, budget, out)) return out;
    } catch (const BudgetExceeded&) {
    }
  }
  throw GenerationExhausted("latin square", kMaxGenerationAttempts);
}

}  // namespace logicforge::grid::detail
