#include "logicforge/tasks/builtin.h"

#include "logicforge/tasks/arith.h"
#include "logicforge/tasks/deduction.h"
#include "logicforge/tasks/formal.h"
#include "logicforge/tasks/grid.h"

namespace logicforge {

void register_builtin_tasks(Registry& registry) {
  registry.register_task(grid::make_sudoku_task());
  registry.register_task(grid::make_futoshiki_task());
  registry.register_task(grid::make_skyscraper_task());
  registry.register_task(grid::make_campsite_task());
  registry.register_task(grid::make_star_placement_task());
  registry.register_task(grid::make_numbrix_task());
  registry.register_task(grid::make_minesweeper_task());

  registry.register_task(arith::make_game24_task());
  registry.register_task(arith::make_cryptarithm_task());
  registry.register_task(arith::make_mathador_task());
  registry.register_task(arith::make_math_path_task());

  registry.register_task(formal::make_dyck_task());
  registry.register_task(formal::make_dyck_errors_task());
  registry.register_task(formal::make_boolean_expressions_task());
  registry.register_task(formal::make_cipher_task());
  registry.register_task(formal::make_word_sorting_task());
  registry.register_task(formal::make_word_sorting_mistake_task());

  registry.register_task(deduction::make_web_of_lies_task());
  registry.register_task(deduction::make_object_counting_task());
}

const Registry& builtin_registry() {
  static const Registry registry = [] {
    Registry r;
    register_builtin_tasks(r);
    return r;
  }();
  return registry;
}

}  // namespace logicforge
