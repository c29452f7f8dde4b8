#pragma once

#include "logicforge/core/registry.h"

namespace logicforge {

// Adds every built-in task to `registry`, grouped by family
// (grid, arithmetic, formal language, deduction).
void register_builtin_tasks(Registry& registry);

// Process-wide registry holding every built-in task, constructed on first use.
const Registry& builtin_registry();

}  // namespace logicforge
