#include <set>

#include "internal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid::detail {

Grid answer_grid(const Json& answer, int rows, int cols) {
  return grid_from_json(answer, rows, cols, -1'000'000, 1'000'000);
}

std::optional<Json> GridAnswerTask::parse_answer(const Json& payload,
                                                 std::string_view text) const {
  try {
    auto [rows, cols] = answer_shape(payload);
    auto grid = parse_grid_text(text, rows, cols);
    if (!grid) return std::nullopt;
    return grid_to_json(*grid);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string GridAnswerTask::format_answer(const Json& answer) const {
  std::string out;
  for (std::size_t r = 0; r < answer.size(); ++r) {
    if (r > 0) out.push_back('\n');
    for (std::size_t c = 0; c < answer[r].size(); ++c) {
      if (c > 0) out.push_back(' ');
      out += answer[r][c].dump();
    }
  }
  return out;
}

std::optional<Json> CellSetAnswerTask::parse_answer(const Json& payload,
                                                    std::string_view text) const {
  try {
    auto [rows, cols] = board_shape(payload);
    auto cells = parse_cells_text(text);
    if (!cells) return std::nullopt;
    std::set<Cell> seen;
    for (const auto& cell : *cells) {
      if (cell.r >= rows || cell.c >= cols) return std::nullopt;
      if (!seen.insert(cell).second) return std::nullopt;
    }
    return cells_to_json(*cells);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string CellSetAnswerTask::format_answer(const Json& answer) const {
  std::vector<Cell> cells;
  for (const auto& item : answer) {
    cells.push_back(Cell{item[0].get<int>() - 1, item[1].get<int>() - 1});
  }
  return format_cells(std::move(cells));
}

std::string dims(int rows, int cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace logicforge::grid::detail
