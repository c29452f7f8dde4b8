#include <algorithm>
#include <set>

#include "logicforge/tasks/grid.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::grid {

Json grid_to_json(const Grid& grid) {
  Json rows = Json::array();
  for (int r = 0; r < grid.rows; ++r) {
    Json row = Json::array();
    for (int c = 0; c < grid.cols; ++c) row.push_back(grid.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Grid grid_from_json(const Json& j, int rows, int cols, int lo, int hi) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw StructuralError("grid must have " + std::to_string(rows) + " rows");
  }
  Grid grid(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw StructuralError("grid row " + std::to_string(r + 1) + " must have " +
                            std::to_string(cols) + " cells");
    }
    for (int c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number_integer()) throw StructuralError("grid cells must be integers");
      auto value = v.get<std::int64_t>();
      if (value < lo || value > hi) {
        throw StructuralError("grid cell value " + std::to_string(value) + " out of range");
      }
      grid.at(r, c) = static_cast<int>(value);
    }
  }
  return grid;
}

std::string format_grid(const Grid& grid) {
  std::string out;
  for (int r = 0; r < grid.rows; ++r) {
    if (r > 0) out.push_back('\n');
    for (int c = 0; c < grid.cols; ++c) {
      if (c > 0) out.push_back(' ');
      out += std::to_string(grid.at(r, c));
    }
  }
  return out;
}

std::optional<Grid> parse_grid_text(std::string_view text, int rows, int cols) {
  auto tokens = payload::split_tokens(text);
  if (static_cast<int>(tokens.size()) != rows * cols) return std::nullopt;
  Grid grid(rows, cols);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto value = payload::parse_integer(tokens[i]);
    if (!value || *value < -1'000'000 || *value > 1'000'000) return std::nullopt;
    grid.cells[i] = static_cast<int>(*value);
  }
  return grid;
}

Json cells_to_json(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  Json out = Json::array();
  for (const auto& cell : cells) out.push_back(Json::array({cell.r + 1, cell.c + 1}));
  return out;
}

std::vector<Cell> cells_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array()) throw StructuralError("cell set must be an array");
  std::vector<Cell> cells;
  std::set<Cell> seen;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
        !item[1].is_number_integer()) {
      throw StructuralError("cell must be a [row, col] pair");
    }
    auto r = item[0].get<std::int64_t>() - 1;
    auto c = item[1].get<std::int64_t>() - 1;
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw StructuralError("cell out of bounds");
    Cell cell{static_cast<int>(r), static_cast<int>(c)};
    if (!seen.insert(cell).second) throw StructuralError("duplicate cell in set");
    cells.push_back(cell);
  }
  return cells;
}

std::string format_cells(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ", ";
    out += "(" + std::to_string(cells[i].r + 1) + "," + std::to_string(cells[i].c + 1) + ")";
  }
  return out;
}

std::optional<std::vector<Cell>> parse_cells_text(std::string_view text) {
  std::vector<Cell> cells;
  std::size_t i = 0;
  auto skip_separators = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                               text[i] == '\r' || text[i] == ',' || text[i] == ';')) {
      ++i;
    }
  };
  auto skip_blank = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto read_int = [&]() -> std::optional<int> {
    std::size_t start = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == start || i - start > 6) return std::nullopt;
    return static_cast<int>(*payload::parse_integer(text.substr(start, i - start)));
  };
  skip_separators();
  while (i < text.size()) {
    if (text[i] != '(') return std::nullopt;
    ++i;
    skip_blank();
    auto r = read_int();
    skip_blank();
    if (!r || i >= text.size() || text[i] != ',') return std::nullopt;
    ++i;
    skip_blank();
    auto c = read_int();
    skip_blank();
    if (!c || i >= text.size() || text[i] != ')') return std::nullopt;
    ++i;
    if (*r < 1 || *c < 1) return std::nullopt;
    cells.push_back(Cell{*r - 1, *c - 1});
    skip_separators();
  }
  return cells;
}

}  // namespace logicforge::grid
