#include "logicforge/tasks/corpus.h"

namespace logicforge::data {
std::string_view words_txt();
}

namespace logicforge::corpus {

const std::vector<std::string_view>& words() {
  static const std::vector<std::string_view> list = [] {
    std::vector<std::string_view> out;
    std::string_view text = data::words_txt();
    while (!text.empty()) {
      auto end = text.find('\n');
      auto line = text.substr(0, end);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) out.push_back(line);
      if (end == std::string_view::npos) break;
      text.remove_prefix(end + 1);
    }
    return out;
  }();
  return list;
}

}  // namespace logicforge::corpus
