#pragma once

#include <string_view>
#include <vector>

// Word lists compiled into the library from data/.
namespace logicforge::corpus {

// data/words.txt: 10,000 distinct lowercase a-z words, one per line.
const std::vector<std::string_view>& words();

}  // namespace logicforge::corpus
