#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace logicforge {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::string_view bytes);
std::string sha256_hex(std::string_view bytes);

// Trims leading/trailing ASCII whitespace and collapses every interior run of
// whitespace into a single space.
std::string normalize_prompt(std::string_view prompt);

// Lowercase hex SHA-256 of normalize_prompt(prompt).
std::string prompt_id(std::string_view prompt);

// Low 64 bits (the last eight digest bytes read big-endian) of
// SHA-256(master_be64 || task_name || index_be64).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view task,
                          std::uint64_t index);

}  // namespace logicforge
