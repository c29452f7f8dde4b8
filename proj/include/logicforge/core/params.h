#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicforge/core/json.h"
#include "logicforge/core/rational.h"

namespace logicforge {

enum class ParamKind { kInteger, kRational };

enum class Preset { kEasy, kHard };

std::optional<Preset> parse_preset(std::string_view name);
std::string_view preset_name(Preset preset);

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::kInteger;
  Rational min;
  Rational max;
  Rational default_easy;
  Rational default_hard;
  // True when raising the value is intended to make instances harder.
  bool harder_when_larger = true;
  std::string description;
};

// Named difficulty knobs, kept in schema order once normalized.
class DifficultyParams {
 public:
  DifficultyParams() = default;
  DifficultyParams(std::initializer_list<std::pair<std::string, Rational>> entries);

  void set(std::string_view name, Rational value);
  bool contains(std::string_view name) const;
  std::optional<Rational> find(std::string_view name) const;
  // Throws ParamError when absent.
  Rational get(std::string_view name) const;
  // Throws ParamError when absent or not integral.
  std::int64_t get_int(std::string_view name) const;
  int get_small(std::string_view name) const { return static_cast<int>(get_int(name)); }

  const std::vector<std::pair<std::string, Rational>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const DifficultyParams&, const DifficultyParams&) = default;

 private:
  std::vector<std::pair<std::string, Rational>> entries_;
};

class ParamSchema {
 public:
  ParamSchema() = default;
  explicit ParamSchema(std::vector<ParamSpec> specs);

  const std::vector<ParamSpec>& specs() const { return specs_; }
  const ParamSpec* find(std::string_view name) const;

  // Reorders into schema order and rejects unknown names, missing names,
  // non-integral integer values and out-of-range values with ParamError.
  DifficultyParams validate(const DifficultyParams& params) const;

  // Preset defaults with `overrides` applied on top, then validated.
  DifficultyParams resolve(Preset preset, const DifficultyParams& overrides = {}) const;

 private:
  std::vector<ParamSpec> specs_;
};

// Integral values serialize as JSON numbers, others as "p/q" strings.
Json params_to_json(const DifficultyParams& params);
// Accepts numbers and rational strings for any entry.
DifficultyParams params_from_json(const Json& j);

}  // namespace logicforge
