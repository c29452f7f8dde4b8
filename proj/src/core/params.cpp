#include "logicforge/core/params.h"

#include <algorithm>

#include "logicforge/core/errors.h"

namespace logicforge {

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "easy") return Preset::kEasy;
  if (name == "hard") return Preset::kHard;
  return std::nullopt;
}

std::string_view preset_name(Preset preset) {
  return preset == Preset::kEasy ? "easy" : "hard";
}

DifficultyParams::DifficultyParams(
    std::initializer_list<std::pair<std::string, Rational>> entries) {
  for (const auto& [name, value] : entries) set(name, value);
}

void DifficultyParams::set(std::string_view name, Rational value) {
  for (auto& entry : entries_) {
    if (entry.first == name) {
      entry.second = value;
      return;
    }
  }
  entries_.emplace_back(std::string(name), value);
}

bool DifficultyParams::contains(std::string_view name) const { return find(name).has_value(); }

std::optional<Rational> DifficultyParams::find(std::string_view name) const {
  for (const auto& [key, value] : entries_) {
    if (key == name) return value;
  }
  return std::nullopt;
}

Rational DifficultyParams::get(std::string_view name) const {
  auto value = find(name);
  if (!value) throw ParamError("missing difficulty parameter '" + std::string(name) + "'");
  return *value;
}

std::int64_t DifficultyParams::get_int(std::string_view name) const {
  Rational value = get(name);
  if (!value.is_integer()) {
    throw ParamError("parameter '" + std::string(name) + "' must be an integer");
  }
  return value.num();
}

ParamSchema::ParamSchema(std::vector<ParamSpec> specs) : specs_(std::move(specs)) {
  for (const auto& spec : specs_) {
    auto in_range = [&](Rational v) { return v >= spec.min && v <= spec.max; };
    if (spec.min > spec.max || !in_range(spec.default_easy) || !in_range(spec.default_hard)) {
      throw RegistrationError("inconsistent schema entry '" + spec.name + "'");
    }
  }
}

const ParamSpec* ParamSchema::find(std::string_view name) const {
  auto it = std::find_if(specs_.begin(), specs_.end(),
                         [&](const ParamSpec& s) { return s.name == name; });
  return it == specs_.end() ? nullptr : &*it;
}

DifficultyParams ParamSchema::validate(const DifficultyParams& params) const {
  for (const auto& [name, value] : params.entries()) {
    if (find(name) == nullptr) throw ParamError("unknown difficulty parameter '" + name + "'");
  }
  DifficultyParams out;
  for (const auto& spec : specs_) {
    auto value = params.find(spec.name);
    if (!value) throw ParamError("missing difficulty parameter '" + spec.name + "'");
    if (spec.kind == ParamKind::kInteger && !value->is_integer()) {
      throw ParamError("parameter '" + spec.name + "' must be an integer");
    }
    if (*value < spec.min || *value > spec.max) {
      throw ParamError("parameter '" + spec.name + "' = " + value->str() + " outside [" +
                       spec.min.str() + ", " + spec.max.str() + "]");
    }
    out.set(spec.name, *value);
  }
  return out;
}

DifficultyParams ParamSchema::resolve(Preset preset, const DifficultyParams& overrides) const {
  DifficultyParams merged;
  for (const auto& spec : specs_) {
    merged.set(spec.name, preset == Preset::kEasy ? spec.default_easy : spec.default_hard);
  }
  for (const auto& [name, value] : overrides.entries()) merged.set(name, value);
  return validate(merged);
}

Json params_to_json(const DifficultyParams& params) {
  Json out = Json::object();
  for (const auto& [name, value] : params.entries()) {
    if (value.is_integer()) {
      out[name] = value.num();
    } else {
      out[name] = value.str();
    }
  }
  return out;
}

DifficultyParams params_from_json(const Json& j) {
  if (!j.is_object()) throw ParamError("difficulty parameters must be a JSON object");
  DifficultyParams out;
  for (const auto& [name, value] : j.items()) {
    if (value.is_number_integer()) {
      out.set(name, Rational(value.get<std::int64_t>()));
    } else if (value.is_string()) {
      auto parsed = Rational::parse(value.get<std::string>());
      if (!parsed) throw ParamError("cannot parse value of parameter '" + name + "'");
      out.set(name, *parsed);
    } else if (value.is_number_float()) {
      // Round-trip through the shortest decimal representation.
      auto parsed = Rational::parse(value.dump());
      if (!parsed) throw ParamError("cannot parse value of parameter '" + name + "'");
      out.set(name, *parsed);
    } else {
      throw ParamError("parameter '" + name + "' must be a number or rational string");
    }
  }
  return out;
}

}  // namespace logicforge
