#include <algorithm>

#include "../task_base.h"
#include "logicforge/tasks/corpus.h"
#include "logicforge/tasks/formal.h"
#include "logicforge/tasks/payload_util.h"

namespace logicforge::formal {
namespace {

constexpr int kMaxPlaintext = 200;
constexpr CipherScheme kSchemeOrder[] = {CipherScheme::kAtbash, CipherScheme::kCaesar,
                                         CipherScheme::kRailfence, CipherScheme::kKeyword,
                                         CipherScheme::kVigenere};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

char upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

char shift_letter(char c, int by) { return static_cast<char>('A' + ((c - 'A' + by) % 26 + 26) % 26); }

std::string substitution_alphabet(const std::string& keyword) {
  std::string out;
  for (char c : keyword + "ABCDEFGHIJKLMNOPQRSTUVWXYZ") {
    if (out.find(c) == std::string::npos) out += c;
  }
  return out;
}

// Rail of each position in the zigzag.
std::vector<int> rail_pattern(std::size_t n, int rails) {
  std::vector<int> out;
  int rail = 0, step = 1;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(rail);
    if (rails > 1) {
      if (rail == 0) step = 1;
      if (rail == rails - 1) step = -1;
      rail += step;
    }
  }
  return out;
}

std::string letters_only(std::string_view text) {
  std::string out;
  for (char c : text) {
    c = upper(c);
    if (is_upper(c)) out += c;
  }
  return out;
}

void check_key(const CipherKey& key) {
  switch (key.scheme) {
    case CipherScheme::kCaesar:
      if (key.shift < 0 || key.shift > 25) throw ParamError("cipher: shift must be in [0, 25]");
      break;
    case CipherScheme::kRailfence:
      if (key.rails < 2 || key.rails > 10) throw ParamError("cipher: rails must be in [2, 10]");
      break;
    case CipherScheme::kKeyword:
    case CipherScheme::kVigenere:
      if (key.keyword.empty() || !std::all_of(key.keyword.begin(), key.keyword.end(), is_upper)) {
        throw ParamError("cipher: keyword must be non-empty uppercase A-Z");
      }
      break;
    case CipherScheme::kAtbash:
      break;
  }
}

std::string transform(const CipherKey& key, std::string_view text, bool decode) {
  check_key(key);
  if (key.scheme == CipherScheme::kRailfence) {
    std::string letters = letters_only(text);
    auto pattern = rail_pattern(letters.size(), key.rails);
    std::vector<std::size_t> order;
    for (int r = 0; r < key.rails; ++r) {
      for (std::size_t i = 0; i < letters.size(); ++i) {
        if (pattern[i] == r) order.push_back(i);
      }
    }
    std::string out(letters.size(), ' ');
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (decode) {
        out[order[k]] = letters[k];
      } else {
        out[k] = letters[order[k]];
      }
    }
    return out;
  }

  std::string alphabet = key.scheme == CipherScheme::kKeyword ? substitution_alphabet(key.keyword) : "";
  std::string out;
  std::size_t key_pos = 0;
  for (char c : text) {
    c = upper(c);
    if (!is_upper(c)) {
      out += c;
      continue;
    }
    switch (key.scheme) {
      case CipherScheme::kAtbash:
        out += static_cast<char>('Z' - (c - 'A'));
        break;
      case CipherScheme::kCaesar:
        out += shift_letter(c, decode ? -key.shift : key.shift);
        break;
      case CipherScheme::kKeyword:
        out += decode ? static_cast<char>('A' + alphabet.find(c)) : alphabet[static_cast<std::size_t>(c - 'A')];
        break;
      case CipherScheme::kVigenere: {
        int by = key.keyword[key_pos++ % key.keyword.size()] - 'A';
        out += shift_letter(c, decode ? -by : by);
        break;
      }
      case CipherScheme::kRailfence:
        break;
    }
  }
  return out;
}

CipherKey read_key(const Json& payload) {
  auto name = payload::require_string(payload, "scheme");
  auto scheme = parse_scheme(name);
  if (!scheme) throw StructuralError("cipher: unknown scheme '" + name + "'");
  CipherKey key;
  key.scheme = *scheme;
  switch (key.scheme) {
    case CipherScheme::kCaesar:
      key.shift = static_cast<int>(payload::require_int(payload, "shift", 0, 25));
      break;
    case CipherScheme::kRailfence:
      key.rails = static_cast<int>(payload::require_int(payload, "rails", 2, 10));
      break;
    case CipherScheme::kKeyword:
    case CipherScheme::kVigenere:
      key.keyword = payload::require_string(payload, "keyword");
      if (key.keyword.empty() || key.keyword.size() > 26 ||
          !std::all_of(key.keyword.begin(), key.keyword.end(), is_upper)) {
        throw StructuralError("cipher: keyword must be uppercase A-Z");
      }
      break;
    case CipherScheme::kAtbash:
      break;
  }
  return key;
}

std::string read_ciphertext(const Json& payload) {
  auto text = payload::require_string(payload, "ciphertext");
  if (text.empty() || text.size() > static_cast<std::size_t>(2 * kMaxPlaintext)) {
    throw StructuralError("cipher: ciphertext has unsupported length");
  }
  for (char c : text) {
    if (!is_upper(c) && c != ' ') throw StructuralError("cipher: ciphertext must be A-Z and spaces");
  }
  return text;
}

// Upper-cased with whitespace removed.
std::string normalize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    out += upper(c);
  }
  return out;
}

class CipherTask : public tasks::TaskBase {
 public:
  CipherTask()
      : TaskBase("cipher",
                 {tasks::int_param("plaintext_len", 3, kMaxPlaintext, 8, 16,
                                   "minimum letters in the message"),
                  tasks::int_param("max_scheme", 1, 5, 2, 5,
                                   "schemes drawn from atbash, caesar, railfence, keyword, "
                                   "vigenere, in that order")}) {}

  Generated generate(const DifficultyParams& params, Rng& rng) const override {
    auto count = static_cast<std::uint64_t>(params.get_small("max_scheme"));
    return cipher_generate(kSchemeOrder[rng.below(count)], params.get_small("plaintext_len"), rng);
  }

  void check_payload(const Json& payload) const override {
    payload::require_schema_version(payload);
    read_key(payload);
    read_ciphertext(payload);
    payload::require_string(payload, "rule");
  }

  bool verify(const Json& payload, const Json& answer) const override {
    auto key = read_key(payload);
    if (!answer.is_string()) throw StructuralError("cipher: answer must be a string");
    return normalize(answer.get<std::string>()) ==
           normalize(cipher_decode(key, read_ciphertext(payload)));
  }

  std::optional<Json> parse_answer(const Json& /*payload*/, std::string_view text) const override {
    text = payload::trim(text);
    if (text.empty()) return std::nullopt;
    std::string out;
    bool space = false;
    for (char c : text) {
      c = upper(c);
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        space = !out.empty();
        continue;
      }
      if (!is_upper(c)) return std::nullopt;
      if (space) out += ' ';
      space = false;
      out += c;
    }
    return Json(out);
  }

  std::string format_answer(const Json& answer) const override {
    if (!answer.is_string()) throw StructuralError("cipher: answer must be a string");
    return answer.get<std::string>();
  }

  std::string render(const Json& payload) const override {
    auto key = read_key(payload);
    bool railfence = key.scheme == CipherScheme::kRailfence;
    return "Decrypt the following message. It was encrypted with this rule:\n\n" +
           payload::require_string(payload, "rule") + "\n\nCiphertext: " + read_ciphertext(payload) +
           "\n\nGive the decrypted message in capital letters" +
           (railfence ? " (spaces are not needed)." : ", keeping the spaces between words.");
  }
};

}  // namespace

std::string_view scheme_name(CipherScheme scheme) {
  switch (scheme) {
    case CipherScheme::kAtbash: return "atbash";
    case CipherScheme::kCaesar: return "caesar";
    case CipherScheme::kRailfence: return "railfence";
    case CipherScheme::kKeyword: return "keyword";
    case CipherScheme::kVigenere: return "vigenere";
  }
  return "";
}

std::optional<CipherScheme> parse_scheme(std::string_view name) {
  for (auto s : kSchemeOrder) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string cipher_apply(const CipherKey& key, std::string_view plaintext) {
  return transform(key, plaintext, false);
}

std::string cipher_decode(const CipherKey& key, std::string_view ciphertext) {
  return transform(key, ciphertext, true);
}

std::string cipher_rule(const CipherKey& key) {
  check_key(key);
  switch (key.scheme) {
    case CipherScheme::kAtbash:
      return "Atbash cipher. Each letter is replaced by its mirror in the alphabet: A becomes Z, "
             "B becomes Y, C becomes X, and so on. Spaces are unchanged.";
    case CipherScheme::kCaesar:
      return "Caesar cipher with shift " + std::to_string(key.shift) +
             ". Each letter is moved " + std::to_string(key.shift) +
             " places forward in the alphabet, wrapping around from Z to A. Spaces are unchanged.";
    case CipherScheme::kRailfence:
      return "Rail fence cipher with " + std::to_string(key.rails) +
             " rails. The spaces are removed and the letters are written in a zigzag: the first "
             "letter on rail 1, the next on rail 2, and so on down to rail " +
             std::to_string(key.rails) +
             ", then back up to rail 1, repeating. The ciphertext is rail 1 read left to right, "
             "followed by rail 2, and so on.";
    case CipherScheme::kKeyword:
      return "Keyword substitution cipher with keyword " + key.keyword +
             ". The cipher alphabet is the keyword with repeated letters removed, followed by the "
             "rest of the alphabet in order: " +
             substitution_alphabet(key.keyword) +
             ". Plain A becomes the first letter of the cipher alphabet, B the second, and so on. "
             "Spaces are unchanged.";
    case CipherScheme::kVigenere:
      return "Vigenere cipher with keyword " + key.keyword +
             ". The keyword is repeated along the letters of the message (spaces do not use up "
             "keyword letters) and each letter is moved forward by its keyword letter: A moves "
             "0 places, B moves 1, up to Z moving 25, wrapping around from Z to A.";
  }
  return "";
}

Generated cipher_generate(CipherScheme scheme, int plaintext_len, Rng& rng) {
  if (plaintext_len < 1 || plaintext_len > kMaxPlaintext) {
    throw ParamError("cipher: plaintext_len must be in [1, " + std::to_string(kMaxPlaintext) + "]");
  }
  const auto& words = corpus::words();
  std::string plaintext;
  std::size_t letters = 0;
  while (letters < static_cast<std::size_t>(plaintext_len)) {
    auto w = payload::to_upper(rng.pick(words));
    if (!plaintext.empty()) plaintext += ' ';
    plaintext += w;
    letters += w.size();
  }

  CipherKey key;
  key.scheme = scheme;
  switch (scheme) {
    case CipherScheme::kCaesar:
      key.shift = rng.uniform_int(1, 25);
      break;
    case CipherScheme::kRailfence:
      key.rails = rng.uniform_int(2, std::clamp(static_cast<int>(letters) - 1, 2, 4));
      break;
    case CipherScheme::kKeyword:
    case CipherScheme::kVigenere:
      for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxGenerationAttempts) {
          throw GenerationExhausted("cipher: no usable keyword", kMaxGenerationAttempts);
        }
        auto w = payload::to_upper(rng.pick(words));
        if (w.size() < 3 || w.size() > 8) continue;
        if (scheme == CipherScheme::kVigenere && w.find_first_not_of('A') == std::string::npos) continue;
        if (scheme == CipherScheme::kKeyword &&
            substitution_alphabet(w) == "ABCDEFGHIJKLMNOPQRSTUVWXYZ") {
          continue;
        }
        key.keyword = w;
        break;
      }
      break;
    case CipherScheme::kAtbash:
      break;
  }

  Json p = payload::new_payload();
  p["scheme"] = std::string(scheme_name(scheme));
  if (scheme == CipherScheme::kCaesar) p["shift"] = key.shift;
  if (scheme == CipherScheme::kRailfence) p["rails"] = key.rails;
  if (!key.keyword.empty()) p["keyword"] = key.keyword;
  p["rule"] = cipher_rule(key);
  p["ciphertext"] = cipher_apply(key, plaintext);
  std::string answer = scheme == CipherScheme::kRailfence ? letters_only(plaintext) : plaintext;
  return Generated{std::move(p), Json(answer)};
}

std::shared_ptr<const Task> make_cipher_task() { return std::make_shared<CipherTask>(); }

}  // namespace logicforge::formal
