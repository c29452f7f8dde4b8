#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logicforge/core/json.h"
#include "logicforge/core/rng.h"
#include "logicforge/core/task.h"

// Formal-language tasks: Dyck completion and errors, boolean expressions,
// ciphers and custom-order word sorting.
namespace logicforge::formal {

// --- brackets ------------------------------------------------------------

// Bracket kinds in order: () [] {} <>.
inline constexpr std::string_view kOpeners = "([{<";
inline constexpr std::string_view kClosers = ")]}>";

// Shortest string that closes every bracket left open by `prefix`, or nullopt
// when the prefix already has a mismatched or unopened closer (or a
// non-bracket character).
std::optional<std::string> dyck_complete(std::string_view prefix);

// 1-based index of the first character after which no continuation can make
// the sequence balanced; |s|+1 when every closer matches but brackets remain
// open at the end; 0 when `s` is balanced.
std::size_t dyck_first_violation(std::string_view s);

// Uniformly random balanced sequence of `length` characters whose nesting
// never exceeds max_depth and, when reach_max is set, touches it at least
// once. Bracket kinds are drawn from the first `kinds`. Throws ParamError when
// no such sequence exists.
std::string dyck_sample(int length, int max_depth, int kinds, bool reach_max, Rng& rng);

struct Corruption {
  std::string sequence;
  std::size_t first_violation;
};

// Replaces num_errors distinct positions with other bracket characters of
// the kinds present in `sequence` until the result is unbalanced.
Corruption dyck_corrupt(std::string_view sequence, int num_errors, Rng& rng);

Generated dyck_generate(int length, int max_depth, int kinds, int prefix_cut, Rng& rng);
// `reasoning` selects the rendering that shows a stack trace with one wrong
// step instead of a corrupted sequence.
Generated dyck_errors_generate(int length, int kinds, int num_errors, bool reasoning, Rng& rng);

// --- boolean expressions -------------------------------------------------

struct BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  enum class Kind { kLiteral, kNot, kAnd, kOr };
  Kind kind = Kind::kLiteral;
  bool value = false;
  BoolExprPtr left;   // operand of not
  BoolExprPtr right;
};

bool boolexpr_eval(const BoolExpr& expr);
// Longest chain of operators from the root to a literal.
int boolexpr_depth(const BoolExpr& expr);
// Words True/False/and/or/not, space separated, with every operator below the
// root wrapped in parentheses: "( True or False ) and not ( False )" style.
std::string to_string(const BoolExpr& expr);
// Accepts the rendered form and ordinary infix with precedence
// not > and > or. nullopt on a syntax error.
std::optional<BoolExprPtr> parse_boolexpr(std::string_view text);
BoolExprPtr boolexpr_random(int depth, Rng& rng);

Generated boolexpr_generate(int depth, Rng& rng);

// --- ciphers -------------------------------------------------------------

enum class CipherScheme { kAtbash, kCaesar, kRailfence, kKeyword, kVigenere };

std::string_view scheme_name(CipherScheme scheme);
std::optional<CipherScheme> parse_scheme(std::string_view name);

struct CipherKey {
  CipherScheme scheme = CipherScheme::kCaesar;
  int shift = 0;        // caesar
  int rails = 0;        // railfence
  std::string keyword;  // keyword substitution and vigenere, uppercase
};

// Letters are upper-cased first. Substitution schemes keep every other
// character in place (the vigenere key advances on letters only); railfence
// drops non-letters and transposes the letters.
std::string cipher_apply(const CipherKey& key, std::string_view plaintext);
// Inverse of cipher_apply on its own output.
std::string cipher_decode(const CipherKey& key, std::string_view ciphertext);
// Plain-language statement of the encryption rule.
std::string cipher_rule(const CipherKey& key);

Generated cipher_generate(CipherScheme scheme, int plaintext_len, Rng& rng);

// --- word sorting --------------------------------------------------------

// Lexicographic order under `alphabet` (a permutation of a-z); a word sorts
// before its own extensions.
std::vector<std::string> wordsort_order(std::vector<std::string> words, std::string_view alphabet);
bool wordsort_less(std::string_view a, std::string_view b, std::string_view alphabet);

Generated wordsort_generate(int num_words, Rng& rng);
// Insertion-sort trace with one wrong step; the answer is its 1-based index.
Generated wordsort_mistake_generate(int num_words, Rng& rng);

// --- task plugins --------------------------------------------------------

std::shared_ptr<const Task> make_dyck_task();
std::shared_ptr<const Task> make_dyck_errors_task();
std::shared_ptr<const Task> make_boolean_expressions_task();
std::shared_ptr<const Task> make_cipher_task();
std::shared_ptr<const Task> make_word_sorting_task();
std::shared_ptr<const Task> make_word_sorting_mistake_task();

}  // namespace logicforge::formal
