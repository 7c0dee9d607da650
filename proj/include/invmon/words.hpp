#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invmon {

/// Symbol ids are interned process-wide so that letters compare as integers.
int intern_symbol(std::string_view name);
const std::string& symbol_name(int sym);

/// A letter of the doubled alphabet A ∪ A⁻¹, packed as 2·sym + inverse bit.
struct Letter {
  std::uint32_t code = 0;

  static Letter make(int sym, bool inv) {
    return Letter{static_cast<std::uint32_t>(sym) * 2u + (inv ? 1u : 0u)};
  }
  static Letter named(std::string_view name, bool inv = false) {
    return make(intern_symbol(name), inv);
  }

  int symbol() const { return static_cast<int>(code >> 1); }
  bool is_inverse() const { return (code & 1u) != 0; }
  int sign() const { return is_inverse() ? -1 : 1; }
  Letter inverse() const { return Letter{code ^ 1u}; }
  std::string text() const;

  friend bool operator==(Letter a, Letter b) { return a.code == b.code; }
  friend bool operator!=(Letter a, Letter b) { return a.code != b.code; }
  friend bool operator<(Letter a, Letter b) { return a.code < b.code; }
};

using InvWord = std::vector<Letter>;

InvWord free_reduce(const InvWord& u);
InvWord invert_word(const InvWord& u);
InvWord concat(const InvWord& u, const InvWord& v);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Tokens are separated by whitespace; `a'` is the inverse of `a`, `1` is the empty word.
InvWord parse_word(std::string_view text);
std::string format_word(const InvWord& u);

struct Relation {
  InvWord lhs;
  InvWord rhs;
};

struct Presentation {
  std::vector<int> alphabet;  ///< symbol ids, in declaration order
  std::vector<Relation> relations;

  /// max(2, |r|, |s| over all relations)
  int K() const;
  bool has_symbol(int sym) const;
  /// Letters a, a' for every base symbol.
  std::vector<Letter> letters() const;
  /// Throws ParseError naming the first letter outside the alphabet.
  void check_word(const InvWord& u) const;
};

Presentation parse_presentation(std::string_view text);
Presentation load_presentation(const std::string& path);
std::string format_presentation(const Presentation& p);

/// Convenience for tests and examples.
Presentation make_presentation(const std::vector<std::string>& letters,
                               const std::vector<std::pair<std::string, std::string>>& rels);

}  // namespace invmon
