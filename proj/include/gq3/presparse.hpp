#pragma once

// Words in a free group and finite presentations of pro-p groups.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gq3 {

struct Word {
  enum class Kind { Generator, Inverse, Power, Product, Commutator };

  Kind kind = Kind::Product;
  int generator = -1;         // Generator
  std::int64_t exponent = 0;  // Power
  std::vector<Word> children; // Inverse: 1, Power: 1, Product: any, Commutator: 2

  static Word gen(int index);
  static Word inverse(Word w);
  static Word power(Word w, std::int64_t e);
  static Word product(std::vector<Word> factors);
  static Word commutator(Word a, Word b);
  static Word identity() { return product({}); }

  bool is_identity() const { return kind == Kind::Product && children.empty(); }
  bool operator==(const Word& other) const = default;
};

/// One maximal run x_g^e (e != 0) of a reduced word.
struct Syllable {
  int generator = 0;
  std::int64_t exponent = 0;
  bool operator==(const Syllable& other) const = default;
};

struct Presentation {
  int q = 0;
  int p = 0;
  int d = 0;
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::vector<std::string> relator_text;  // source text of each relator

  int n() const { return static_cast<int>(generators.size()); }
  /// -1 when absent.
  int generator_index(std::string_view name) const;
};

/// Longest expanded syllable list free_reduce will build before giving up.
inline constexpr std::size_t kMaxSyllables = 1'000'000;

Presentation parse_presentation(std::string_view text);
Presentation load_presentation(const std::string& path);
/// Builds a presentation from parts, parsing each relator string.
Presentation make_presentation(std::int64_t q, std::vector<std::string> generators,
                               const std::vector<std::string>& relators);

Word parse_word(std::string_view text, const std::vector<std::string>& names);
Word parse_word(std::string_view text, const Presentation& ctx);

/// Reduced syllable sequence of w with commutators expanded as a^-1 b^-1 a b.
std::vector<Syllable> reduced_syllables(const Word& w);
Word from_syllables(const std::vector<Syllable>& s);

/// Free reduction. With expand_commutators = false, commutator nodes survive
/// as opaque factors (their arguments reduced, trivial ones removed).
Word free_reduce(const Word& w, bool expand_commutators = true);

/// Sum of |exponent| over the expanded letter sequence.
std::int64_t letter_length(const Word& w);

std::string to_string(const Word& w, const std::vector<std::string>& names);
std::string to_string(const Presentation& pres);

}  // namespace gq3
