#pragma once

// Free-group words and words over the Klein alphabet {a, b, c, d}.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace condense {

/// A letter of the free group: a generator index together with a sign.
struct Letter {
  std::uint32_t gen = 0;
  bool inverse = false;

  /// Position in the fixed enumeration order x0 < x0^-1 < x1 < x1^-1 < ...
  [[nodiscard]] std::uint32_t code() const { return 2 * gen + (inverse ? 1 : 0); }
  [[nodiscard]] Letter inverted() const { return {gen, !inverse}; }
  [[nodiscard]] static Letter from_code(std::uint32_t c) { return {c / 2, (c & 1U) != 0}; }

  friend bool operator==(Letter, Letter) = default;
};

/// A word in the free group F_k.  Construction does not reduce; use
/// free_reduce for the canonical representative.
class FreeWord {
 public:
  explicit FreeWord(std::uint32_t rank = 1);
  FreeWord(std::uint32_t rank, std::vector<Letter> letters);

  /// Parses letters from `alphabet`; a lowercase name is the generator, the
  /// uppercase name its inverse.  Whitespace is ignored.
  static FreeWord parse(std::string_view text, std::string_view alphabet);

  [[nodiscard]] std::uint32_t rank() const { return rank_; }
  [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] const Letter& operator[](std::size_t i) const { return letters_[i]; }

  void push_back(Letter l);

  /// Formal inverse: reversed, every sign flipped.
  [[nodiscard]] FreeWord inverse() const;
  /// Concatenation followed by cancellation at the seam only.
  [[nodiscard]] FreeWord operator*(const FreeWord& rhs) const;

  [[nodiscard]] std::string to_string(std::string_view alphabet) const;

  friend bool operator==(const FreeWord&, const FreeWord&) = default;

 private:
  std::uint32_t rank_;
  std::vector<Letter> letters_;
};

/// Length first, then lexicographic by letter code.
bool shortlex_less(const FreeWord& lhs, const FreeWord& rhs);

FreeWord free_reduce(const FreeWord& w);

/// Number of freely reduced words of length <= max_len in F_k.
std::uint64_t reduced_word_count(std::uint32_t rank, std::size_t max_len);

/// Walks every freely reduced word of length <= max_len exactly once in
/// shortlex order.
class ReducedWordEnumerator {
 public:
  ReducedWordEnumerator(std::uint32_t rank, std::size_t max_len);

  /// Stores the next word in `out`; false once exhausted.
  bool next(FreeWord& out);

 private:
  bool advance();

  std::uint32_t rank_;
  std::size_t max_len_;
  std::vector<std::uint32_t> codes_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<FreeWord> enumerate_reduced(std::uint32_t rank, std::size_t max_len);

// ---------------------------------------------------------------------------

enum class Gen : std::uint8_t { a = 0, b = 1, c = 2, d = 3 };

char gen_char(Gen g);
Gen gen_from_char(char ch);

/// Product inside the four-group {e, b, c, d}; nullopt stands for e.
/// Both arguments must be non-`a` letters.
std::optional<Gen> klein_product(Gen x, Gen y);

/// A word over {a, b, c, d}.  Every letter is an involution.
class GenWord {
 public:
  GenWord() = default;
  explicit GenWord(std::vector<Gen> letters) : letters_(std::move(letters)) {}

  /// Accepts letters a-d; whitespace is ignored.
  static GenWord parse(std::string_view text);

  [[nodiscard]] const std::vector<Gen>& letters() const { return letters_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] Gen operator[](std::size_t i) const { return letters_[i]; }
  void push_back(Gen g) { letters_.push_back(g); }

  /// Letters reversed; the formal inverse since every letter is involutive.
  [[nodiscard]] GenWord reversed() const;
  [[nodiscard]] GenWord operator*(const GenWord& rhs) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const GenWord&, const GenWord&) = default;

 private:
  std::vector<Gen> letters_;
};

/// Rewrites modulo a^2 = b^2 = c^2 = d^2 = bcd = e.  The result alternates
/// between `a` and a single letter of {b, c, d}.
GenWord klein_reduce(const GenWord& w);

bool is_alternating(const GenWord& w);

/// Reads a rank-4 free word over generators (a, b, c, d); signs are dropped.
GenWord to_gen_word(const FreeWord& w);

}  // namespace condense

template <>
struct std::hash<condense::FreeWord> {
  std::size_t operator()(const condense::FreeWord& w) const noexcept;
};
