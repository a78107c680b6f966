#include "condense/words.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <utility>

namespace condense {

FreeWord::FreeWord(std::uint32_t rank) : rank_(rank) {
  if (rank == 0) throw std::invalid_argument("free group rank must be >= 1");
}

FreeWord::FreeWord(std::uint32_t rank, std::vector<Letter> letters)
    : FreeWord(rank) {
  for (const Letter& l : letters) {
    if (l.gen >= rank_) throw std::invalid_argument("generator index out of range");
  }
  letters_ = std::move(letters);
}

FreeWord FreeWord::parse(std::string_view text, std::string_view alphabet) {
  FreeWord w(static_cast<std::uint32_t>(alphabet.size()));
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const auto pos = alphabet.find(lower);
    if (pos == std::string_view::npos) {
      throw std::invalid_argument(std::string("unknown letter '") + ch + "'");
    }
    w.letters_.push_back({static_cast<std::uint32_t>(pos), ch != lower});
  }
  return w;
}

void FreeWord::push_back(Letter l) {
  if (l.gen >= rank_) throw std::invalid_argument("generator index out of range");
  letters_.push_back(l);
}

FreeWord FreeWord::inverse() const {
  FreeWord out(rank_);
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    out.letters_.push_back(it->inverted());
  }
  return out;
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  if (rhs.rank_ != rank_) throw std::invalid_argument("rank mismatch");
  FreeWord out(*this);
  std::size_t i = 0;
  while (i < rhs.letters_.size() && !out.letters_.empty() &&
         out.letters_.back() == rhs.letters_[i].inverted()) {
    out.letters_.pop_back();
    ++i;
  }
  out.letters_.insert(out.letters_.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(i),
                      rhs.letters_.end());
  return out;
}

std::string FreeWord::to_string(std::string_view alphabet) const {
  std::string out;
  out.reserve(letters_.size());
  for (const Letter& l : letters_) {
    if (l.gen >= alphabet.size()) throw std::invalid_argument("alphabet too short");
    const char ch = alphabet[l.gen];
    out.push_back(l.inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch))) : ch);
  }
  return out;
}

bool shortlex_less(const FreeWord& lhs, const FreeWord& rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i].code() != rhs[i].code()) return lhs[i].code() < rhs[i].code();
  }
  return false;
}

FreeWord free_reduce(const FreeWord& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (const Letter& l : w.letters()) {
    if (!stack.empty() && stack.back() == l.inverted()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return FreeWord(w.rank(), std::move(stack));
}

std::uint64_t reduced_word_count(std::uint32_t rank, std::size_t max_len) {
  std::uint64_t total = 1;
  std::uint64_t layer = 2ULL * rank;
  for (std::size_t len = 1; len <= max_len; ++len) {
    total += layer;
    layer *= 2ULL * rank - 1;
  }
  return total;
}

ReducedWordEnumerator::ReducedWordEnumerator(std::uint32_t rank, std::size_t max_len)
    : rank_(rank), max_len_(max_len) {
  if (rank == 0) throw std::invalid_argument("free group rank must be >= 1");
}

bool ReducedWordEnumerator::advance() {
  const std::uint32_t alphabet = 2 * rank_;
  auto smallest_after = [](std::uint32_t prev) -> std::uint32_t {
    return (prev ^ 1U) == 0 ? 1 : 0;
  };
  for (std::size_t i = codes_.size(); i-- > 0;) {
    for (std::uint32_t c = codes_[i] + 1; c < alphabet; ++c) {
      if (i > 0 && c == (codes_[i - 1] ^ 1U)) continue;
      codes_[i] = c;
      for (std::size_t j = i + 1; j < codes_.size(); ++j) codes_[j] = smallest_after(codes_[j - 1]);
      return true;
    }
  }
  if (codes_.size() >= max_len_) return false;
  codes_.assign(codes_.size() + 1, 0);
  for (std::size_t j = 1; j < codes_.size(); ++j) codes_[j] = smallest_after(codes_[j - 1]);
  return true;
}

bool ReducedWordEnumerator::next(FreeWord& out) {
  if (done_) return false;
  if (started_ && !advance()) {
    done_ = true;
    return false;
  }
  started_ = true;
  std::vector<Letter> letters;
  letters.reserve(codes_.size());
  for (std::uint32_t c : codes_) letters.push_back(Letter::from_code(c));
  out = FreeWord(rank_, std::move(letters));
  return true;
}

std::vector<FreeWord> enumerate_reduced(std::uint32_t rank, std::size_t max_len) {
  std::vector<FreeWord> out;
  ReducedWordEnumerator it(rank, max_len);
  FreeWord w(rank);
  while (it.next(w)) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------------

char gen_char(Gen g) { return static_cast<char>('a' + static_cast<int>(g)); }

Gen gen_from_char(char ch) {
  if (ch < 'a' || ch > 'd') throw std::invalid_argument(std::string("unknown letter '") + ch + "'");
  return static_cast<Gen>(ch - 'a');
}

std::optional<Gen> klein_product(Gen x, Gen y) {
  // Rows and columns indexed by b, c, d.  bc = d, bd = c, cd = b.
  static constexpr std::array<std::array<int, 3>, 3> kTable{{
      {-1, 3, 2},
      {3, -1, 1},
      {2, 1, -1},
  }};
  if (x == Gen::a || y == Gen::a) throw std::invalid_argument("klein_product takes b, c or d");
  const int p = kTable[static_cast<int>(x) - 1][static_cast<int>(y) - 1];
  if (p < 0) return std::nullopt;
  return static_cast<Gen>(p);
}

GenWord GenWord::parse(std::string_view text) {
  GenWord w;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    w.letters_.push_back(gen_from_char(ch));
  }
  return w;
}

GenWord GenWord::reversed() const {
  return GenWord(std::vector<Gen>(letters_.rbegin(), letters_.rend()));
}

GenWord GenWord::operator*(const GenWord& rhs) const {
  std::vector<Gen> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return GenWord(std::move(out));
}

std::string GenWord::to_string() const {
  std::string out;
  out.reserve(letters_.size());
  for (Gen g : letters_) out.push_back(gen_char(g));
  return out;
}

GenWord klein_reduce(const GenWord& w) {
  std::vector<Gen> stack;
  stack.reserve(w.size());
  for (Gen g : w.letters()) {
    if (stack.empty()) {
      stack.push_back(g);
    } else if (stack.back() == g) {
      stack.pop_back();
    } else if (g != Gen::a && stack.back() != Gen::a) {
      // The letter below the top is `a`, so the product cannot merge further.
      stack.back() = *klein_product(stack.back(), g);
    } else {
      stack.push_back(g);
    }
  }
  return GenWord(std::move(stack));
}

bool is_alternating(const GenWord& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == w[i - 1]) return false;
    if (w[i] != Gen::a && w[i - 1] != Gen::a) return false;
  }
  return true;
}

GenWord to_gen_word(const FreeWord& w) {
  if (w.rank() != 4) throw std::invalid_argument("expected a word over four generators");
  std::vector<Gen> out;
  out.reserve(w.size());
  for (const Letter& l : w.letters()) out.push_back(static_cast<Gen>(l.gen));
  return GenWord(std::move(out));
}

}  // namespace condense

std::size_t std::hash<condense::FreeWord>::operator()(const condense::FreeWord& w) const noexcept {
  std::size_t h = 1469598103934665603ULL ^ w.rank();
  for (const auto& l : w.letters()) {
    h ^= l.code() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}
