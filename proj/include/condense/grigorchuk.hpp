#pragma once

// The groups G_omega acting on the binary rooted tree.
//
// Words act left to right: in "ab" the letter a is applied first.  Conjugation
// is h^g = g^-1 h g.  All letters are involutions, so the formal inverse of a
// word is its reversal.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "condense/words.hpp"

namespace condense {

/// Raised when an operation is asked for an omega it does not cover
/// (eventually constant sequences in the tree-action routines).
class UnsupportedDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eventually periodic sequence over {0, 1, 2}: preperiod, then the period
/// repeated forever.  Stored in normal form (shortest period, shortest
/// preperiod), so structural equality is sequence equality.
class Omega {
 public:
  Omega(std::vector<std::uint8_t> preperiod, std::vector<std::uint8_t> period);

  /// Text form "<preperiod>(<period>)", e.g. "000(012)" or "(0)".
  static Omega parse(std::string_view text);
  /// 0^k followed by (012) repeated.
  static Omega approximant(std::size_t zeros);
  static Omega constant(std::uint8_t symbol);

  /// Symbol at 0-based position i (omega_{i+1} in one-based notation).
  [[nodiscard]] std::uint8_t at(std::size_t i) const {
    return i < pre_.size() ? pre_[i] : period_[(i - pre_.size()) % period_.size()];
  }
  /// Drops the first symbol.
  [[nodiscard]] Omega shifted(std::size_t by = 1) const;

  [[nodiscard]] bool eventually_constant() const { return period_.size() == 1; }
  [[nodiscard]] bool constant() const { return eventually_constant() && pre_.empty(); }

  [[nodiscard]] const std::vector<std::uint8_t>& preperiod() const { return pre_; }
  [[nodiscard]] const std::vector<std::uint8_t>& period() const { return period_; }
  /// Positions [0, span()) contain every distinct suffix.
  [[nodiscard]] std::size_t span() const { return pre_.size() + period_.size(); }

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Omega&, const Omega&) = default;

 private:
  std::vector<std::uint8_t> pre_;
  std::vector<std::uint8_t> period_;
};

/// Entry of the beta / zeta / delta table for letter g (one of b, c, d) at
/// `symbol`: true when the entry is `a`, false when it is e.
constexpr bool spin_active(Gen g, std::uint8_t symbol) {
  // beta = (a, a, e), zeta = (a, e, a), delta = (e, a, a).
  constexpr std::array<std::array<bool, 3>, 3> kTables{{
      {true, true, false},
      {true, false, true},
      {false, true, true},
  }};
  return kTables[static_cast<std::size_t>(g) - 1][symbol];
}

static_assert(spin_active(Gen::b, 0) && spin_active(Gen::b, 1) && !spin_active(Gen::b, 2));
static_assert(spin_active(Gen::c, 0) && !spin_active(Gen::c, 1) && spin_active(Gen::c, 2));
static_assert(!spin_active(Gen::d, 0) && spin_active(Gen::d, 1) && spin_active(Gen::d, 2));

struct TreeVertex {
  std::vector<std::uint8_t> path;

  static TreeVertex parse(std::string_view bits);
  [[nodiscard]] std::size_t depth() const { return path.size(); }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
};

TreeVertex generator_action(Gen g, const Omega& omega, const TreeVertex& v);
TreeVertex act(const GenWord& w, const Omega& omega, const TreeVertex& v);

enum class Parity { even, odd };
Parity root_parity(const GenWord& w);

/// Sections at the two level-1 vertices, as words of G_{shift(omega)}.
/// Requires even parity.  Both sections are Klein-reduced.
std::pair<GenWord, GenWord> sections(const GenWord& w, const Omega& omega);

/// Word problem by contraction.  Throws UnsupportedDomain for eventually
/// constant omega.
bool is_trivial(const GenWord& w, const Omega& omega);

/// Root permutations of all sections down to a depth.
class Portrait {
 public:
  Portrait(std::size_t depth, std::vector<bool> swaps);

  [[nodiscard]] std::size_t depth() const { return depth_; }
  /// Whether the automorphism swaps the children of vertex v (depth(v) < depth()).
  [[nodiscard]] bool swaps_at(const TreeVertex& v) const;
  [[nodiscard]] bool is_identity() const;
  /// Packed bit string; equal portraits give equal keys.
  [[nodiscard]] std::string key() const;

  friend bool operator==(const Portrait&, const Portrait&) = default;

 private:
  std::size_t depth_;
  std::vector<bool> swaps_;  // breadth-first: children of node i are 2i+1, 2i+2
};

Portrait portrait_of(const GenWord& w, const Omega& omega, std::size_t depth);

/// Largest distance below a section at which a single b, c or d first acts
/// nontrivially, taken over every position of omega.  Eventually constant
/// tails where a letter never acts are skipped.
std::size_t activation_depth(const Omega& omega);

/// Portrait depth used to fingerprint words of length <= max_len.
std::size_t fingerprint_depth(std::size_t max_len, const Omega& omega);

/// Order of w when it is 2^k with k <= max_exp, found by repeated squaring.
std::optional<std::uint64_t> order_of(const GenWord& w, const Omega& omega, unsigned max_exp);

/// x -> d, y -> ab over the rank-2 alphabet (x, y); Klein-reduced.
GenWord translate_L_word(const FreeWord& w);

enum class LimitVerdict { trivial, nontrivial, unstable };
std::string_view to_string(LimitVerdict v);

/// Evaluates w in G_{0^k (012)^inf} for k in [k_min, k_max] and reports the
/// common verdict, or `unstable` when the approximants disagree.
LimitVerdict limit_trivial(const GenWord& w, std::size_t k_min, std::size_t k_max);

/// Default stability window for a word of the given length.
std::pair<std::size_t, std::size_t> default_limit_window(std::size_t word_len);
LimitVerdict limit_trivial(const GenWord& w);

/// Relabeling identifying G_{(symbol)} with the G_{(0)} model: `to_model[g]`
/// is the G_{(0)} letter playing the role of g.  `dead` is the letter whose
/// table entry at `symbol` is e; it maps to d.
struct ConstantRoute {
  std::uint8_t symbol = 0;
  Gen dead = Gen::d;
  std::array<Gen, 4> to_model{Gen::a, Gen::b, Gen::c, Gen::d};

  [[nodiscard]] GenWord relabel(const GenWord& w) const;
};

ConstantRoute route_constant(std::uint8_t symbol);

}  // namespace condense
