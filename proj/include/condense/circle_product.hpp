#pragma once

// The circle product W(Z_n, Z, S) as a graph product of copies of Z_n over
// the graph on Z with edges T_S = {(s1 + g, s2 + g)}, extended by Z.  Used
// to certify that [s, s^{t^m}] is not a consequence of the other relators
// of Z_n wr Z.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "condense/words.hpp"

namespace condense {

struct SSpec {
  enum class Variant { paper, corrected };

  std::int64_t m = 1;
  Variant variant = Variant::corrected;
};

std::string to_string(SSpec::Variant v);
SSpec::Variant parse_variant(const std::string& text);

/// a_0 = 0, a_{2j} = j M + j(j+1)/2 with M = m+1 for the literal reading
/// (variant `paper`) or M = m+2 (`corrected`), and a_{2j+1} = a_{2j} + j+1 for j < m-1 and a_{2j} + j+2 otherwise.
std::int64_t s_term(const SSpec& spec, std::int64_t index);
std::vector<std::int64_t> build_s_sequence(const SSpec& spec, std::size_t count);

/// Index pair (k, l) with a_k - a_l = |delta|, if delta lies in S - S.
std::optional<std::pair<std::int64_t, std::int64_t>> difference_witness(std::int64_t delta,
                                                                       const SSpec& spec);
bool in_difference_set(std::int64_t delta, const SSpec& spec);

struct DifferenceReport {
  SSpec spec;
  std::int64_t window = 0;
  /// +-m is absent from S - S; otherwise the witnessing indices and values.
  bool excluded_ok = true;
  std::optional<std::pair<std::int64_t, std::int64_t>> witness_indices;
  std::optional<std::pair<std::int64_t, std::int64_t>> witness_values;
  /// Every other |delta| <= window lies in S - S.
  bool covered_ok = true;
  std::vector<std::int64_t> missing;
  /// Gap identities and |a_k - a_l| > m for |k - l| >= 2 on the prefix.
  bool gaps_ok = true;
  std::string gap_detail;

  [[nodiscard]] bool passed() const { return excluded_ok && covered_ok && gaps_ok; }
};

DifferenceReport verify_difference_window(const SSpec& spec, std::int64_t window);

/// v1 - v2 in S - S.  Throws for v1 == v2.
bool ts_adjacent(std::int64_t v1, std::int64_t v2, const SSpec& spec);

struct Syllable {
  std::int64_t vertex = 0;
  std::uint32_t exp = 1;  // in 1..n-1

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

/// Word in the graph product of copies of Z_n.
struct GPWord {
  std::uint32_t modulus = 2;
  std::vector<Syllable> syllables;

  [[nodiscard]] bool empty() const { return syllables.empty(); }
  [[nodiscard]] GPWord inverse() const;
  [[nodiscard]] GPWord translated(std::int64_t z) const;
  [[nodiscard]] GPWord operator*(const GPWord& rhs) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const GPWord&, const GPWord&) = default;
};

using Adjacency = std::function<bool(std::int64_t, std::int64_t)>;

/// Normal form: syllables at one vertex are merged whenever everything
/// between them commutes with that vertex, then the word is brought to the
/// lexicographically least arrangement reachable by commuting neighbours.
/// Empty iff the word is the identity.  Throws std::invalid_argument when
/// `adjacent` is not symmetric on the vertices of w.
GPWord gp_reduce(const GPWord& w, const Adjacency& adjacent);

/// Element (word, shift) of W = K x| Z.
struct WElement {
  GPWord word;
  std::int64_t shift = 0;

  [[nodiscard]] bool is_identity() const { return word.empty() && shift == 0; }
  friend bool operator==(const WElement&, const WElement&) = default;
};

/// W(Z_n, Z, S) with generators x (vertex group at 0) and y (the shift).
/// (w1, z1)(w2, z2) = (w1 . translate(w2, z1), z1 + z2), so
/// x^{y^i} = y^-i x y^i sits at vertex -i.  Caches adjacency, so one
/// instance should not be shared between threads.
class CircleProduct {
 public:
  CircleProduct(std::uint32_t modulus, SSpec spec);

  [[nodiscard]] std::uint32_t modulus() const { return modulus_; }
  [[nodiscard]] const SSpec& spec() const { return spec_; }

  [[nodiscard]] bool adjacent(std::int64_t v1, std::int64_t v2) const;
  [[nodiscard]] Adjacency adjacency() const;

  [[nodiscard]] WElement identity() const;
  [[nodiscard]] WElement x() const;
  [[nodiscard]] WElement y() const;
  [[nodiscard]] WElement multiply(const WElement& u, const WElement& v) const;
  [[nodiscard]] WElement inverse(const WElement& u) const;
  [[nodiscard]] WElement reduce(const WElement& u) const;
  /// Image of a word over (s, t) under s -> x, t -> y.
  [[nodiscard]] WElement eval_st_word(const FreeWord& w) const;

 private:
  std::uint32_t modulus_;
  SSpec spec_;
  mutable std::unordered_map<std::int64_t, bool> difference_cache_;
};

/// [x, x^{y^i}] reduces to the identity.
bool commutator_trivial(std::int64_t i, const SSpec& spec, std::uint32_t modulus);

/// The relator [s, s^{t^i}] as a word over (s, t).
FreeWord lamplighter_relator(std::int64_t i);

struct CommutatorRow {
  std::int64_t i = 0;
  bool trivial = false;
  bool expected = false;
};

struct MinimalityReport {
  std::uint32_t n = 2;
  SSpec spec;
  std::int64_t window = 0;
  DifferenceReport difference;
  std::vector<CommutatorRow> commutators;
  bool power_relator_trivial = true;  // s^n -> x^n = e
  bool other_relators_trivial = true;  // r_i -> e for i != m, i <= window
  bool target_relator_nontrivial = true;  // r_m -> nontrivial

  [[nodiscard]] bool commutators_ok() const;
  [[nodiscard]] bool passed() const;
};

MinimalityReport verify_minimality(std::uint32_t n, std::int64_t m, std::int64_t window,
                                   SSpec::Variant variant = SSpec::Variant::corrected,
                                   unsigned threads = 1);

/// Right-angled Coxeter check through the integer reflection representation
/// restricted to vertices [lo, hi].  Requires modulus 2.  True iff w is the
/// identity.  Throws std::out_of_range for vertices outside the window and
/// std::overflow_error if an entry leaves 64 bits.
bool racg_matrix_oracle(const GPWord& w, const Adjacency& adjacent, std::int64_t lo, std::int64_t hi);

}  // namespace condense
