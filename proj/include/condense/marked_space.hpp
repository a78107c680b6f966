#pragma once

// Marked groups at desk scale: Cayley balls, growth, relation agreement and
// the 2^-N distance, convergence tables and separating words.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "condense/grigorchuk.hpp"
#include "condense/words.hpp"

namespace condense {

/// A k-generated marked group given by a triviality oracle on F_k.
struct MarkedGroupHandle {
  std::string label;
  std::uint32_t k = 1;
  std::string alphabet;  // one lowercase letter per generator, for printing
  std::function<bool(const FreeWord&)> trivial;
  /// Generators known to be involutions; only used to prune search.
  std::vector<bool> involutive;
  /// Optional element fingerprint: equal elements must get equal keys.
  /// `max_len` bounds the length of the quotients that will be compared.
  std::function<std::string(const FreeWord&, std::size_t max_len)> fingerprint;
  /// True when distinct elements always get distinct keys (a normal form).
  bool fingerprint_exact = false;

  [[nodiscard]] bool is_involutive(std::uint32_t gen) const {
    return gen < involutive.size() && involutive[gen];
  }
};

MarkedGroupHandle trivial_group_handle(std::uint32_t k);
MarkedGroupHandle free_group_handle(std::uint32_t k);
/// Z_n wr Z marked by (s, t).
MarkedGroupHandle lamplighter_handle(std::uint32_t modulus = 2);
/// (G_omega, {a, b, c, d}).  Constant omega routes to the lamplighter
/// extension model; other eventually constant omega throw UnsupportedDomain.
MarkedGroupHandle grigorchuk_handle(const Omega& omega);
/// (L_omega, {d, ab}) over the alphabet (x, y), with the same routing.
MarkedGroupHandle l_handle(const Omega& omega);

/// Raised when a fingerprint match is refuted by the triviality oracle.
class FingerprintMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FingerprintStats {
  std::uint64_t lookups = 0;
  std::uint64_t key_matches = 0;     // lookups resolved through a fingerprint bucket
  std::uint64_t oracle_confirms = 0;  // of those, confirmed by the oracle
  std::uint64_t oracle_calls = 0;
};

/// Distinct elements seen so far, each with its first (shortlex-least)
/// representative.
class ElementStore {
 public:
  ElementStore(const MarkedGroupHandle& handle, std::size_t max_len);

  [[nodiscard]] std::string key_of(const FreeWord& w) const;
  /// Existing element equal to w, if any.
  std::optional<std::size_t> find(const FreeWord& w, const std::string& key);
  std::size_t insert(const FreeWord& w, std::string key);

  [[nodiscard]] std::size_t size() const { return reps_.size(); }
  [[nodiscard]] const FreeWord& rep(std::size_t id) const { return reps_[id]; }
  [[nodiscard]] const FingerprintStats& stats() const { return stats_; }

 private:
  const MarkedGroupHandle* handle_;
  std::size_t max_len_;
  std::vector<FreeWord> reps_;
  std::unordered_map<std::string, std::vector<std::size_t>> buckets_;
  FingerprintStats stats_;
};

struct CayleyBall {
  std::size_t radius = 0;
  std::uint32_t k = 1;
  std::vector<FreeWord> elements;         // breadth-first, shortlex-least representatives
  std::vector<std::size_t> layer_sizes;   // elements at distance exactly n
  /// edges[e][code] is the element reached by the letter with that code, or
  /// -1 when it lies outside the ball.
  std::vector<std::vector<std::int64_t>> edges;
  FingerprintStats stats;

  [[nodiscard]] std::size_t size() const { return elements.size(); }
  /// Element reached by reading w from the identity; -1 if it leaves the ball.
  [[nodiscard]] std::int64_t walk(const FreeWord& w) const;
};

CayleyBall build_ball(const MarkedGroupHandle& h, std::size_t radius, unsigned threads = 1);

/// gamma(0..n_max).
std::vector<std::uint64_t> growth_sequence(const MarkedGroupHandle& h, std::size_t n_max,
                                           unsigned threads = 1);

/// A freely reduced word of length <= max_len trivial in exactly one of the
/// two groups, found by lockstep breadth-first search; nullopt when the
/// relation sets agree up to max_len.
std::optional<FreeWord> relation_disagreement(const MarkedGroupHandle& h1,
                                              const MarkedGroupHandle& h2, std::size_t max_len);

/// True iff every freely reduced word of length <= max_len has the same
/// triviality in both groups.
bool relation_agreement(const MarkedGroupHandle& h1, const MarkedGroupHandle& h2,
                        std::size_t max_len);

/// Distance 2^-n; `exact` is false when n was capped by the search bound.
/// n = -1 means the groups already differ on single letters.
struct Distance {
  int n = 0;
  bool exact = true;

  [[nodiscard]] std::string to_string() const;
};

Distance agree_radius(const MarkedGroupHandle& h1, const MarkedGroupHandle& h2, int n_max);

/// Every freely reduced word of length <= max_len that is trivial in h.
std::vector<FreeWord> relation_set(const MarkedGroupHandle& h, std::size_t max_len);

struct ConvergenceRow {
  std::size_t index = 0;
  std::int64_t prefix_len = -1;
  std::string label;
  Distance distance;
};

std::vector<ConvergenceRow> convergence_table(const std::vector<MarkedGroupHandle>& targets,
                                              const MarkedGroupHandle& limit, int n_max,
                                              std::span<const std::int64_t> prefix_lens = {});

struct Separation {
  FreeWord word;
  bool trivial_in_first = false;
  /// word = v v for some word v
  bool is_square = false;
};

/// The shortlex-first freely reduced word of length <= max_len with different
/// triviality in the two groups.  The answer is re-checked against both raw
/// oracles.
std::optional<Separation> find_separating_word(const MarkedGroupHandle& h1,
                                               const MarkedGroupHandle& h2, std::size_t max_len,
                                               unsigned threads = 1);

void write_growth_csv(std::ostream& os, const std::vector<std::uint64_t>& gamma);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_relation_set(std::ostream& os, const std::vector<FreeWord>& words,
                        const std::string& alphabet);

}  // namespace condense
