#pragma once

// Normal forms for Z_n wr Z and for its Z_2 extension realizing G_{(0)}.
//
// An element is (f, z): f a finitely supported lamp configuration, z the
// shift.  (f1, z1)(f2, z2) = (f1 + f2(. - z1), z1 + z2), s is the lamp at 0
// and t the unit shift, so s^t = t^-1 s t is the lamp at -1 and
// t^k s t^-k is the lamp at k.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "condense/random.hpp"
#include "condense/words.hpp"

namespace condense {

class LampElement {
 public:
  explicit LampElement(std::uint32_t modulus = 2);

  static LampElement s(std::uint32_t modulus = 2);
  static LampElement t(std::uint32_t modulus = 2);
  static LampElement lamp(std::int64_t position, std::uint32_t value, std::uint32_t modulus = 2);
  static LampElement shift_by(std::int64_t z, std::uint32_t modulus = 2);

  [[nodiscard]] std::uint32_t modulus() const { return modulus_; }
  /// Only nonzero residues are stored.
  [[nodiscard]] const std::map<std::int64_t, std::uint32_t>& lamps() const { return lamps_; }
  [[nodiscard]] std::int64_t shift() const { return shift_; }
  [[nodiscard]] bool is_identity() const { return lamps_.empty() && shift_ == 0; }
  [[nodiscard]] std::uint32_t lamp_at(std::int64_t position) const;

  void set_lamp(std::int64_t position, std::uint32_t value);

  [[nodiscard]] LampElement inverse() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const LampElement&, const LampElement&) = default;

 private:
  std::uint32_t modulus_;
  std::map<std::int64_t, std::uint32_t> lamps_;
  std::int64_t shift_ = 0;

  friend LampElement lamp_multiply(const LampElement&, const LampElement&);
};

/// Throws std::invalid_argument on modulus mismatch.
LampElement lamp_multiply(const LampElement& u, const LampElement& v);
inline LampElement operator*(const LampElement& u, const LampElement& v) { return lamp_multiply(u, v); }

LampElement commutator(const LampElement& u, const LampElement& v);

/// The automorphism induced by conjugation by `a` in G_{(0)}:
/// s -> s^{t^-1}, t -> t^-1, i.e. (f, z) -> (f(1 - .), -z).
LampElement alpha(const LampElement& u);

using Twist = LampElement (*)(const LampElement&);

/// Left-to-right product of s, t (and inverses) over the alphabet "st".
LampElement eval_st_word(const FreeWord& w, std::uint32_t modulus = 2);

/// Element of L x| Z_2.
struct ExtLampElement {
  LampElement base;
  bool flip = false;

  [[nodiscard]] bool is_identity() const { return !flip && base.is_identity(); }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ExtLampElement&, const ExtLampElement&) = default;
};

/// (u, e1)(v, e2) = (u twist^{e1}(v), e1 xor e2).
ExtLampElement ext_multiply(const ExtLampElement& u, const ExtLampElement& v, Twist twist = &alpha);
ExtLampElement ext_inverse(const ExtLampElement& u, Twist twist = &alpha);

/// Image of a letter of G_{(symbol)} where `dead_letter` is the letter
/// with table entry e (d for symbol 0, c for 1, b for 2).
ExtLampElement letter_image(Gen g, Gen dead_letter = Gen::d, Twist twist = &alpha);

/// a -> (1, flip), d -> s, b -> a t, c -> b d, for the G_{(0)} labeling;
/// other dead letters are relabeled first.
ExtLampElement eval_abcd_word(const GenWord& w, Gen dead_letter = Gen::d, Twist twist = &alpha);

/// d^{(ab)^n} for n >= 0 and d^{(ab)^{-n-1} a} for n < 0.
GenWord t_n_word(std::int64_t n);
ExtLampElement lamp_t_n(std::int64_t n, Twist twist = &alpha);

struct CheckItem {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct StructureReport {
  std::int64_t window = 0;
  std::vector<CheckItem> items;

  [[nodiscard]] bool all_passed() const;
};

/// Checks on t_n for |n| <= window: distinctness, commutation, the shift
/// t_i^{ab} = t_{i+1}, separation of D from <ab>, and unique factorization
/// through K = D x| <ab> and <a>.
StructureReport structure_report(std::int64_t window, Twist twist = &alpha,
                                 std::uint64_t seed = kDefaultSeed);

/// a^2, b^2, c^2, d^2 and bcd evaluated for each dead letter.
CheckItem model_relations_check(Twist twist = &alpha);

/// Commutators of lamplighter elements have shift 0, and commutators of
/// shift-0 elements vanish.
CheckItem metabelian_check(std::size_t samples, std::uint64_t seed = kDefaultSeed);

LampElement random_lamp_element(Rng& rng, std::int64_t spread, std::uint32_t modulus = 2);

}  // namespace condense
