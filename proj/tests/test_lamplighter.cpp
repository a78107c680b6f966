#include <doctest.h>

#include "condense/lamplighter.hpp"
#include "condense/random.hpp"
#include "oracles.hpp"

using namespace condense;

namespace {

std::string random_abcd(Rng& rng, std::size_t max_len) {
  std::string w;
  const auto len = uniform_between(rng, 0, static_cast<std::int64_t>(max_len));
  for (std::int64_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + uniform_below(rng, 4)));
  return w;
}

ExtLampElement conj(const ExtLampElement& h, const ExtLampElement& g, Twist twist = &alpha) {
  return ext_multiply(ext_multiply(ext_inverse(g, twist), h, twist), g, twist);
}

// Reflection fixing the lamp at 0 and sending it to -1: the automorphism of
// the lamplighter group written as s -> s^t, t -> t^-1.
LampElement stated_reflection(const LampElement& u) {
  LampElement lamps(u.modulus());
  for (const auto& [pos, val] : u.lamps()) lamps.set_lamp(-1 - pos, val);
  return lamps * LampElement::shift_by(-u.shift(), u.modulus());
}

}  // namespace

TEST_CASE("multiplication law and lamp positions") {
  const LampElement s = LampElement::s();
  const LampElement t = LampElement::t();
  CHECK((s * s).is_identity());
  CHECK(t.inverse() * s * t == LampElement::lamp(-1, 1));
  CHECK(t * s * t.inverse() == LampElement::lamp(1, 1));
  CHECK((t * s).to_string() == "lamps:{1:1} shift:1");
  CHECK(LampElement().to_string() == "lamps:{} shift:0");
  CHECK_THROWS(LampElement::s(2) * LampElement::s(3));
  const LampElement s3 = LampElement::s(3);
  CHECK_FALSE((s3 * s3).is_identity());
  CHECK((s3 * s3 * s3).is_identity());
}

TEST_CASE("lamplighter group axioms on random elements") {
  Rng rng(11);
  for (std::uint32_t n : {2U, 3U, 5U}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto u = random_lamp_element(rng, 4, n);
      const auto v = random_lamp_element(rng, 4, n);
      const auto w = random_lamp_element(rng, 4, n);
      CHECK((u * v) * w == u * (v * w));
      CHECK((u * u.inverse()).is_identity());
      CHECK((u.inverse() * u).is_identity());
      CHECK(alpha(u * v) == alpha(u) * alpha(v));
      CHECK(alpha(alpha(u)) == u);
    }
  }
}

TEST_CASE("s, t words evaluate in the wreath product") {
  CHECK(eval_st_word(FreeWord::parse("ss", "st")).is_identity());
  CHECK_FALSE(eval_st_word(FreeWord::parse("sss", "st"), 4).is_identity());
  // [s, s^{t^i}] vanishes for every i.
  CHECK(eval_st_word(FreeWord::parse("S TTS tt s TTs tt", "st"), 3).is_identity());
}

TEST_CASE("conjugation by a is the derived reflection") {
  const ExtLampElement a = letter_image(Gen::a);
  CHECK(a.flip);
  CHECK(a.base.is_identity());
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_lamp_element(rng, 5);
    CHECK(conj(ExtLampElement{u, false}, a) == ExtLampElement{alpha(u), false});
  }
  CHECK(alpha(LampElement::s()) == LampElement::lamp(1, 1));
  CHECK(alpha(LampElement::t()) == LampElement::t().inverse());
}

TEST_CASE("conjugation by bab realizes s -> s^t, t -> t^-1") {
  const ExtLampElement g = eval_abcd_word(GenWord::parse("bab"));
  const LampElement s = LampElement::s();
  const LampElement t = LampElement::t();
  CHECK(conj(ExtLampElement{s, false}, g).base == t.inverse() * s * t);
  CHECK(conj(ExtLampElement{t, false}, g).base == t.inverse());
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_lamp_element(rng, 5);
    CHECK(conj(ExtLampElement{u, false}, g) == ExtLampElement{stated_reflection(u), false});
  }
}

TEST_CASE("letter images satisfy the defining relations") {
  CHECK(model_relations_check().passed);
  CHECK_FALSE(model_relations_check(&stated_reflection).passed);
  CHECK(eval_abcd_word(GenWord::parse("d")).base == LampElement::s());
  CHECK(eval_abcd_word(GenWord::parse("ab")) == ExtLampElement{LampElement::t(), false});
  CHECK(eval_abcd_word(GenWord::parse("d")).to_string() == "lamps:{0:1} shift:0 flip:0");
}

TEST_CASE("the tree action of a constant sequence kills its dead letter") {
  // The tree group of a constant sequence is not the model; the model is the
  // limit of the approximants below.
  CHECK(oracle::tree_trivial("d", Omega::constant(0), 12));
  CHECK(oracle::tree_trivial("c", Omega::constant(1), 12));
  CHECK(oracle::tree_trivial("b", Omega::constant(2), 12));
  CHECK_FALSE(eval_abcd_word(GenWord::parse("d")).is_identity());
}

TEST_CASE("the model is the limit of sym^k (012)") {
  for (std::uint8_t sym = 0; sym < 3; ++sym) {
    const Gen dead = route_constant(sym).dead;
    std::vector<Omega> approximants;
    for (std::size_t k = 10; k <= 12; ++k) approximants.emplace_back(std::vector<std::uint8_t>(k, sym),
                                                                  std::vector<std::uint8_t>{0, 1, 2});
    auto check = [&](const std::string& w) {
      const GenWord g = GenWord::parse(w);
      const bool model = eval_abcd_word(g, dead).is_identity();
      for (const Omega& om : approximants) CHECK_MESSAGE(is_trivial(g, om) == model, w, " sym=", int(sym));
    };
    for (std::size_t len = 0; len <= 7; ++len) {
      for (const auto& w : oracle::alternating_words(len)) check(w);
    }
    Rng rng(100 + sym);
    for (int trial = 0; trial < 300; ++trial) check(random_abcd(rng, 16));
  }
}

TEST_CASE("t_n words map to single lamps") {
  for (std::int64_t n = -6; n <= 6; ++n) {
    const ExtLampElement e = lamp_t_n(n);
    CHECK_FALSE(e.flip);
    CHECK(e.base.shift() == 0);
    CHECK(e.base.lamps().size() == 1);
    CHECK(eval_abcd_word(t_n_word(n)) == e);
  }
}

TEST_CASE("structure report and metabelian identities") {
  for (std::int64_t window : {1, 5, 20}) {
    const StructureReport r = structure_report(window);
    CHECK(r.all_passed());
    CHECK(r.items.size() == 5);
  }
  CHECK_FALSE(structure_report(5, &stated_reflection).all_passed());
  CHECK(metabelian_check(500).passed);
}
