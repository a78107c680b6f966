#include "condense/lamplighter.hpp"

#include <sstream>
#include <stdexcept>

#include "condense/grigorchuk.hpp"

namespace condense {

LampElement::LampElement(std::uint32_t modulus) : modulus_(modulus) {
  if (modulus < 2) throw std::invalid_argument("lamp modulus must be >= 2");
}

LampElement LampElement::s(std::uint32_t modulus) { return lamp(0, 1, modulus); }

LampElement LampElement::t(std::uint32_t modulus) { return shift_by(1, modulus); }

LampElement LampElement::lamp(std::int64_t position, std::uint32_t value, std::uint32_t modulus) {
  LampElement e(modulus);
  e.set_lamp(position, value);
  return e;
}

LampElement LampElement::shift_by(std::int64_t z, std::uint32_t modulus) {
  LampElement e(modulus);
  e.shift_ = z;
  return e;
}

std::uint32_t LampElement::lamp_at(std::int64_t position) const {
  const auto it = lamps_.find(position);
  return it == lamps_.end() ? 0 : it->second;
}

void LampElement::set_lamp(std::int64_t position, std::uint32_t value) {
  value %= modulus_;
  if (value == 0) {
    lamps_.erase(position);
  } else {
    lamps_[position] = value;
  }
}

LampElement LampElement::inverse() const {
  // (f, z)^-1 = (-f(. + z), -z)
  LampElement out(modulus_);
  out.shift_ = -shift_;
  for (const auto& [pos, val] : lamps_) out.lamps_[pos - shift_] = modulus_ - val;
  return out;
}

std::string LampElement::to_string() const {
  std::ostringstream os;
  os << "lamps:{";
  bool first = true;
  for (const auto& [pos, val] : lamps_) {
    if (!first) os << ',';
    os << pos << ':' << val;
    first = false;
  }
  os << "} shift:" << shift_;
  return os.str();
}

LampElement lamp_multiply(const LampElement& u, const LampElement& v) {
  if (u.modulus_ != v.modulus_) throw std::invalid_argument("lamp modulus mismatch");
  LampElement out = u;
  for (const auto& [pos, val] : v.lamps_) {
    out.set_lamp(pos + u.shift_, out.lamp_at(pos + u.shift_) + val);
  }
  out.shift_ = u.shift_ + v.shift_;
  return out;
}

LampElement commutator(const LampElement& u, const LampElement& v) {
  return u.inverse() * v.inverse() * u * v;
}

LampElement alpha(const LampElement& u) {
  LampElement out = LampElement::shift_by(-u.shift(), u.modulus());
  for (const auto& [pos, val] : u.lamps()) out.set_lamp(1 - pos, val);
  return out;
}

LampElement eval_st_word(const FreeWord& w, std::uint32_t modulus) {
  if (w.rank() != 2) throw std::invalid_argument("lamplighter words are over s, t");
  const LampElement s = LampElement::s(modulus);
  const LampElement t = LampElement::t(modulus);
  const LampElement s_inv = s.inverse();
  const LampElement t_inv = t.inverse();
  LampElement out(modulus);
  for (const Letter& l : w.letters()) {
    if (l.gen == 0) {
      out = out * (l.inverse ? s_inv : s);
    } else {
      out = out * (l.inverse ? t_inv : t);
    }
  }
  return out;
}

std::string ExtLampElement::to_string() const {
  return base.to_string() + " flip:" + (flip ? "1" : "0");
}

ExtLampElement ext_multiply(const ExtLampElement& u, const ExtLampElement& v, Twist twist) {
  if (u.base.modulus() != v.base.modulus()) throw std::invalid_argument("lamp modulus mismatch");
  return {u.base * (u.flip ? twist(v.base) : v.base), u.flip != v.flip};
}

ExtLampElement ext_inverse(const ExtLampElement& u, Twist twist) {
  if (!u.flip) return {u.base.inverse(), false};
  return {twist(u.base.inverse()), true};
}

namespace {

std::uint8_t symbol_of_dead_letter(Gen dead) {
  switch (dead) {
    case Gen::d: return 0;
    case Gen::c: return 1;
    case Gen::b: return 2;
    default: throw std::invalid_argument("dead letter must be b, c or d");
  }
}

ExtLampElement model_image(Gen g, Twist twist) {
  const ExtLampElement a{LampElement(2), true};
  const ExtLampElement s{LampElement::s(2), false};
  const ExtLampElement t{LampElement::t(2), false};
  switch (g) {
    case Gen::a: return a;
    case Gen::b: return ext_multiply(a, t, twist);
    case Gen::c: return ext_multiply(ext_multiply(a, t, twist), s, twist);
    case Gen::d: return s;
  }
  return a;
}

}  // namespace

ExtLampElement letter_image(Gen g, Gen dead_letter, Twist twist) {
  const ConstantRoute route = route_constant(symbol_of_dead_letter(dead_letter));
  return model_image(route.to_model[static_cast<std::size_t>(g)], twist);
}

ExtLampElement eval_abcd_word(const GenWord& w, Gen dead_letter, Twist twist) {
  std::array<ExtLampElement, 4> images;
  for (Gen g : {Gen::a, Gen::b, Gen::c, Gen::d}) {
    images[static_cast<std::size_t>(g)] = letter_image(g, dead_letter, twist);
  }
  ExtLampElement out{LampElement(2), false};
  for (Gen g : w.letters()) out = ext_multiply(out, images[static_cast<std::size_t>(g)], twist);
  return out;
}

GenWord t_n_word(std::int64_t n) {
  // Conjugator g and its inverse; every letter is an involution.
  GenWord g;
  if (n >= 0) {
    for (std::int64_t i = 0; i < n; ++i) g = g * GenWord::parse("ab");
  } else {
    for (std::int64_t i = 0; i < -n - 1; ++i) g = g * GenWord::parse("ab");
    g.push_back(Gen::a);
  }
  return g.reversed() * GenWord::parse("d") * g;
}

ExtLampElement lamp_t_n(std::int64_t n, Twist twist) {
  return eval_abcd_word(t_n_word(n), Gen::d, twist);
}

bool StructureReport::all_passed() const {
  for (const auto& item : items) {
    if (!item.passed) return false;
  }
  return true;
}

namespace {

ExtLampElement conj(const ExtLampElement& x, const ExtLampElement& g, Twist twist) {
  return ext_multiply(ext_multiply(ext_inverse(g, twist), x, twist), g, twist);
}

void fail(CheckItem& item, const std::string& why) {
  if (item.passed) item.detail = why;
  item.passed = false;
}

}  // namespace

StructureReport structure_report(std::int64_t window, Twist twist, std::uint64_t seed) {
  if (window < 1) throw std::invalid_argument("structure window must be >= 1");
  StructureReport report;
  report.window = window;

  std::map<std::int64_t, ExtLampElement> tn;
  for (std::int64_t i = -window; i <= window + 1; ++i) tn.emplace(i, lamp_t_n(i, twist));
  const ExtLampElement ab = eval_abcd_word(GenWord::parse("ab"), Gen::d, twist);
  const ExtLampElement a = eval_abcd_word(GenWord::parse("a"), Gen::d, twist);

  CheckItem distinct{"t_n pairwise distinct", true, ""};
  CheckItem abelian{"[t_i, t_j] = e", true, ""};
  for (std::int64_t i = -window; i <= window; ++i) {
    for (std::int64_t j = i + 1; j <= window; ++j) {
      const auto& ti = tn.at(i);
      const auto& tj = tn.at(j);
      if (ti == tj) fail(distinct, "t_" + std::to_string(i) + " = t_" + std::to_string(j));
      const auto c = ext_multiply(ext_multiply(ext_inverse(ti, twist), ext_inverse(tj, twist), twist),
                                  ext_multiply(ti, tj, twist), twist);
      if (!c.is_identity()) {
        fail(abelian, "[t_" + std::to_string(i) + ", t_" + std::to_string(j) + "] = " + c.to_string());
      }
    }
  }

  CheckItem shifting{"t_i^{ab} = t_{i+1}", true, ""};
  for (std::int64_t i = -window; i <= window; ++i) {
    if (!(conj(tn.at(i), ab, twist) == tn.at(i + 1))) {
      fail(shifting, "t_" + std::to_string(i) + "^{ab} != t_" + std::to_string(i + 1));
    }
  }

  // Every product of t's has shift 0; nonzero powers of ab do not.
  CheckItem separated{"D meets <ab> trivially", true, ""};
  Rng rng(seed);
  ExtLampElement power{LampElement(2), false};
  for (std::int64_t n = 1; n <= window; ++n) {
    power = ext_multiply(power, ab, twist);
    for (const auto& p : {power, ext_inverse(power, twist)}) {
      if (p.flip || p.base.shift() == 0) fail(separated, "(ab)^" + std::to_string(n) + " has shift 0");
    }
  }
  for (int sample = 0; sample < 200; ++sample) {
    ExtLampElement prod{LampElement(2), false};
    const auto terms = uniform_between(rng, 1, 6);
    for (std::int64_t k = 0; k < terms; ++k) {
      prod = ext_multiply(prod, tn.at(uniform_between(rng, -window, window)), twist);
    }
    if (prod.flip || prod.base.shift() != 0) fail(separated, "t-product with nonzero shift");
  }

  CheckItem factor{"unique factorization K . <a>", true, ""};
  const std::array<Gen, 4> letters{Gen::a, Gen::b, Gen::c, Gen::d};
  for (int sample = 0; sample < 200; ++sample) {
    GenWord w;
    const auto len = uniform_between(rng, 0, 16);
    for (std::int64_t k = 0; k < len; ++k) w.push_back(letters[uniform_below(rng, 4)]);
    const ExtLampElement x = eval_abcd_word(w, Gen::d, twist);
    int factorizations = 0;
    for (int eps = 0; eps < 2; ++eps) {
      const ExtLampElement a_eps = eps == 1 ? a : ExtLampElement{LampElement(2), false};
      const ExtLampElement k = ext_multiply(x, ext_inverse(a_eps, twist), twist);
      if (!k.flip && ext_multiply(k, a_eps, twist) == x) ++factorizations;
    }
    if (factorizations != 1) fail(factor, "word " + w.to_string() + " factors " +
                                              std::to_string(factorizations) + " ways");
  }

  report.items = {distinct, abelian, shifting, separated, factor};
  return report;
}

CheckItem model_relations_check(Twist twist) {
  CheckItem item{"a^2 = b^2 = c^2 = d^2 = bcd = e in the model", true, ""};
  for (Gen dead : {Gen::d, Gen::c, Gen::b}) {
    for (const char* rel : {"aa", "bb", "cc", "dd", "bcd"}) {
      const auto x = eval_abcd_word(GenWord::parse(rel), dead, twist);
      if (!x.is_identity()) {
        fail(item, std::string(rel) + " = " + x.to_string() + " (dead letter " + gen_char(dead) + ")");
      }
    }
  }
  return item;
}

LampElement random_lamp_element(Rng& rng, std::int64_t spread, std::uint32_t modulus) {
  LampElement out = LampElement::shift_by(uniform_between(rng, -spread, spread), modulus);
  const auto count = uniform_between(rng, 0, 4);
  for (std::int64_t i = 0; i < count; ++i) {
    out.set_lamp(uniform_between(rng, -spread, spread),
                 static_cast<std::uint32_t>(uniform_between(rng, 1, modulus - 1)));
  }
  return out;
}

CheckItem metabelian_check(std::size_t samples, std::uint64_t seed) {
  CheckItem item{"metabelian identities", true, ""};
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    std::array<LampElement, 4> u{random_lamp_element(rng, 6), random_lamp_element(rng, 6),
                                 random_lamp_element(rng, 6), random_lamp_element(rng, 6)};
    const auto c1 = commutator(u[0], u[1]);
    const auto c2 = commutator(u[2], u[3]);
    if (c1.shift() != 0 || c2.shift() != 0) fail(item, "commutator with nonzero shift");
    if (!commutator(c1, c2).is_identity()) fail(item, "[[u1,u2],[u3,u4]] != e");
  }
  return item;
}

}  // namespace condense
