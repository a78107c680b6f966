#include "condense/circle_product.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "condense/parallel.hpp"

namespace condense {

std::string to_string(SSpec::Variant v) {
  return v == SSpec::Variant::paper ? "paper" : "corrected";
}

SSpec::Variant parse_variant(const std::string& text) {
  if (text == "paper") return SSpec::Variant::paper;
  if (text == "corrected") return SSpec::Variant::corrected;
  throw std::invalid_argument("variant must be 'paper' or 'corrected'");
}

std::int64_t s_term(const SSpec& spec, std::int64_t index) {
  if (spec.m < 1) throw std::invalid_argument("m must be >= 1");
  if (index < 0) throw std::invalid_argument("negative index");
  const std::int64_t multiplier = spec.variant == SSpec::Variant::paper ? spec.m + 1 : spec.m + 2;
  const std::int64_t j = index / 2;
  const std::int64_t even = j * multiplier + j * (j + 1) / 2;
  if (index % 2 == 0) return even;
  return even + (j < spec.m - 1 ? j + 1 : j + 2);
}

std::vector<std::int64_t> build_s_sequence(const SSpec& spec, std::size_t count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(s_term(spec, static_cast<std::int64_t>(i)));
  return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> difference_witness(std::int64_t delta,
                                                                       const SSpec& spec) {
  const std::int64_t d = delta < 0 ? -delta : delta;
  if (d == 0) return std::pair<std::int64_t, std::int64_t>{0, 0};
  // Past j = max(m, |delta|) + 2 the odd gaps j + 2 exceed |delta|, so every
  // difference at index distance >= 2 does too, and the even gaps have
  // settled on their constant value, which already occurs below the bound.
  const std::int64_t j_bound = std::max(spec.m, d) + 2;
  const auto seq = build_s_sequence(spec, static_cast<std::size_t>(2 * j_bound + 4));
  for (std::size_t k = 1; k < seq.size(); ++k) {
    const auto it = std::lower_bound(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(k),
                                     seq[k] - d);
    if (it != seq.begin() + static_cast<std::ptrdiff_t>(k) && *it == seq[k] - d) {
      return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(k), it - seq.begin()};
    }
  }
  return std::nullopt;
}

bool in_difference_set(std::int64_t delta, const SSpec& spec) {
  return difference_witness(delta, spec).has_value();
}

DifferenceReport verify_difference_window(const SSpec& spec, std::int64_t window) {
  if (window <= spec.m) throw std::invalid_argument("window must exceed m");
  DifferenceReport r;
  r.spec = spec;
  r.window = window;
  if (auto w = difference_witness(spec.m, spec)) {
    r.excluded_ok = false;
    r.witness_indices = w;
    r.witness_values = {s_term(spec, w->first), s_term(spec, w->second)};
  }
  for (std::int64_t delta = 1; delta <= window; ++delta) {
    if (delta == spec.m) continue;
    if (!in_difference_set(delta, spec)) {
      r.covered_ok = false;
      r.missing.push_back(delta);
    }
  }
  const auto seq = build_s_sequence(spec, static_cast<std::size_t>(2 * window + 4));
  std::ostringstream detail;
  for (std::size_t k = 0; k + 1 < seq.size(); k += 2) {
    const std::int64_t j = static_cast<std::int64_t>(k / 2);
    const std::int64_t expected = j < spec.m - 1 ? j + 1 : j + 2;
    if (seq[k + 1] - seq[k] != expected) {
      r.gaps_ok = false;
      detail << "a_" << k + 1 << " - a_" << k << " = " << seq[k + 1] - seq[k] << " != " << expected << "; ";
    }
  }
  for (std::size_t k = 2; k < seq.size(); ++k) {
    for (std::size_t l = 0; l + 2 <= k; ++l) {
      if (seq[k] - seq[l] <= spec.m) {
        r.gaps_ok = false;
        detail << "a_" << k << " - a_" << l << " = " << seq[k] - seq[l] << " <= m; ";
      }
    }
  }
  r.gap_detail = detail.str();
  return r;
}

bool ts_adjacent(std::int64_t v1, std::int64_t v2, const SSpec& spec) {
  if (v1 == v2) throw std::invalid_argument("ts_adjacent: vertices must differ");
  return in_difference_set(v1 - v2, spec);
}

// ---------------------------------------------------------------------------

GPWord GPWord::inverse() const {
  GPWord out{modulus, {}};
  for (auto it = syllables.rbegin(); it != syllables.rend(); ++it) {
    out.syllables.push_back({it->vertex, (modulus - it->exp % modulus) % modulus});
  }
  return out;
}

GPWord GPWord::translated(std::int64_t z) const {
  GPWord out = *this;
  for (auto& s : out.syllables) s.vertex += z;
  return out;
}

GPWord GPWord::operator*(const GPWord& rhs) const {
  if (rhs.modulus != modulus) throw std::invalid_argument("vertex group modulus mismatch");
  GPWord out = *this;
  out.syllables.insert(out.syllables.end(), rhs.syllables.begin(), rhs.syllables.end());
  return out;
}

std::string GPWord::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : syllables) {
    if (!first) os << ' ';
    os << 'x' << s.vertex << '^' << s.exp;
    first = false;
  }
  return os.str();
}

GPWord gp_reduce(const GPWord& w, const Adjacency& adjacent) {
  const std::uint32_t n = w.modulus;
  if (n < 2) throw std::invalid_argument("vertex group modulus must be >= 2");
  {
    std::vector<std::int64_t> vs;
    for (const auto& s : w.syllables) vs.push_back(s.vertex);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        if (adjacent(vs[i], vs[j]) != adjacent(vs[j], vs[i])) {
          throw std::invalid_argument("adjacency is not symmetric");
        }
      }
    }
  }
  auto commute = [&](std::int64_t u, std::int64_t v) { return u != v && adjacent(u, v); };

  std::vector<Syllable> out;
  for (const auto& syl : w.syllables) {
    const std::uint32_t e = syl.exp % n;
    if (e == 0) continue;
    bool merged = false;
    for (std::size_t i = out.size(); i-- > 0;) {
      if (out[i].vertex == syl.vertex) {
        out[i].exp = (out[i].exp + e) % n;
        if (out[i].exp == 0) out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        merged = true;
        break;
      }
      if (!commute(out[i].vertex, syl.vertex)) break;
    }
    if (!merged) out.push_back({syl.vertex, e});
  }

  // Least arrangement under commutation: repeatedly emit the smallest
  // syllable that commutes with everything before it.
  GPWord result{n, {}};
  result.syllables.reserve(out.size());
  while (!out.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
      bool front = true;
      for (std::size_t j = 0; j < i && front; ++j) front = commute(out[j].vertex, out[i].vertex);
      if (!front) continue;
      if (out[i].vertex < out[best].vertex ||
          (out[i].vertex == out[best].vertex && out[i].exp < out[best].exp)) {
        best = i;
      }
    }
    result.syllables.push_back(out[best]);
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return result;
}

// ---------------------------------------------------------------------------

CircleProduct::CircleProduct(std::uint32_t modulus, SSpec spec) : modulus_(modulus), spec_(spec) {
  if (modulus < 2) throw std::invalid_argument("vertex group modulus must be >= 2");
  if (spec.m < 1) throw std::invalid_argument("m must be >= 1");
}

bool CircleProduct::adjacent(std::int64_t v1, std::int64_t v2) const {
  if (v1 == v2) throw std::invalid_argument("ts_adjacent: vertices must differ");
  const std::int64_t d = v1 > v2 ? v1 - v2 : v2 - v1;
  if (auto it = difference_cache_.find(d); it != difference_cache_.end()) return it->second;
  const bool adj = in_difference_set(d, spec_);
  difference_cache_.emplace(d, adj);
  return adj;
}

Adjacency CircleProduct::adjacency() const {
  return [this](std::int64_t u, std::int64_t v) { return adjacent(u, v); };
}

WElement CircleProduct::identity() const { return {GPWord{modulus_, {}}, 0}; }

WElement CircleProduct::x() const { return {GPWord{modulus_, {{0, 1}}}, 0}; }

WElement CircleProduct::y() const { return {GPWord{modulus_, {}}, 1}; }

WElement CircleProduct::reduce(const WElement& u) const {
  return {gp_reduce(u.word, adjacency()), u.shift};
}

WElement CircleProduct::multiply(const WElement& u, const WElement& v) const {
  if (u.word.modulus != modulus_ || v.word.modulus != modulus_) {
    throw std::invalid_argument("vertex group modulus mismatch");
  }
  return reduce({u.word * v.word.translated(u.shift), u.shift + v.shift});
}

WElement CircleProduct::inverse(const WElement& u) const {
  return reduce({u.word.inverse().translated(-u.shift), -u.shift});
}

WElement CircleProduct::eval_st_word(const FreeWord& w) const {
  if (w.rank() != 2) throw std::invalid_argument("expected a word over s, t");
  const WElement gens[2] = {x(), y()};
  const WElement invs[2] = {inverse(x()), inverse(y())};
  WElement out = identity();
  for (const Letter& l : w.letters()) out = multiply(out, l.inverse ? invs[l.gen] : gens[l.gen]);
  return out;
}

FreeWord lamplighter_relator(std::int64_t i) {
  // [s, s^{t^i}] = s^-1 (t^-i s^-1 t^i) s (t^-i s t^i)
  FreeWord w(2);
  const Letter s{0, false};
  const Letter t{1, false};
  auto conj = [&](Letter core) {
    for (std::int64_t k = 0; k < i; ++k) w.push_back(t.inverted());
    w.push_back(core);
    for (std::int64_t k = 0; k < i; ++k) w.push_back(t);
  };
  w.push_back(s.inverted());
  conj(s.inverted());
  w.push_back(s);
  conj(s);
  return w;
}

bool commutator_trivial(std::int64_t i, const SSpec& spec, std::uint32_t modulus) {
  if (i == 0) throw std::invalid_argument("commutator index must be nonzero");
  const CircleProduct w(modulus, spec);
  WElement y_pow = w.identity();
  const WElement step = i > 0 ? w.y() : w.inverse(w.y());
  for (std::int64_t k = 0; k < (i > 0 ? i : -i); ++k) y_pow = w.multiply(y_pow, step);
  const WElement xc = w.multiply(w.multiply(w.inverse(y_pow), w.x()), y_pow);
  const WElement c = w.multiply(w.multiply(w.inverse(w.x()), w.inverse(xc)), w.multiply(w.x(), xc));
  return c.is_identity();
}

bool MinimalityReport::commutators_ok() const {
  return std::all_of(commutators.begin(), commutators.end(),
                     [](const CommutatorRow& r) { return r.trivial == r.expected; });
}

bool MinimalityReport::passed() const {
  return difference.passed() && commutators_ok() && power_relator_trivial && other_relators_trivial &&
         target_relator_nontrivial;
}

MinimalityReport verify_minimality(std::uint32_t n, std::int64_t m, std::int64_t window,
                                   SSpec::Variant variant, unsigned threads) {
  if (n < 2 || m < 1 || window <= m) throw std::invalid_argument("need n >= 2, m >= 1, window > m");
  MinimalityReport r;
  r.n = n;
  r.spec = {m, variant};
  r.window = window;
  r.difference = verify_difference_window(r.spec, window);

  std::vector<std::int64_t> indices;
  for (std::int64_t i = -window; i <= window; ++i) {
    if (i != 0) indices.push_back(i);
  }
  r.commutators.resize(indices.size());
  parallel_for(indices.size(), threads, [&](std::size_t k) {
    const std::int64_t i = indices[k];
    r.commutators[k] = {i, commutator_trivial(i, r.spec, n), (i < 0 ? -i : i) != m};
  });

  const CircleProduct w(n, r.spec);
  FreeWord power(2);
  for (std::uint32_t k = 0; k < n; ++k) power.push_back({0, false});
  r.power_relator_trivial = w.eval_st_word(power).is_identity();
  for (std::int64_t i = 1; i <= window; ++i) {
    const bool trivial = w.eval_st_word(lamplighter_relator(i)).is_identity();
    if (i == m) {
      r.target_relator_nontrivial = !trivial;
    } else if (!trivial) {
      r.other_relators_trivial = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

bool racg_matrix_oracle(const GPWord& w, const Adjacency& adjacent, std::int64_t lo, std::int64_t hi) {
  if (w.modulus != 2) throw std::invalid_argument("reflection oracle needs vertex groups Z_2");
  if (hi < lo) throw std::invalid_argument("empty vertex window");
  const auto dim = static_cast<std::size_t>(hi - lo + 1);
  for (const auto& s : w.syllables) {
    if (s.vertex < lo || s.vertex > hi) throw std::out_of_range("vertex outside the oracle window");
  }
  // Bilinear form: 1 on the diagonal, 0 on commuting pairs, -1 otherwise.
  std::vector<std::vector<std::int64_t>> form(dim, std::vector<std::int64_t>(dim, 0));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i == j) {
        form[i][j] = 1;
      } else {
        const bool adj = adjacent(lo + static_cast<std::int64_t>(i), lo + static_cast<std::int64_t>(j));
        form[i][j] = adj ? 0 : -1;
      }
    }
  }
  std::vector<std::vector<std::int64_t>> p(dim, std::vector<std::int64_t>(dim, 0));
  for (std::size_t i = 0; i < dim; ++i) p[i][i] = 1;
  for (const auto& s : w.syllables) {
    if (s.exp % 2 == 0) continue;
    const auto v = static_cast<std::size_t>(s.vertex - lo);
    // P <- P * sigma_v, sigma_v = I - 2 e_v B_v^T differs from I in row v.
    for (std::size_t i = 0; i < dim; ++i) {
      const std::int64_t piv = p[i][v];
      if (piv == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        std::int64_t term = 0;
        std::int64_t next = 0;
        if (__builtin_mul_overflow(piv, 2 * form[v][j], &term) ||
            __builtin_sub_overflow(p[i][j], term, &next)) {
          throw std::overflow_error("reflection matrix entry overflow");
        }
        p[i][j] = next;
      }
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (p[i][j] != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

}  // namespace condense
