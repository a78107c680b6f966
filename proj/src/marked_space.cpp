#include "condense/marked_space.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "condense/lamplighter.hpp"
#include "condense/parallel.hpp"

namespace condense {

// ---------------------------------------------------------------------------
// Handles

MarkedGroupHandle trivial_group_handle(std::uint32_t k) {
  MarkedGroupHandle h;
  h.label = "trivial";
  h.k = k;
  h.alphabet = std::string("abcdefghijklmnopqrstuvwxyz").substr(0, k);
  h.trivial = [](const FreeWord&) { return true; };
  h.involutive.assign(k, true);
  h.fingerprint = [](const FreeWord&, std::size_t) { return std::string(); };
  h.fingerprint_exact = true;
  return h;
}

MarkedGroupHandle free_group_handle(std::uint32_t k) {
  MarkedGroupHandle h;
  h.label = "free";
  h.k = k;
  h.alphabet = std::string("abcdefghijklmnopqrstuvwxyz").substr(0, k);
  h.trivial = [](const FreeWord& w) { return free_reduce(w).empty(); };
  h.involutive.assign(k, false);
  h.fingerprint = [](const FreeWord& w, std::size_t) {
    const FreeWord r = free_reduce(w);
    std::string key;
    for (const Letter& l : r.letters()) key.push_back(static_cast<char>(l.code()));
    return key;
  };
  h.fingerprint_exact = true;
  return h;
}

MarkedGroupHandle lamplighter_handle(std::uint32_t modulus) {
  MarkedGroupHandle h;
  h.label = "lamplighter Z_" + std::to_string(modulus) + " wr Z";
  h.k = 2;
  h.alphabet = "st";
  h.trivial = [modulus](const FreeWord& w) { return eval_st_word(w, modulus).is_identity(); };
  h.involutive = {modulus == 2, false};
  h.fingerprint = [modulus](const FreeWord& w, std::size_t) {
    return eval_st_word(w, modulus).to_string();
  };
  h.fingerprint_exact = true;
  return h;
}

namespace {

Gen dead_letter_for(std::uint8_t symbol) { return route_constant(symbol).dead; }

void require_supported(const Omega& omega) {
  if (omega.eventually_constant() && !omega.constant()) {
    throw UnsupportedDomain("omega " + omega.to_string() +
                            " is eventually constant but not constant; not supported");
  }
}

}  // namespace

MarkedGroupHandle grigorchuk_handle(const Omega& omega) {
  require_supported(omega);
  MarkedGroupHandle h;
  h.label = "G" + omega.to_string();
  h.k = 4;
  h.alphabet = "abcd";
  h.involutive.assign(4, true);
  if (omega.constant()) {
    const Gen dead = dead_letter_for(omega.period()[0]);
    h.trivial = [dead](const FreeWord& w) { return eval_abcd_word(to_gen_word(w), dead).is_identity(); };
    h.fingerprint = [dead](const FreeWord& w, std::size_t) {
      return eval_abcd_word(to_gen_word(w), dead).to_string();
    };
    h.fingerprint_exact = true;
    return h;
  }
  h.trivial = [omega](const FreeWord& w) { return is_trivial(to_gen_word(w), omega); };
  h.fingerprint = [omega](const FreeWord& w, std::size_t max_len) {
    return portrait_of(to_gen_word(w), omega, fingerprint_depth(max_len, omega)).key();
  };
  return h;
}

MarkedGroupHandle l_handle(const Omega& omega) {
  require_supported(omega);
  MarkedGroupHandle h;
  h.label = "L" + omega.to_string();
  h.k = 2;
  h.alphabet = "xy";
  h.involutive = {true, false};
  if (omega.constant()) {
    const Gen dead = dead_letter_for(omega.period()[0]);
    h.trivial = [dead](const FreeWord& w) {
      return eval_abcd_word(translate_L_word(w), dead).is_identity();
    };
    h.fingerprint = [dead](const FreeWord& w, std::size_t) {
      return eval_abcd_word(translate_L_word(w), dead).to_string();
    };
    h.fingerprint_exact = true;
    return h;
  }
  h.trivial = [omega](const FreeWord& w) { return is_trivial(translate_L_word(w), omega); };
  h.fingerprint = [omega](const FreeWord& w, std::size_t max_len) {
    // Each of x, y spells at most two letters of {a, b, c, d}.
    return portrait_of(translate_L_word(w), omega, fingerprint_depth(2 * max_len, omega)).key();
  };
  return h;
}

// ---------------------------------------------------------------------------
// Element store

ElementStore::ElementStore(const MarkedGroupHandle& handle, std::size_t max_len)
    : handle_(&handle), max_len_(max_len) {
  if (!handle.trivial) throw std::invalid_argument("marked group handle has no oracle");
}

std::string ElementStore::key_of(const FreeWord& w) const {
  return handle_->fingerprint ? handle_->fingerprint(w, max_len_) : std::string();
}

std::optional<std::size_t> ElementStore::find(const FreeWord& w, const std::string& key) {
  ++stats_.lookups;
  if (!handle_->fingerprint) {
    for (std::size_t id = 0; id < reps_.size(); ++id) {
      ++stats_.oracle_calls;
      if (handle_->trivial(free_reduce(w * reps_[id].inverse()))) return id;
    }
    return std::nullopt;
  }
  const auto it = buckets_.find(key);
  if (it == buckets_.end()) return std::nullopt;
  for (std::size_t id : it->second) {
    ++stats_.key_matches;
    if (handle_->fingerprint_exact) return id;
    ++stats_.oracle_calls;
    if (handle_->trivial(free_reduce(w * reps_[id].inverse()))) {
      ++stats_.oracle_confirms;
      return id;
    }
    throw FingerprintMismatch(handle_->label + ": words " + w.to_string(handle_->alphabet) + " and " +
                              reps_[id].to_string(handle_->alphabet) +
                              " share a fingerprint but differ");
  }
  return std::nullopt;
}

std::size_t ElementStore::insert(const FreeWord& w, std::string key) {
  const std::size_t id = reps_.size();
  reps_.push_back(w);
  if (handle_->fingerprint) buckets_[std::move(key)].push_back(id);
  return id;
}

// ---------------------------------------------------------------------------
// Balls and growth

std::int64_t CayleyBall::walk(const FreeWord& w) const {
  std::int64_t cur = 0;
  for (const Letter& l : w.letters()) {
    cur = edges[static_cast<std::size_t>(cur)][l.code()];
    if (cur < 0) return -1;
  }
  return cur;
}

namespace {

struct Candidate {
  std::size_t source = 0;
  std::uint32_t code = 0;
  FreeWord word;
  std::string key;
};

// Candidates rep(e) . x for e in [begin, end), in enumeration order.  Letters
// x^-1 for involutive generators are skipped when `skip_inverse[gen]`.
std::vector<Candidate> expand(const std::vector<FreeWord>& reps, std::size_t begin, std::size_t end,
                              std::uint32_t k, const std::vector<bool>& skip_inverse) {
  std::vector<Candidate> out;
  out.reserve((end - begin) * 2 * k);
  for (std::size_t e = begin; e < end; ++e) {
    for (std::uint32_t code = 0; code < 2 * k; ++code) {
      const Letter x = Letter::from_code(code);
      if (x.inverse && skip_inverse[x.gen]) continue;
      FreeWord single(k);
      single.push_back(x);
      out.push_back({e, code, reps[e] * single, {}});
    }
  }
  return out;
}

}  // namespace

CayleyBall build_ball(const MarkedGroupHandle& h, std::size_t radius, unsigned threads) {
  CayleyBall ball;
  ball.radius = radius;
  ball.k = h.k;
  ElementStore store(h, 2 * radius + 1);
  const FreeWord identity(h.k);
  store.insert(identity, store.key_of(identity));
  ball.elements.push_back(identity);
  ball.edges.emplace_back(2 * h.k, -1);
  ball.layer_sizes.push_back(1);

  std::vector<bool> skip(h.k);
  for (std::uint32_t g = 0; g < h.k; ++g) skip[g] = h.is_involutive(g);

  std::size_t begin = 0;
  for (std::size_t r = 0; r <= radius; ++r) {
    const std::size_t end = ball.elements.size();
    auto cands = expand(ball.elements, begin, end, h.k, skip);
    parallel_for(cands.size(), threads, [&](std::size_t i) { cands[i].key = store.key_of(cands[i].word); });
    for (auto& c : cands) {
      auto found = store.find(c.word, c.key);
      std::int64_t target = -1;
      if (found) {
        target = static_cast<std::int64_t>(*found);
      } else if (r < radius) {
        target = static_cast<std::int64_t>(store.insert(c.word, std::move(c.key)));
        ball.elements.push_back(c.word);
        ball.edges.emplace_back(2 * h.k, -1);
      }
      ball.edges[c.source][c.code] = target;
    }
    for (std::size_t e = begin; e < end; ++e) {
      for (std::uint32_t g = 0; g < h.k; ++g) {
        if (skip[g]) ball.edges[e][2 * g + 1] = ball.edges[e][2 * g];
      }
    }
    if (r < radius) ball.layer_sizes.push_back(ball.elements.size() - end);
    begin = end;
  }
  ball.stats = store.stats();
  return ball;
}

std::vector<std::uint64_t> growth_sequence(const MarkedGroupHandle& h, std::size_t n_max,
                                           unsigned threads) {
  const CayleyBall ball = build_ball(h, n_max, threads);
  std::vector<std::uint64_t> gamma;
  std::uint64_t total = 0;
  for (std::size_t n : ball.layer_sizes) {
    total += n;
    gamma.push_back(total);
  }
  return gamma;
}

// ---------------------------------------------------------------------------
// Relation agreement

std::optional<FreeWord> relation_disagreement(const MarkedGroupHandle& h1,
                                              const MarkedGroupHandle& h2, std::size_t max_len) {
  if (h1.k != h2.k) throw std::invalid_argument("generator counts differ");
  const std::uint32_t k = h1.k;
  const std::size_t radius = max_len / 2;
  const bool boundary = max_len % 2 == 1;
  ElementStore s1(h1, 2 * radius + 1);
  ElementStore s2(h2, 2 * radius + 1);
  const FreeWord identity(k);
  s1.insert(identity, s1.key_of(identity));
  s2.insert(identity, s2.key_of(identity));
  std::vector<std::size_t> partner{0};  // store-1 id -> store-2 id
  std::vector<FreeWord> reps{identity};

  std::vector<bool> skip(k);
  for (std::uint32_t g = 0; g < k; ++g) skip[g] = h1.is_involutive(g) && h2.is_involutive(g);

  std::size_t begin = 0;
  for (std::size_t r = 0; r <= radius; ++r) {
    if (r == radius && !boundary) break;
    const std::size_t end = reps.size();
    for (auto& c : expand(reps, begin, end, k, skip)) {
      const auto f1 = s1.find(c.word, s1.key_of(c.word));
      const auto f2 = s2.find(c.word, s2.key_of(c.word));
      if (f1 && f2) {
        if (partner[*f1] != *f2) return free_reduce(c.word * s1.rep(*f1).inverse());
      } else if (f1) {
        return free_reduce(c.word * s1.rep(*f1).inverse());
      } else if (f2) {
        return free_reduce(c.word * s2.rep(*f2).inverse());
      } else if (r < radius) {
        s1.insert(c.word, s1.key_of(c.word));
        s2.insert(c.word, s2.key_of(c.word));
        partner.push_back(s2.size() - 1);
        reps.push_back(c.word);
      }
    }
    begin = end;
  }
  return std::nullopt;
}

bool relation_agreement(const MarkedGroupHandle& h1, const MarkedGroupHandle& h2,
                        std::size_t max_len) {
  return !relation_disagreement(h1, h2, max_len).has_value();
}

std::string Distance::to_string() const {
  return std::string(exact ? "" : "<= ") + "2^-" + (n < 0 ? "(" + std::to_string(n) + ")" : std::to_string(n));
}

Distance agree_radius(const MarkedGroupHandle& h1, const MarkedGroupHandle& h2, int n_max) {
  if (h1.k != h2.k) throw std::invalid_argument("generator counts differ");
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  for (int n = 0; n <= n_max; ++n) {
    if (!relation_agreement(h1, h2, static_cast<std::size_t>(2 * n + 1))) return {n - 1, true};
  }
  return {n_max, false};
}

std::vector<FreeWord> relation_set(const MarkedGroupHandle& h, std::size_t max_len) {
  const CayleyBall ball = build_ball(h, (max_len + 1) / 2);
  std::vector<FreeWord> out;
  ReducedWordEnumerator it(h.k, max_len);
  FreeWord w(h.k);
  while (it.next(w)) {
    const std::size_t half = (w.size() + 1) / 2;
    FreeWord u(h.k, {w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(half)});
    FreeWord v(h.k, {w.letters().begin() + static_cast<std::ptrdiff_t>(half), w.letters().end()});
    if (ball.walk(u) == ball.walk(v.inverse())) out.push_back(w);
  }
  return out;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<MarkedGroupHandle>& targets,
                                              const MarkedGroupHandle& limit, int n_max,
                                              std::span<const std::int64_t> prefix_lens) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].k != limit.k) throw std::invalid_argument("generator counts differ");
    ConvergenceRow row;
    row.index = i;
    row.prefix_len = i < prefix_lens.size() ? prefix_lens[i] : -1;
    row.label = targets[i].label;
    row.distance = agree_radius(targets[i], limit, n_max);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Separating words
//
// The shortlex-first separator w has every subword shortlex-least for its
// element of the diagonal group D = <(g, g')> in G1 x G2: otherwise swapping
// that subword for a smaller equal one gives a smaller separator.  So
// w = u y with u, y representatives of D of lengths ceil(|w|/2) and
// floor(|w|/2), and w is trivial in Gi iff u = y^-1 there.

namespace {

class DiagonalBall {
 public:
  DiagonalBall(const MarkedGroupHandle& h1, const MarkedGroupHandle& h2, std::size_t radius,
               unsigned threads)
      : h1_(h1), h2_(h2), s1_(h1, 2 * radius), s2_(h2, 2 * radius), threads_(threads), skip_(h1.k) {
    for (std::uint32_t g = 0; g < h1.k; ++g) skip_[g] = h1.is_involutive(g) && h2.is_involutive(g);
    const FreeWord identity(h1.k);
    const auto id1 = s1_.insert(identity, s1_.key_of(identity));
    const auto id2 = s2_.insert(identity, s2_.key_of(identity));
    add(identity, id1, id2);
    layer_begin_ = {0, 1};
  }

  std::size_t layers() const { return layer_begin_.size() - 1; }

  void grow() {
    const std::size_t begin = layer_begin_[layer_begin_.size() - 2];
    const std::size_t end = layer_begin_.back();
    auto cands = expand(reps_, begin, end, h1_.k, skip_);
    std::vector<std::string> k1(cands.size());
    std::vector<std::string> k2(cands.size());
    parallel_for(cands.size(), threads_, [&](std::size_t i) {
      k1[i] = s1_.key_of(cands[i].word);
      k2[i] = s2_.key_of(cands[i].word);
    });
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const FreeWord& w = cands[i].word;
      if (w.size() <= reps_[cands[i].source].size()) continue;  // cancelled
      auto f1 = s1_.find(w, k1[i]);
      auto f2 = s2_.find(w, k2[i]);
      const std::size_t id1 = f1 ? *f1 : s1_.insert(w, std::move(k1[i]));
      const std::size_t id2 = f2 ? *f2 : s2_.insert(w, std::move(k2[i]));
      if (!index_.contains(pair_key(id1, id2))) add(w, id1, id2);
    }
    layer_begin_.push_back(reps_.size());
  }

  // Separator of exactly `len` letters, if any.
  std::optional<FreeWord> separator(std::size_t len) {
    const std::size_t hu = (len + 1) / 2;
    const std::size_t hy = len / 2;
    fill_inverses(hy);
    // Representatives y of length hy bucketed by the elements of y^-1.
    std::unordered_map<std::size_t, std::vector<std::size_t>> by1;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by2;
    for (std::size_t y = layer_begin_[hy]; y < layer_begin_[hy + 1]; ++y) {
      by1[inv1_[y]].push_back(y);
      by2[inv2_[y]].push_back(y);
    }
    for (std::size_t u = layer_begin_[hu]; u < layer_begin_[hu + 1]; ++u) {
      std::optional<std::size_t> best;
      auto consider = [&](std::size_t y) {
        if (hy > 0 && reps_[u][hu - 1] == reps_[y][0].inverted()) return;
        if (!best || y < *best) best = y;
      };
      if (auto it = by1.find(id1_[u]); it != by1.end()) {
        for (std::size_t y : it->second) {
          if (inv2_[y] != id2_[u]) consider(y);
        }
      }
      if (auto it = by2.find(id2_[u]); it != by2.end()) {
        for (std::size_t y : it->second) {
          if (inv1_[y] != id1_[u]) consider(y);
        }
      }
      if (best) return reps_[u] * reps_[*best];
    }
    return std::nullopt;
  }

 private:
  static std::uint64_t pair_key(std::size_t a, std::size_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  void add(const FreeWord& w, std::size_t id1, std::size_t id2) {
    index_.emplace(pair_key(id1, id2), reps_.size());
    reps_.push_back(w);
    id1_.push_back(id1);
    id2_.push_back(id2);
  }

  // Elements of y^-1 for representatives in layer `layer`.  They lie in the
  // ball already explored, so lookups always succeed.
  void fill_inverses(std::size_t layer) {
    inv1_.resize(reps_.size(), kUnset);
    inv2_.resize(reps_.size(), kUnset);
    for (std::size_t y = layer_begin_[layer]; y < layer_begin_[layer + 1]; ++y) {
      if (inv1_[y] != kUnset) continue;
      const FreeWord inv = reps_[y].inverse();
      const auto f1 = s1_.find(inv, s1_.key_of(inv));
      const auto f2 = s2_.find(inv, s2_.key_of(inv));
      if (!f1 || !f2) throw std::logic_error("inverse of a ball element escaped the ball");
      inv1_[y] = *f1;
      inv2_[y] = *f2;
    }
  }

  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  const MarkedGroupHandle& h1_;
  const MarkedGroupHandle& h2_;
  ElementStore s1_;
  ElementStore s2_;
  unsigned threads_;
  std::vector<bool> skip_;
  std::vector<FreeWord> reps_;
  std::vector<std::size_t> id1_;
  std::vector<std::size_t> id2_;
  std::vector<std::size_t> inv1_;
  std::vector<std::size_t> inv2_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::size_t> layer_begin_;
};

bool is_square_word(const FreeWord& w) {
  if (w.empty() || w.size() % 2 != 0) return false;
  const std::size_t half = w.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    if (!(w[i] == w[i + half])) return false;
  }
  return true;
}

}  // namespace

std::optional<Separation> find_separating_word(const MarkedGroupHandle& h1,
                                               const MarkedGroupHandle& h2, std::size_t max_len,
                                               unsigned threads) {
  if (h1.k != h2.k) throw std::invalid_argument("generator counts differ");
  if (h1.trivial(FreeWord(h1.k)) != h2.trivial(FreeWord(h2.k))) {
    throw std::logic_error("an oracle reports the empty word as nontrivial");
  }
  DiagonalBall ball(h1, h2, (max_len + 1) / 2, threads);
  for (std::size_t len = 1; len <= max_len; ++len) {
    while (ball.layers() <= (len + 1) / 2) ball.grow();
    if (auto w = ball.separator(len)) {
      Separation sep;
      sep.word = *w;
      sep.trivial_in_first = h1.trivial(*w);
      if (sep.trivial_in_first == h2.trivial(*w)) {
        throw std::logic_error("separator " + w->to_string(h1.alphabet) + " refuted by the oracles");
      }
      sep.is_square = is_square_word(*w);
      return sep;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Export

void write_growth_csv(std::ostream& os, const std::vector<std::uint64_t>& gamma) {
  os << "n,gamma\n";
  for (std::size_t n = 0; n < gamma.size(); ++n) os << n << ',' << gamma[n] << '\n';
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "index,prefix_len,agree_N,exact\n";
  for (const auto& r : rows) {
    os << r.index << ',' << r.prefix_len << ',' << r.distance.n << ',' << (r.distance.exact ? 1 : 0)
       << '\n';
  }
}

void write_relation_set(std::ostream& os, const std::vector<FreeWord>& words,
                        const std::string& alphabet) {
  for (const auto& w : words) os << w.to_string(alphabet) << '\n';
}

}  // namespace condense
