#include "condense/grigorchuk.hpp"

#include <algorithm>
#include <bit>

namespace condense {

namespace {

void normalize(std::vector<std::uint8_t>& pre, std::vector<std::uint8_t>& period) {
  const std::size_t n = period.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = period[i] == period[i - p];
    if (periodic) {
      period.resize(p);
      break;
    }
  }
  while (!pre.empty() && pre.back() == period.back()) {
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
    pre.pop_back();
  }
}

std::vector<std::uint8_t> parse_symbols(std::string_view text) {
  std::vector<std::uint8_t> out;
  for (char ch : text) {
    if (ch < '0' || ch > '2') {
      throw std::invalid_argument(std::string("omega symbol must be 0, 1 or 2, got '") + ch + "'");
    }
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

// Sections of w at the two children, for either parity.  Table entries are
// read at omega position `offset`.
std::pair<GenWord, GenWord> split(const GenWord& w, const Omega& omega, std::size_t offset) {
  const std::uint8_t symbol = omega.at(offset);
  GenWord left;
  GenWord right;
  int side = 0;  // where a vertex starting in the 0-subtree currently is
  for (Gen g : w.letters()) {
    if (g == Gen::a) {
      side ^= 1;
      continue;
    }
    const bool active = spin_active(g, symbol);
    if (side == 0) {
      if (active) left.push_back(Gen::a);
      right.push_back(g);
    } else {
      left.push_back(g);
      if (active) right.push_back(Gen::a);
    }
  }
  return {klein_reduce(left), klein_reduce(right)};
}

bool single_letter_trivial(Gen g, const Omega& omega, std::size_t offset) {
  if (g == Gen::a) return false;
  for (std::size_t i = offset; i < offset + omega.span(); ++i) {
    if (spin_active(g, omega.at(i))) return false;
  }
  return true;
}

bool trivial_at(const GenWord& word, const Omega& omega, std::size_t offset) {
  const GenWord w = klein_reduce(word);
  if (w.empty()) return true;
  if (root_parity(w) == Parity::odd) return false;
  if (w.size() == 1) return single_letter_trivial(w[0], omega, offset);
  const auto [left, right] = split(w, omega, offset);
  return trivial_at(left, omega, offset + 1) && trivial_at(right, omega, offset + 1);
}

void fill_portrait(const GenWord& w, const Omega& omega, std::size_t offset, std::size_t node,
                   std::size_t level, std::size_t depth, std::vector<bool>& swaps) {
  if (level >= depth || w.empty()) return;
  swaps[node] = root_parity(w) == Parity::odd;
  if (level + 1 == depth) return;
  const auto [left, right] = split(w, omega, offset);
  fill_portrait(left, omega, offset + 1, 2 * node + 1, level + 1, depth, swaps);
  fill_portrait(right, omega, offset + 1, 2 * node + 2, level + 1, depth, swaps);
}

std::size_t ceil_log2(std::size_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

}  // namespace

Omega::Omega(std::vector<std::uint8_t> preperiod, std::vector<std::uint8_t> period)
    : pre_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty()) throw std::invalid_argument("omega period must be nonempty");
  for (auto s : pre_) {
    if (s > 2) throw std::invalid_argument("omega symbols must be in {0,1,2}");
  }
  for (auto s : period_) {
    if (s > 2) throw std::invalid_argument("omega symbols must be in {0,1,2}");
  }
  normalize(pre_, period_);
}

Omega Omega::parse(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') {
    throw std::invalid_argument("omega must look like \"<preperiod>(<period>)\"");
  }
  const auto pre = parse_symbols(text.substr(0, open));
  const auto period = parse_symbols(text.substr(open + 1, text.size() - open - 2));
  if (period.empty()) throw std::invalid_argument("omega period must be nonempty");
  return Omega(pre, period);
}

Omega Omega::approximant(std::size_t zeros) {
  return Omega(std::vector<std::uint8_t>(zeros, 0), {0, 1, 2});
}

Omega Omega::constant(std::uint8_t symbol) { return Omega({}, {symbol}); }

Omega Omega::shifted(std::size_t by) const {
  std::vector<std::uint8_t> pre = pre_;
  std::vector<std::uint8_t> period = period_;
  const std::size_t from_pre = std::min(by, pre.size());
  pre.erase(pre.begin(), pre.begin() + static_cast<std::ptrdiff_t>(from_pre));
  const std::size_t rot = (by - from_pre) % period.size();
  std::rotate(period.begin(), period.begin() + static_cast<std::ptrdiff_t>(rot), period.end());
  return Omega(std::move(pre), std::move(period));
}

std::string Omega::to_string() const {
  std::string out;
  for (auto s : pre_) out.push_back(static_cast<char>('0' + s));
  out.push_back('(');
  for (auto s : period_) out.push_back(static_cast<char>('0' + s));
  out.push_back(')');
  return out;
}

TreeVertex TreeVertex::parse(std::string_view bits) {
  TreeVertex v;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("tree vertex must be a 0/1 string");
    v.path.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return v;
}

std::string TreeVertex::to_string() const {
  std::string out;
  for (auto b : path) out.push_back(static_cast<char>('0' + b));
  return out;
}

TreeVertex generator_action(Gen g, const Omega& omega, const TreeVertex& v) {
  TreeVertex out = v;
  if (out.path.empty()) return out;
  if (g == Gen::a) {
    out.path[0] ^= 1;
    return out;
  }
  // b, c, d fix the spine 1^n and act through the table just below its
  // first 0.
  for (std::size_t i = 0; i < out.path.size(); ++i) {
    if (out.path[i] == 1) continue;
    if (i + 1 < out.path.size() && spin_active(g, omega.at(i))) out.path[i + 1] ^= 1;
    break;
  }
  return out;
}

TreeVertex act(const GenWord& w, const Omega& omega, const TreeVertex& v) {
  TreeVertex cur = v;
  for (Gen g : w.letters()) cur = generator_action(g, omega, cur);
  return cur;
}

Parity root_parity(const GenWord& w) {
  const auto n = std::count(w.letters().begin(), w.letters().end(), Gen::a);
  return n % 2 == 0 ? Parity::even : Parity::odd;
}

std::pair<GenWord, GenWord> sections(const GenWord& w, const Omega& omega) {
  if (root_parity(w) == Parity::odd) {
    throw std::invalid_argument("sections: word has odd parity and does not fix level 1");
  }
  return split(w, omega, 0);
}

bool is_trivial(const GenWord& w, const Omega& omega) {
  if (omega.eventually_constant()) {
    throw UnsupportedDomain("is_trivial: omega " + omega.to_string() +
                            " is eventually constant; the tree action is not faithful there");
  }
  return trivial_at(w, omega, 0);
}

Portrait::Portrait(std::size_t depth, std::vector<bool> swaps)
    : depth_(depth), swaps_(std::move(swaps)) {
  if (swaps_.size() != (std::size_t{1} << depth_) - 1) {
    throw std::invalid_argument("portrait size does not match depth");
  }
}

bool Portrait::swaps_at(const TreeVertex& v) const {
  if (v.depth() >= depth_) throw std::out_of_range("vertex below portrait depth");
  std::size_t node = 0;
  for (auto b : v.path) node = 2 * node + 1 + b;
  return swaps_[node];
}

bool Portrait::is_identity() const {
  return std::none_of(swaps_.begin(), swaps_.end(), [](bool b) { return b; });
}

std::string Portrait::key() const {
  std::string out(1 + (swaps_.size() + 7) / 8, '\0');
  out[0] = static_cast<char>(depth_);
  for (std::size_t i = 0; i < swaps_.size(); ++i) {
    if (swaps_[i]) out[1 + i / 8] = static_cast<char>(out[1 + i / 8] | (1 << (i % 8)));
  }
  return out;
}

Portrait portrait_of(const GenWord& w, const Omega& omega, std::size_t depth) {
  if (depth > 24) throw std::invalid_argument("portrait depth capped at 24");
  std::vector<bool> swaps((std::size_t{1} << depth) - 1, false);
  fill_portrait(klein_reduce(w), omega, 0, 0, 0, depth, swaps);
  return Portrait(depth, std::move(swaps));
}

std::size_t activation_depth(const Omega& omega) {
  std::size_t best = 1;
  for (std::size_t p = 0; p < omega.span(); ++p) {
    for (Gen g : {Gen::b, Gen::c, Gen::d}) {
      for (std::size_t i = p; i < p + omega.span(); ++i) {
        if (spin_active(g, omega.at(i))) {
          best = std::max(best, i - p + 2);
          break;
        }
      }
    }
  }
  return best;
}

std::size_t fingerprint_depth(std::size_t max_len, const Omega& omega) {
  return ceil_log2(std::max<std::size_t>(max_len, 2)) + 1 + activation_depth(omega);
}

std::optional<std::uint64_t> order_of(const GenWord& w, const Omega& omega, unsigned max_exp) {
  GenWord power = klein_reduce(w);
  for (unsigned k = 0; k <= max_exp; ++k) {
    if (is_trivial(power, omega)) return std::uint64_t{1} << k;
    power = klein_reduce(power * power);
  }
  return std::nullopt;
}

GenWord translate_L_word(const FreeWord& w) {
  if (w.rank() != 2) throw std::invalid_argument("L-words are over the two letters x, y");
  GenWord out;
  for (const Letter& l : w.letters()) {
    if (l.gen == 0) {
      out.push_back(Gen::d);
    } else if (!l.inverse) {
      out.push_back(Gen::a);
      out.push_back(Gen::b);
    } else {
      out.push_back(Gen::b);
      out.push_back(Gen::a);
    }
  }
  return klein_reduce(out);
}

std::string_view to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::trivial: return "trivial";
    case LimitVerdict::nontrivial: return "nontrivial";
    case LimitVerdict::unstable: return "unstable";
  }
  return "unstable";
}

LimitVerdict limit_trivial(const GenWord& w, std::size_t k_min, std::size_t k_max) {
  if (k_max < k_min || k_max - k_min < 2) {
    throw std::invalid_argument("limit_trivial needs a window of at least three approximants");
  }
  const GenWord reduced = klein_reduce(w);
  std::optional<bool> verdict;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const bool t = is_trivial(reduced, Omega::approximant(k));
    if (verdict && *verdict != t) return LimitVerdict::unstable;
    verdict = t;
  }
  return *verdict ? LimitVerdict::trivial : LimitVerdict::nontrivial;
}

std::pair<std::size_t, std::size_t> default_limit_window(std::size_t word_len) {
  const std::size_t base = ceil_log2(word_len + 1);
  return {base + 2, base + 6};
}

LimitVerdict limit_trivial(const GenWord& w) {
  const auto [lo, hi] = default_limit_window(w.size());
  return limit_trivial(w, lo, hi);
}

GenWord ConstantRoute::relabel(const GenWord& w) const {
  GenWord out;
  for (Gen g : w.letters()) out.push_back(to_model[static_cast<std::size_t>(g)]);
  return out;
}

ConstantRoute route_constant(std::uint8_t symbol) {
  ConstantRoute r;
  r.symbol = symbol;
  switch (symbol) {
    case 0:
      break;
    case 1:
      // Swapping the symbols 0 and 1 exchanges the zeta and delta tables.
      r.dead = Gen::c;
      r.to_model = {Gen::a, Gen::b, Gen::d, Gen::c};
      break;
    case 2:
      r.dead = Gen::b;
      r.to_model = {Gen::a, Gen::d, Gen::c, Gen::b};
      break;
    default:
      throw std::invalid_argument("omega symbols must be in {0,1,2}");
  }
  return r;
}

}  // namespace condense
