#pragma once

// Batch front end.  Results go to `out` (or the --out file), diagnostics to
// `err`.  Exit codes: 0 success, 1 property violation, 2 usage or parse
// error, 3 unsupported input domain.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "condense/random.hpp"
#include "condense/words.hpp"

namespace condense {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnsupported = 3;

/// Safety caps; requests beyond them are rejected with kExitUsage.
struct CliCaps {
  static constexpr std::size_t growth_radius = 16;
  static constexpr int agree_radius = 12;
  static constexpr std::size_t separator_length = 24;
  static constexpr std::size_t word_length = 64;
  static constexpr std::size_t samples = 1000000;
  static constexpr std::size_t approximant_zeros = 40;
  static constexpr std::int64_t window = 400;
  static constexpr std::uint32_t modulus = 64;
  static constexpr unsigned threads = 256;
};

/// Klein-alternating word: length uniform in [1, max_len], first letter `a`
/// or not with equal odds, each non-`a` letter uniform over {b, c, d}.
GenWord sample_alternating_word(Rng& rng, std::size_t max_len);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace condense
