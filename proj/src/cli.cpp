#include "condense/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "condense/circle_product.hpp"
#include "condense/grigorchuk.hpp"
#include "condense/lamplighter.hpp"
#include "condense/marked_space.hpp"
#include "condense/parallel.hpp"

namespace condense {

using Json = nlohmann::ordered_json;

GenWord sample_alternating_word(Rng& rng, std::size_t max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  const auto len = static_cast<std::size_t>(uniform_between(rng, 1, static_cast<std::int64_t>(max_len)));
  bool a_turn = uniform_below(rng, 2) == 0;
  GenWord w;
  for (std::size_t i = 0; i < len; ++i) {
    if (a_turn) {
      w.push_back(Gen::a);
    } else {
      w.push_back(static_cast<Gen>(1 + uniform_below(rng, 3)));
    }
    a_turn = !a_turn;
  }
  return w;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string family = "grig";
  std::string omega;
  std::string word;
  std::string omega1;
  std::string omega2;
  std::string variant = "corrected";
  std::string out_path;
  std::size_t n_max = 4;
  std::size_t j_min = 1;
  std::size_t j_max = 6;
  std::size_t l_max = 16;
  std::size_t max_len = 14;
  std::size_t samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> k_min;
  std::optional<std::size_t> k_max;
  std::uint32_t n = 2;
  std::int64_t m = 2;
  std::int64_t window = 12;
  std::int64_t structure_window = 20;
  bool negative_control = false;
  unsigned threads = 1;
};

void cap(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

Omega omega_with_notice(const std::string& text, std::ostream& err) {
  if (text.empty()) throw UsageError("--omega is required");
  Omega om = Omega::parse(text);
  if (om.constant()) {
    err << "notice: omega " << om.to_string() << " is constant; using the lamplighter extension model\n";
  }
  return om;
}

MarkedGroupHandle family_handle(const Options& o, std::ostream& err) {
  if (o.family == "grig") return grigorchuk_handle(omega_with_notice(o.omega, err));
  if (o.family == "L") return l_handle(omega_with_notice(o.omega, err));
  if (o.family == "lamp") return lamplighter_handle(o.n);
  if (o.family == "free") return free_group_handle(2);
  throw UsageError("--family " + o.family + " is not available for this command");
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

Json separation_json(const std::optional<Separation>& s, const std::string& alphabet) {
  if (!s) return nullptr;
  return Json{{"word", s->word.to_string(alphabet)},
              {"length", s->word.size()},
              {"trivial_in_first", s->trivial_in_first},
              {"is_square", s->is_square},
              {"verified", true}};
}

// The reflection that would follow from reading the automorphism of the
// lamplighter group as s -> s^t, t -> t^-1 literally.  It is inconsistent
// with the letter images and serves as the negative control.
LampElement broken_twist(const LampElement& u) {
  LampElement out = LampElement::shift_by(-u.shift(), u.modulus());
  LampElement lamps(u.modulus());
  for (const auto& [pos, val] : u.lamps()) lamps.set_lamp(-1 - pos, val);
  return lamp_multiply(lamps, out);
}

Json check_json(const CheckItem& c) {
  return Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
}

// ---------------------------------------------------------------------------

int cmd_wp(const Options& o, std::ostream& out, std::ostream& err) {
  std::string verdict;
  if (o.family == "limit") {
    const GenWord w = GenWord::parse(o.word);
    auto [lo, hi] = default_limit_window(w.size());
    if (o.k_min) lo = *o.k_min;
    if (o.k_max) hi = *o.k_max;
    cap(hi <= CliCaps::approximant_zeros, "k window exceeds the safety cap");
    verdict = std::string(to_string(limit_trivial(w, lo, hi)));
  } else {
    const MarkedGroupHandle h = family_handle(o, err);
    const FreeWord w = FreeWord::parse(o.word, h.alphabet);
    cap(w.size() <= 100000, "word too long");
    verdict = h.trivial(w) ? "trivial" : "nontrivial";
  }
  out << verdict << '\n';
  return kExitOk;
}

int cmd_growth(const Options& o, std::ostream& out, std::ostream& err) {
  cap(o.n_max <= CliCaps::growth_radius, "--n-max exceeds the safety cap");
  const MarkedGroupHandle h = family_handle(o, err);
  write_growth_csv(out, growth_sequence(h, o.n_max, o.threads));
  return kExitOk;
}

int cmd_converge(const Options& o, std::ostream& out, std::ostream& err) {
  cap(o.j_min <= o.j_max, "--j-min must not exceed --j-max");
  cap(o.j_max <= CliCaps::approximant_zeros, "--j-max exceeds the safety cap");
  cap(o.n_max <= static_cast<std::size_t>(CliCaps::agree_radius), "--n-max exceeds the safety cap");
  const MarkedGroupHandle limit =
      o.omega.empty() ? l_handle(Omega::constant(0)) : l_handle(omega_with_notice(o.omega, err));
  const std::size_t count = o.j_max - o.j_min + 1;
  std::vector<Distance> dist(count);
  parallel_for(count, o.threads, [&](std::size_t i) {
    dist[i] = agree_radius(l_handle(Omega::approximant(o.j_min + i)), limit, static_cast<int>(o.n_max));
  });
  out << "j,agree_N,exact\n";
  for (std::size_t i = 0; i < count; ++i) {
    out << o.j_min + i << ',' << dist[i].n << ',' << (dist[i].exact ? "true" : "false") << '\n';
  }
  return kExitOk;
}

int cmd_separate(const Options& o, std::ostream& out, std::ostream& err) {
  cap(o.l_max <= CliCaps::separator_length, "--l-max exceeds the safety cap");
  if (o.omega1.empty() || o.omega2.empty()) throw UsageError("--omega1 and --omega2 are required");
  const Omega w1 = omega_with_notice(o.omega1, err);
  const Omega w2 = omega_with_notice(o.omega2, err);
  const auto g1 = grigorchuk_handle(w1);
  const auto g2 = grigorchuk_handle(w2);
  const auto l1 = l_handle(w1);
  const auto l2 = l_handle(w2);
  const auto four = find_separating_word(g1, g2, o.l_max, o.threads);
  const auto two = find_separating_word(l1, l2, o.l_max, o.threads);
  emit_json(out, Json{{"schema", 1},
                      {"omega1", w1.to_string()},
                      {"omega2", w2.to_string()},
                      {"l_max", o.l_max},
                      {"four_generator", separation_json(four, g1.alphabet)},
                      {"two_generator", separation_json(two, l1.alphabet)}});
  return kExitOk;
}

int cmd_thm2_check(const Options& o, std::ostream& out, std::ostream&) {
  cap(o.samples >= 1, "--samples must be >= 1");
  cap(o.samples <= CliCaps::samples, "--samples exceeds the safety cap");
  cap(o.max_len >= 1 && o.max_len <= CliCaps::word_length, "--max-len out of range");
  std::size_t lo = o.k_min.value_or(8);
  std::size_t hi = o.k_max.value_or(12);
  cap(lo + 2 <= hi, "the k window needs at least three approximants");
  cap(hi + 8 <= CliCaps::approximant_zeros, "--k-max exceeds the safety cap");

  std::vector<GenWord> words;
  words.reserve(o.samples + 2);
  words.push_back(GenWord::parse("bcd"));
  words.push_back(GenWord::parse("d"));
  Rng rng(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) words.push_back(sample_alternating_word(rng, o.max_len));

  struct Row {
    LimitVerdict first = LimitVerdict::unstable;
    LimitVerdict final = LimitVerdict::unstable;
    bool model_trivial = false;
  };
  std::vector<Row> rows(words.size());
  parallel_for(words.size(), o.threads, [&](std::size_t i) {
    Row& r = rows[i];
    r.first = limit_trivial(words[i], lo, hi);
    r.final = r.first == LimitVerdict::unstable ? limit_trivial(words[i], lo, hi + 8) : r.first;
    r.model_trivial = eval_abcd_word(words[i]).is_identity();
  });

  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t unstable = 0;
  std::size_t unresolved = 0;
  Json bad = Json::array();
  Json probes = Json::array();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Row& r = rows[i];
    const bool is_probe = i < 2;
    if (is_probe) {
      probes.push_back({{"word", words[i].to_string()},
                        {"limit", std::string(to_string(r.final))},
                        {"model", r.model_trivial ? "trivial" : "nontrivial"}});
    }
    if (!is_probe && r.first == LimitVerdict::unstable) ++unstable;
    if (r.final == LimitVerdict::unstable) {
      if (!is_probe) ++unresolved;
      continue;
    }
    const bool agree = (r.final == LimitVerdict::trivial) == r.model_trivial;
    if (is_probe) {
      if (!agree) {
        ++disagreements;
        bad.push_back(words[i].to_string());
      }
      continue;
    }
    if (agree) {
      ++agreements;
    } else {
      ++disagreements;
      bad.push_back(words[i].to_string());
    }
  }
  emit_json(out, Json{{"schema", 1},
                      {"max_len", o.max_len},
                      {"samples", o.samples},
                      {"seed", o.seed},
                      {"k_min", lo},
                      {"k_max", hi},
                      {"agreements", agreements},
                      {"disagreements", disagreements},
                      {"unstable", unstable},
                      {"unstable_fraction", static_cast<double>(unstable) / static_cast<double>(o.samples)},
                      {"unresolved", unresolved},
                      {"disagreement_words", bad},
                      {"probes", probes}});
  return disagreements == 0 && unresolved == 0 ? kExitOk : kExitViolation;
}

int cmd_minimality(const Options& o, std::ostream& out, std::ostream&) {
  cap(o.n >= 2 && o.n <= CliCaps::modulus, "--n out of range");
  cap(o.m >= 1 && o.m < o.window, "--m must satisfy 1 <= m < window");
  cap(o.window <= CliCaps::window, "--window exceeds the safety cap");
  const MinimalityReport r = verify_minimality(o.n, o.m, o.window, parse_variant(o.variant), o.threads);
  const DifferenceReport& d = r.difference;
  Json diff{{"passed", d.passed()},
            {"excluded_ok", d.excluded_ok},
            {"covered_ok", d.covered_ok},
            {"gaps_ok", d.gaps_ok},
            {"missing", d.missing},
            {"gap_detail", d.gap_detail}};
  if (d.witness_indices) {
    diff["witness"] = {{"k", d.witness_indices->first},
                       {"l", d.witness_indices->second},
                       {"a_k", d.witness_values->first},
                       {"a_l", d.witness_values->second}};
  } else {
    diff["witness"] = nullptr;
  }
  Json comms = Json::array();
  for (const auto& c : r.commutators) {
    comms.push_back({{"i", c.i}, {"trivial", c.trivial}, {"expected", c.expected}});
  }
  emit_json(out, Json{{"schema", 1},
                      {"n", r.n},
                      {"m", r.spec.m},
                      {"variant", to_string(r.spec.variant)},
                      {"window", r.window},
                      {"sequence", build_s_sequence(r.spec, 8)},
                      {"difference_check", diff},
                      {"commutators", comms},
                      {"power_relator_trivial", r.power_relator_trivial},
                      {"other_relators_trivial", r.other_relators_trivial},
                      {"target_relator_nontrivial", r.target_relator_nontrivial},
                      {"verdict", r.passed() ? "pass" : "fail"}});
  return r.passed() ? kExitOk : kExitViolation;
}

int cmd_structure(const Options& o, std::ostream& out, std::ostream&) {
  cap(o.structure_window >= 1 && o.structure_window <= CliCaps::window, "--window out of range");
  cap(o.samples >= 1 && o.samples <= CliCaps::samples, "--samples out of range");
  const Twist twist = o.negative_control ? &broken_twist : &alpha;
  const StructureReport rep = structure_report(o.structure_window, twist, o.seed);
  std::vector<CheckItem> items = rep.items;
  items.push_back(model_relations_check(twist));
  items.push_back(metabelian_check(o.samples, o.seed));
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : items) {
    arr.push_back(check_json(c));
    all = all && c.passed;
  }
  Json j{{"schema", 1}, {"window", o.structure_window}, {"negative_control", o.negative_control}, {"items", arr},
         {"all_passed", all}};
  if (o.negative_control) {
    j["induced_failure_detected"] = !all;
    emit_json(out, j);
    return all ? kExitViolation : kExitOk;
  }
  emit_json(out, j);
  return all ? kExitOk : kExitViolation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Marked-group experiments: Grigorchuk family, lamplighter model, circle products"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&, std::ostream&)> command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1U, CliCaps::threads));
    sub->add_option("--out", o.out_path, "write results to this file instead of stdout");
  };
  auto add_family = [&](CLI::App* sub, std::vector<std::string> allowed) {
    sub->add_option("--family", o.family, "group family")->check(CLI::IsMember(std::move(allowed)));
    sub->add_option("--omega", o.omega, "sequence \"<preperiod>(<period>)\" over 0,1,2");
    sub->add_option("--n", o.n, "lamp modulus")->check(CLI::Range(2U, CliCaps::modulus));
  };

  CLI::App* wp = app.add_subcommand("wp", "word problem verdict");
  add_family(wp, {"grig", "lamp", "L", "limit"});
  wp->add_option("--word", o.word, "word; uppercase letters are inverses")->required();
  wp->add_option("--k-min", o.k_min, "first approximant for the limit oracle");
  wp->add_option("--k-max", o.k_max, "last approximant for the limit oracle");
  add_common(wp);
  wp->callback([&] { command = cmd_wp; });

  CLI::App* growth = app.add_subcommand("growth", "growth function as CSV n,gamma");
  add_family(growth, {"grig", "lamp", "L", "free"});
  growth->add_option("--n-max", o.n_max, "largest radius")->required();
  add_common(growth);
  growth->callback([&] { command = cmd_growth; });

  CLI::App* converge = app.add_subcommand("converge", "agreement radius of L over 0^j(012) against a target");
  converge->add_option("--j-min", o.j_min, "first prefix length")->check(CLI::Range(0, 1000));
  converge->add_option("--j-max", o.j_max, "last prefix length");
  converge->add_option("--n-max", o.n_max, "largest radius tried");
  converge->add_option("--omega", o.omega, "target sequence (default: the constant (0) model)");
  add_common(converge);
  converge->callback([&] { command = cmd_converge; });

  CLI::App* separate = app.add_subcommand("separate", "shortest separating relation between two sequences");
  separate->add_option("--omega1", o.omega1, "first sequence")->required();
  separate->add_option("--omega2", o.omega2, "second sequence")->required();
  separate->add_option("--l-max", o.l_max, "longest word tried");
  add_common(separate);
  separate->callback([&] { command = cmd_separate; });

  CLI::App* thm2 = app.add_subcommand("thm2-check", "limit oracle against the lamplighter extension model");
  thm2->add_option("--max-len", o.max_len, "longest sampled word");
  thm2->add_option("--samples", o.samples, "number of sampled words");
  thm2->add_option("--seed", o.seed, "random seed");
  thm2->add_option("--k-min", o.k_min, "first approximant (default 8)");
  thm2->add_option("--k-max", o.k_max, "last approximant (default 12)");
  add_common(thm2);
  thm2->callback([&] { command = cmd_thm2_check; });

  CLI::App* minimality = app.add_subcommand("minimality", "circle-product certificate for one relator");
  minimality->add_option("--n", o.n, "lamp modulus")->check(CLI::Range(2U, CliCaps::modulus));
  minimality->add_option("--m", o.m, "index of the relator shown independent");
  minimality->add_option("--window", o.window, "vertex window R");
  minimality->add_option("--variant", o.variant, "sequence variant")
      ->check(CLI::IsMember({"corrected", "paper"}));
  add_common(minimality);
  minimality->callback([&] { command = cmd_minimality; });

  CLI::App* structure = app.add_subcommand("structure", "structure checks in the lamplighter extension model");
  structure->add_option("--window", o.structure_window, "range |n| <= window for t_n");
  structure->add_option("--samples", o.samples, "random samples for the metabelian check");
  structure->add_option("--seed", o.seed, "random seed");
  structure->add_flag("--negative-control", o.negative_control, "use a deliberately wrong twist");
  add_common(structure);
  structure->callback([&] { command = cmd_structure; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    if (o.out_path.empty()) return command(o, out, err);
    std::ostringstream buffer;
    const int code = command(o, buffer, err);
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << o.out_path << '\n';
      return kExitUsage;
    }
    file << buffer.str();
    return code;
  } catch (const UnsupportedDomain& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FingerprintMismatch& e) {
    err << "fingerprint failure: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitViolation;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace condense
