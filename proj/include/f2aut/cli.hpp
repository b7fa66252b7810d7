#pragma once

// Command-line front end. run() is reentrant and writes only to the given streams,
// so it can be driven from tests and from batch files.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "f2aut/decide.hpp"
#include "f2aut/oracle.hpp"
#include "f2aut/report.hpp"

namespace f2aut::cli {

enum ExitCode : int { decided = 0, usage_error = 1, inconclusive = 2 };

struct RunConfig {
  std::string command;
  std::vector<std::string> operands;
  std::string polarity = "both";
  bool json = false;
  std::optional<std::size_t> verify_depth;
  std::optional<std::size_t> max_chain_len;
  std::optional<std::size_t> verification_depth;
  std::optional<std::size_t> delta_step_cap;
  std::optional<std::size_t> word_length_cap;
  std::optional<unsigned> workers;
  std::optional<std::string> batch;

  /// Fills every unset override from `outer`.
  void inherit(const RunConfig& outer) {
    json = json || outer.json;
    if (!verify_depth) verify_depth = outer.verify_depth;
    if (!max_chain_len) max_chain_len = outer.max_chain_len;
    if (!verification_depth) verification_depth = outer.verification_depth;
    if (!delta_step_cap) delta_step_cap = outer.delta_step_cap;
    if (!word_length_cap) word_length_cap = outer.word_length_cap;
    if (!workers) workers = outer.workers;
  }
};

/// Catalogs are expensive, so batch runs share them across lines.
struct Session {
  std::map<std::size_t, AutoCatalog> catalogs;

  const AutoCatalog& catalog(std::size_t depth) {
    auto it = catalogs.find(depth);
    if (it == catalogs.end()) it = catalogs.emplace(depth, AutoCatalog::build(depth)).first;
    return it->second;
  }
};

struct Outcome {
  int status = decided;
  report::Json json;
  std::string text;
};

namespace detail {

struct Usage : Error {
  using Error::Error;
};

inline void add_overrides(CLI::App& app, RunConfig& cfg) {
  app.add_flag("--json", cfg.json, "Print a JSON report");
  app.add_option("--verify", cfg.verify_depth,
                 "Cross-check against the brute-force automorphism catalog of this depth (at most 12)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-chain-len", cfg.max_chain_len,
                 "Chain length bound (default: 2|u|+3 positivity, 2|u|+5 bte, 4|H|+4 fixgroup)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--verification-depth", cfg.verification_depth,
                 "fixgroup: length of fixed words checked against H (default 8)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--delta-step-cap", cfg.delta_step_cap,
                 "fixgroup: delta-search depth (default 64; bound (2^(4|H|+4)+1)|H|)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--word-length-cap", cfg.word_length_cap,
                 "fixgroup: longest word in the delta search (default 4(|H|+4))")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--workers", cfg.workers, "Search threads; never changes the output (default 1)")
      ->check(CLI::Range(1U, 256U));
}

/// Parses argv-style arguments (without the program name).
inline RunConfig parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                       std::optional<int>& early_exit) {
  RunConfig cfg;
  CLI::App app{"Decision procedures for automorphisms of the free group F2 = <a, b>.\n"
               "Words use a, b for generators, A, B for inverses and 1 for the identity.\n"
               "Exit status: 0 decided, 2 inconclusive, 1 usage or input error.",
               "f2aut"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  add_overrides(app, cfg);
  app.add_option("--batch", cfg.batch, "Run one command per line of FILE, printing JSON lines");

  std::string word;
  std::string word_v;
  std::string generators;
  std::string map;
  std::size_t max_len = 0;
  std::vector<std::string> words;
  auto* positivity = app.add_subcommand("positivity", "Is the word potentially positive?");
  positivity->add_option("word", word, "Word")->required();
  auto* bte = app.add_subcommand("bte", "Are two words boundedly translation equivalent?");
  bte->add_option("u", word, "First word")->required();
  bte->add_option("v", word_v, "Second word")->required();
  auto* fix = app.add_subcommand("fixgroup", "Is <generators> the fixed-point group of an automorphism?");
  fix->add_option("generators", generators, "Comma-separated generators, e.g. aab,ba")->required();
  auto* apply = app.add_subcommand("apply", "Apply a map to a word");
  apply->add_option("map", map,
                    "Named map (sigma, tau, delta1, pi, ...), chain steps (s, t, S, T), "
                    "'id', or \"a -> W; b -> W\"")
      ->required();
  apply->add_option("word", word, "Word")->required();
  auto* enumerate = app.add_subcommand("enumerate", "List chains and cyclic images");
  enumerate->add_option("max_len", max_len, "Longest chain (at most 20)")->required()->check(CLI::Range(0, 20));
  enumerate->add_option("words", words, "Input words")->required();
  enumerate->add_option("--polarity", cfg.polarity, "C1, C2 or both")
      ->check(CLI::IsMember({"C1", "C2", "both"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    early_exit = code == 0 ? decided : usage_error;
    return cfg;
  }

  if (positivity->parsed()) {
    cfg.command = "positivity";
    cfg.operands = {word};
  } else if (bte->parsed()) {
    cfg.command = "bte";
    cfg.operands = {word, word_v};
  } else if (fix->parsed()) {
    cfg.command = "fixgroup";
    cfg.operands = {generators};
  } else if (apply->parsed()) {
    cfg.command = "apply";
    cfg.operands = {map, word};
  } else if (enumerate->parsed()) {
    cfg.command = "enumerate";
    cfg.operands = {std::to_string(max_len)};
    cfg.operands.insert(cfg.operands.end(), words.begin(), words.end());
  } else if (!cfg.batch) {
    err << app.help();
    early_exit = usage_error;
  }
  return cfg;
}

inline Automorphism parse_map(const std::string& text) {
  if (text == "id" || text == "identity") return Automorphism::identity();
  if (auto n = parse_named(text)) return named(*n);
  if (text.find("->") != std::string::npos) return parse_automorphism(text);
  return parse_chain(text).automorphism();
}

inline SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions s;
  s.max_chain_len = cfg.max_chain_len;
  s.workers = cfg.workers.value_or(1);
  return s;
}

inline std::string chain_text(const Chain& c) {
  return std::string(polarity_name(c.polarity)) + " '" + c.steps_str() + "'";
}

inline Outcome execute(const RunConfig& cfg, Session& session) {
  Outcome o;
  const auto& ops = cfg.operands;
  if (cfg.verify_depth && cfg.command != "positivity" && cfg.command != "bte") {
    throw Usage("--verify applies to positivity and bte only");
  }
  std::ostringstream text;

  if (cfg.command == "positivity") {
    const Word u = parse_word(ops[0]);
    const PositivityReport r = potentially_positive(u, search_options(cfg));
    o.json = report::positivity_json(u, r);
    text << u << ": " << (r.answer ? "potentially positive" : "not potentially positive") << "\n";
    if (r.witness) {
      text << "  chain " << chain_text(r.witness->chain) << ", then " << r.witness->w1_map << " gives "
           << r.witness->positive_image << "\n";
    }
    text << "  chains examined: " << r.chains_examined << " (max length " << r.max_chain_len << ")\n";
    if (cfg.verify_depth) {
      o.json["verify"] = report::positivity_verify_json(u, r, session.catalog(*cfg.verify_depth));
      text << "  oracle (depth " << *cfg.verify_depth << "): " << o.json["verify"]["oracle"].get<std::string>()
           << ", consistent: " << (o.json["verify"]["consistent"].get<bool>() ? "yes" : "no") << "\n";
    }
  } else if (cfg.command == "bte") {
    const Word u = parse_word(ops[0]);
    const Word v = parse_word(ops[1]);
    const BteReport r = bounded_translation_equivalent(u, v, search_options(cfg));
    o.json = report::bte_json(u, v, r);
    text << u << " ~ " << v << ": "
         << (r.answer ? "boundedly translation equivalent" : "not boundedly translation equivalent") << "\n";
    if (r.bounds) {
      text << "  ratio bounds [" << to_string(r.bounds->first) << ", " << to_string(r.bounds->second)
           << "] from " << r.delta_set_size << " distinct values\n";
    }
    if (r.failing_condition) {
      const BteFailure& f = *r.failing_condition;
      text << "  fails at chain " << chain_text(f.chain) << ", step " << step_char(f.step) << ", k=" << f.k
           << ": u lengths " << f.u_lengths[0] << "," << f.u_lengths[1] << " v lengths " << f.v_lengths[0]
           << "," << f.v_lengths[1] << "\n";
    }
    if (cfg.verify_depth) {
      o.json["verify"] = report::bte_verify_json(u, v, r, session.catalog(*cfg.verify_depth));
      text << "  oracle ratios (depth " << *cfg.verify_depth << "): [" << o.json["verify"]["min"].get<std::string>()
           << ", " << o.json["verify"]["max"].get<std::string>() << "]\n";
    }
  } else if (cfg.command == "fixgroup") {
    const Subgroup h = parse_subgroup(ops[0]);
    FixOptions fo;
    fo.verification_depth = cfg.verification_depth.value_or(8);
    fo.delta_step_cap = cfg.delta_step_cap;
    fo.word_length_cap = cfg.word_length_cap;
    fo.search = search_options(cfg);
    const FixReport r = fixed_point_group(h, fo);
    o.json = report::fix_json(h, r);
    if (r.answer == FixAnswer::inconclusive) o.status = inconclusive;
    text << "<" << h.str() << ">: " << fix_answer_name(r.answer) << "\n";
    if (r.witness) {
      text << "  witness " << r.witness->automorphism() << " (chain " << chain_text(r.witness->chain) << ", "
           << r.witness->delta_composition.size() << " delta steps, then " << r.witness->w1_map << ")\n";
    }
    if (r.escaped_fixed_word) text << "  escaped fixed word: " << *r.escaped_fixed_word << "\n";
    if (r.truncated_at) {
      text << "  delta search truncated at chain " << chain_text(*r.truncated_at) << " (step cap "
           << r.delta_step_cap << ", word length cap " << r.word_length_cap << ")\n";
    }
    if (r.trivial_subgroup) text << "  note: H is the trivial subgroup\n";
  } else if (cfg.command == "apply") {
    const Automorphism f = parse_map(ops[0]);
    const Word w = parse_word(ops[1]);
    const Word image = f.apply(w);
    const CyclicWord cyclic(image);
    o.json["command"] = "apply";
    o.json["input"] = report::Json{{"map", ops[0]}, {"word", w.str()}};
    o.json["answer"] = image.str();
    o.json["map"] = f.str();
    o.json["cyclic_image"] = cyclic.str();
    o.json["cyclic_length"] = cyclic.length();
    o.json["stats"] = report::Json::object();
    text << image << "  (cyclic " << cyclic << ", length " << cyclic.length() << ")\n";
  } else if (cfg.command == "enumerate") {
    const std::size_t max_len = std::stoul(ops[0]);
    std::vector<CyclicWord> inputs;
    report::Json words = report::Json::array();
    for (std::size_t i = 1; i < ops.size(); ++i) {
      inputs.emplace_back(parse_word(ops[i]));
      words.push_back(inputs.back().as_word().str());
    }
    const ChainSpace space = cfg.polarity == "C1"   ? ChainSpace::c1
                             : cfg.polarity == "C2" ? ChainSpace::c2
                                                    : ChainSpace::both;
    report::Json visits = report::Json::array();
    const TraversalSummary s = enumerate(space, max_len, std::span<const CyclicWord>(inputs),
                                         [&](const ChainVisit<CyclicWord>& v) {
                                           report::Json images = report::Json::array();
                                           text << chain_text(v.chain);
                                           for (const CyclicWord& img : v.images) {
                                             images.push_back(img.str());
                                             text << "  " << img;
                                           }
                                           text << "\n";
                                           visits.push_back(report::Json{{"chain", report::chain_json(v.chain)},
                                                                         {"images", images}});
                                           return VisitAction::proceed;
                                         });
    o.json["command"] = "enumerate";
    o.json["input"] = report::Json{{"max_len", max_len}, {"polarity", cfg.polarity}, {"words", words}};
    o.json["answer"] = visits;
    o.json["stats"] = report::Json{{"chains_examined", s.visited}, {"peak_image_sets", s.peak_image_sets}};
  }
  o.text = text.str();
  return o;
}

/// Runs one parsed command, timing it. Errors become exit status 1.
inline Outcome run_one(const RunConfig& cfg, Session& session, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = execute(cfg, session);
  } catch (const ParseError& e) {
    o.status = usage_error;
    o.json = report::Json{{"command", cfg.command}, {"error", std::string(e.what()) + " at index " + std::to_string(e.position)}};
    err << "error: " << e.what() << " at index " << e.position << "\n";
    return o;
  } catch (const std::exception& e) {
    o.status = usage_error;
    o.json = report::Json{{"command", cfg.command}, {"error", e.what()}};
    err << "error: " << e.what() << "\n";
    return o;
  }
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  o.json["stats"]["elapsed_ms"] = static_cast<long long>(ms);
  return o;
}

/// Splits a batch line into arguments; double quotes group words containing spaces.
inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool have = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      have = true;
    } else if (!quoted && (c == ' ' || c == '\t' || c == '\r')) {
      if (have) out.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur.push_back(c);
      have = true;
    }
  }
  if (have) out.push_back(cur);
  return out;
}

inline int run_batch(const RunConfig& outer, std::ostream& out, std::ostream& err) {
  std::ifstream in(*outer.batch);
  if (!in) {
    err << "error: cannot open batch file " << *outer.batch << "\n";
    return usage_error;
  }
  Session session;
  int worst = decided;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::ostringstream sink;
    std::optional<int> early;
    RunConfig cfg = parse(split_line(line), sink, sink, early);
    Outcome o;
    if (early || cfg.batch) {
      o.status = usage_error;
      o.json = report::Json{{"line", lineno}, {"error", cfg.batch ? "nested --batch" : sink.str()}};
      err << "line " << lineno << ": invalid command\n";
    } else {
      cfg.inherit(outer);
      o = run_one(cfg, session, err);
    }
    out << o.json.dump() << "\n";
    if (o.status == usage_error) {
      worst = usage_error;
    } else if (o.status == inconclusive && worst == decided) {
      worst = inconclusive;
    }
  }
  return worst;
}

}  // namespace detail

/// Entry point: arguments exclude the program name. Returns the exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<int> early;
  const RunConfig cfg = detail::parse(args, out, err, early);
  if (early) return *early;
  if (cfg.batch) return detail::run_batch(cfg, out, err);
  Session session;
  const Outcome o = detail::run_one(cfg, session, err);
  if (o.status == usage_error && !cfg.json) return o.status;
  if (cfg.json) {
    out << o.json.dump(2) << "\n";
  } else {
    out << o.text;
  }
  return o.status;
}

}  // namespace f2aut::cli
