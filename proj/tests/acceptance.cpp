// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "f2aut/cli.hpp"
#include "f2aut/f2aut.hpp"
#include "naive.hpp"
#include "regime.hpp"

using namespace f2aut;
using report::Json;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

Word w(const char* s) { return parse_word(s); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const AutoCatalog& depth8() {
  static const AutoCatalog catalog = AutoCatalog::build(8);
  return catalog;
}

naive::Map as_map(const Automorphism& f) { return {f.image_of_a().str(), f.image_of_b().str()}; }

bool same(std::initializer_list<Automorphism> lhs, std::initializer_list<Automorphism> rhs) {
  naive::Map l{"a", "b"};
  for (auto it = lhs.end(); it != lhs.begin();) l = naive::compose(as_map(*--it), l);
  naive::Map r{"a", "b"};
  for (auto it = rhs.end(); it != rhs.begin();) r = naive::compose(as_map(*--it), r);
  return compose_all(lhs) == compose_all(rhs) && l.a == r.a && l.b == r.b;
}

void identities(Check& c) {
  using L = Letter;
  const Automorphism s = named(Named::sigma), S = named(Named::sigma_inv);
  const Automorphism t = named(Named::tau), T = named(Named::tau_inv);
  const Automorphism d1 = named(Named::delta1), d2 = named(Named::delta2);
  const Automorphism d3 = named(Named::delta3), d4 = named(Named::delta4);
  const Automorphism p = named(Named::pi), P = named(Named::pi_inv);
  int n = 0;
  auto expect = [&](bool ok) { c.expect(ok, "identity #" + std::to_string(++n)); };

  expect(WhiteheadW2{L::b, {L::a_inv}}.to_automorphism() == compose(d1, S));
  expect(WhiteheadW2{L::b_inv, {L::a_inv}}.to_automorphism() == compose(d2, s));
  expect(WhiteheadW2{L::a, {L::b_inv}}.to_automorphism() == compose(d3, T));
  expect(WhiteheadW2{L::a_inv, {L::b_inv}}.to_automorphism() == compose(d4, t));

  expect(same({s, d1}, {d1, s}));
  expect(same({s, d2}, {d2, s}));
  expect(same({s, d3}, {d1, d3, s}));
  expect(same({s, d4}, {d4, d2, s}));
  expect(same({t, d1}, {d3, d1, t}));
  expect(same({t, d2}, {d2, d4, t}));
  expect(same({t, d3}, {d3, t}));
  expect(same({t, d4}, {d4, t}));
  expect(same({S, d1}, {d1, S}));
  expect(same({S, d2}, {d2, S}));
  expect(same({S, d3}, {d2, d3, S}));
  expect(same({S, d4}, {d4, d1, S}));
  expect(same({T, d1}, {d4, d1, T}));
  expect(same({T, d2}, {d2, d3, T}));
  expect(same({T, d3}, {d3, T}));
  expect(same({T, d4}, {d4, T}));

  expect(same({s, T}, {p, d1, S}));
  expect(same({S, t}, {P, d3, s}));
  expect(same({t, S}, {P, d3, T}));
  expect(same({T, s}, {p, d1, t}));
  expect(same({s, p}, {p, d3, T}));
  expect(same({s, P}, {P, T}));
  expect(same({S, p}, {p, d4, t}));
  expect(same({S, P}, {P, t}));
  expect(same({t, p}, {p, S}));
  expect(same({t, P}, {P, d1, S}));
  expect(same({T, p}, {p, s}));
  expect(same({T, P}, {P, d2, s}));
  c.note << n << " identities";
}

void trivial_cancellation(Check& c) {
  const Automorphism s = named(Named::sigma);
  const Automorphism t = named(Named::tau);
  int n = 0;
  for (int r = -6; r <= 6; ++r) {
    if (r == 0) continue;
    const std::string power(static_cast<std::size_t>(std::abs(r)), r > 0 ? 'b' : 'B');
    const std::string apower(static_cast<std::size_t>(std::abs(r)), r > 0 ? 'a' : 'A');
    const Word x = parse_word("a" + power + "A");
    const Word y = parse_word("b" + apower + "B");
    c.expect(s(x) == x && naive::Map{"ab", "b"}(x.str()) == x.str(), "sigma on " + x.str());
    c.expect(t(y) == y && naive::Map{"a", "ba"}(y.str()) == y.str(), "tau on " + y.str());
    n += 2;
  }
  c.note << n << " words";
}

void regime_properties(Check& c) {
  std::mt19937 rng(20240602);
  regime::Tally tally;
  regime::run(rng, 1000, tally);
  for (const auto& f : tally.failures) c.expect(false, f);
  c.expect(tally.instances == 1000, "instance count");
  c.note << tally.instances << " instances, " << tally.checks << " checks, " << tally.violations() << " violations";
}

void positivity(Check& c) {
  const AutoCatalog& catalog = depth8();
  std::size_t yes = 0, obstructed = 0, exhausted = 0;
  const auto words = all_reduced_words(4);
  for (const Word& u : words) {
    const PositivityReport r = potentially_positive(u);
    const OraclePositivity o = oracle_potentially_positive(u, catalog);
    if (o.yes) c.expect(r.answer, "oracle positive but decided false: " + u.str());
    if (r.answer) {
      ++yes;
      const Automorphism phi = compose(r.witness->w1_map, r.witness->chain.automorphism());
      c.expect(phi.apply_cyclic(CyclicWord(u)) == r.witness->positive_image &&
                   is_positive(r.witness->positive_image),
               "witness replay " + u.str());
    } else if (abelian_obstruction(u)) {
      ++obstructed;
    } else {
      c.expect(!o.yes, "unconfirmed false " + u.str());
      ++exhausted;
    }
  }
  c.expect(!potentially_positive(w("abAB")).answer, "abAB is not potentially positive");
  c.expect(potentially_positive(w("AB")).answer, "AB is potentially positive");
  c.note << words.size() << " words (catalog " << catalog.size() << "): " << yes << " true, " << obstructed
         << " false by obstruction, " << exhausted << " false by oracle exhaustion";
}

void bte_positive(Check& c) {
  const BteReport r = bounded_translation_equivalent(w("aabAB"), w("a"));
  c.expect(r.answer && r.bounds.has_value(), "answer true");
  if (!r.bounds) return;
  const auto [lo, hi] = *r.bounds;
  const auto ratios = sample_ratios(w("aabAB"), w("a"), depth8());
  ExactRational seen_lo = ratios.front(), seen_hi = ratios.front();
  for (const ExactRational& q : ratios) {
    c.expect(lo <= q && q <= hi, "ratio " + to_string(q) + " outside computed bounds");
    c.expect(ExactRational(1) <= q && q <= ExactRational(5), "ratio " + to_string(q) + " outside [1, 5]");
    seen_lo = std::min(seen_lo, q);
    seen_hi = std::max(seen_hi, q);
  }
  c.note << "bounds [" << to_string(lo) << ", " << to_string(hi) << "], " << ratios.size() << " oracle ratios in ["
         << to_string(seen_lo) << ", " << to_string(seen_hi) << "]";
}

void bte_trivial(Check& c) {
  std::mt19937 rng(20240603);
  int n = 0;
  while (n < 50) {
    const Word u = parse_word(naive::random_word(rng, 6, 1));
    const std::size_t len = cyclic_length(u);
    if (len == 0 || len > 4) continue;
    const BteReport r = bounded_translation_equivalent(u, u.inverse());
    c.expect(r.answer && r.bounds && r.bounds->first == ExactRational(1) && r.bounds->second == ExactRational(1),
             "u = " + u.str());
    ++n;
  }
  c.note << n << " random words";
}

void bte_negative(Check& c) {
  const BteReport r = bounded_translation_equivalent(w("a"), w("b"));
  c.expect(!r.answer && r.failing_condition.has_value(), "answer false with a failing condition");
  if (!r.failing_condition) return;
  const BteFailure& f = *r.failing_condition;
  c.expect(f.chain.steps.empty() && f.step == Step::sigma && f.k == 2, "empty chain, sigma, k = 2");
  c.expect(f.u_lengths == std::array<std::size_t, 2>{3, 4} && f.v_lengths == std::array<std::size_t, 2>{1, 1},
           "lengths");
  c.note << "fails at empty chain, sigma^" << f.k << ": |u| " << f.u_lengths[0] << "," << f.u_lengths[1] << " |v| "
         << f.v_lengths[0] << "," << f.v_lengths[1];
}

void fixgroup(Check& c) {
  FixReport r = fixed_point_group(parse_subgroup("a,b"));
  c.expect(r.answer == FixAnswer::yes && r.witness && r.witness->automorphism() == Automorphism::identity(),
           "<a,b> identity witness");
  r = fixed_point_group(parse_subgroup("a"));
  c.expect(r.answer == FixAnswer::yes && r.verification_depth == 8 && !r.escaped_fixed_word, "<a> yes");
  if (r.witness) {
    const Automorphism psi = r.witness->automorphism();
    const Subgroup h = parse_subgroup("a");
    for (const Word& x : all_reduced_words(8)) {
      if (psi(x) == x) c.expect(h.contains(x), "fixed word outside <a>: " + x.str());
    }
  }
  r = fixed_point_group(parse_subgroup("aa"));
  c.expect(r.answer == FixAnswer::no && r.escaped_fixed_word && r.escaped_fixed_word->str() == "a",
           "<aa> no, escaped a");
  c.note << "<a,b> yes, <a> yes, <aa> no (" << r.candidates << " candidates refuted)";
}

std::vector<std::string> batch_lines(const std::string& path, const std::string& workers) {
  std::ostringstream out;
  std::ostringstream err;
  cli::run({"--batch", path, "--workers", workers}, out, err);
  std::vector<std::string> lines;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) {
    Json j = Json::parse(line);
    if (j.contains("stats")) j["stats"].erase("elapsed_ms");
    lines.push_back(j.dump());
  }
  return lines;
}

void determinism(Check& c) {
  const std::string path = "acceptance_corpus.txt";
  {
    std::ofstream f(path);
    for (const Word& u : all_reduced_words(4)) f << "positivity " << u.str() << "\n";
    f << "bte aabAB a --verify 8\n";
    std::mt19937 rng(20240603);
    for (int n = 0; n < 50;) {
      const Word u = parse_word(naive::random_word(rng, 6, 1));
      const std::size_t len = cyclic_length(u);
      if (len == 0 || len > 4) continue;
      f << "bte " << u.str() << " " << u.inverse().str() << "\n";
      ++n;
    }
    f << "bte a b\nfixgroup a,b\nfixgroup a\nfixgroup aa\n";
  }
  const auto one = batch_lines(path, "1");
  const auto four = batch_lines(path, "4");
  std::remove(path.c_str());
  c.expect(one.size() == 161 + 1 + 50 + 1 + 3, "line count");
  c.expect(one == four, "outputs differ");
  for (const auto& line : one) c.expect(line.find("\"error\"") == std::string::npos, "error line: " + line);
  c.note << one.size() << " JSON lines identical for --workers 1 and 4";
}

void inconclusive(Check& c) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run({"fixgroup", "ab", "--delta-step-cap", "2", "--json"}, out, err);
  c.expect(status == 2, "exit status " + std::to_string(status));
  const Json j = Json::parse(out.str());
  c.expect(j["answer"] == "inconclusive", "answer");
  c.note << "exit " << status << ", answer " << j["answer"].get<std::string>();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria = {
      {"identity suite", 1, identities},
      {"trivial cancellation", 0, trivial_cancellation},
      {"regime properties", 30, regime_properties},
      {"positivity vs depth-8 oracle", 300, positivity},
      {"bte positive case", 300, bte_positive},
      {"bte trivial case", 0, bte_trivial},
      {"bte negative case", 0, bte_negative},
      {"fixed-point suite", 120, fixgroup},
      {"determinism across workers", 0, determinism},
      {"inconclusive pathway", 0, inconclusive},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (criteria[i].budget_s > 0 && elapsed > criteria[i].budget_s) {
      c.expect(false, "over time budget of " + std::to_string(criteria[i].budget_s) + " s");
    }
    if (!c.ok) ++failures;
    std::printf("%s %zu %s (%.2f s): %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, elapsed,
                c.note.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
