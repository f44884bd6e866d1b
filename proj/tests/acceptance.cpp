// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "generators.hpp"
#include "infinikit/bridge.hpp"
#include "infinikit/dixmier.hpp"
#include "infinikit/eval.hpp"
#include "infinikit/expr.hpp"
#include "infinikit/levi_civita.hpp"
#include "infinikit/opcalc.hpp"
#include "tower.hpp"

namespace {

using namespace infinikit;
using hyperseq::DominanceVerdict;
using hyperseq::FilterVerdict;
using hyperseq::Predicate;
using hyperseq::RateSeq;
using hyperseq::Truth;
using lc::LCNumber;
using testing::Gen;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// Criterion 1: field laws, order compatibility, st homomorphism, inversion.
Outcome levi_civita_suite() {
  Outcome o;
  Gen gen(1001);
  const Rational cutoff = 6;
  int inversions = 0;
  for (int trial = 0; trial < 10000 && o.pass; ++trial) {
    const LCNumber a = gen.lc_number(), b = gen.lc_number(), c = gen.lc_number();
    o.check((a + b) + c == a + (b + c), "additive associativity");
    o.check((a * b) * c == a * (b * c), "multiplicative associativity");
    o.check(a + b == b + a && a * b == b * a, "commutativity");
    o.check(a * (b + c) == a * b + a * c, "distributivity");
    if (a < b) {
      o.check(a + c < b + c, "order vs addition");
      if (c > LCNumber()) o.check(a * c < b * c, "order vs multiplication");
    }
    const bool finite_a = lc::classify(a) != lc::Classification::infinite;
    const bool finite_b = lc::classify(b) != lc::Classification::infinite;
    if (finite_a && finite_b) {
      o.check(lc::standard_part(a + b) == lc::standard_part(a) + lc::standard_part(b), "st(a+b)");
      o.check(lc::standard_part(a * b) == lc::standard_part(a) * lc::standard_part(b), "st(ab)");
    }
    if (!a.is_zero()) {
      const LCNumber residual = a * lc::inv(a, cutoff) - LCNumber(1);
      const auto v = residual.valuation();
      o.check(!v || *v > cutoff, "inversion residual at trial " + std::to_string(trial));
      ++inversions;
    }
  }
  if (o.pass) o.detail = "10000 triples, " + std::to_string(inversions) + " inversions";
  return o;
}

// Criterion 2: Leibniz quotient against symbolic differentiation.
Outcome calculus_suite() {
  Outcome o;
  Gen gen(2002);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    const lc::Polynomial f = gen.polynomial(12);
    const Rational x0 = gen.rational(30, 7);
    Rational symbolic = 0;
    for (std::size_t k = 1; k < f.coefficients.size(); ++k)
      symbolic += Rational(static_cast<long long>(k)) * f.coefficients[k] * pow_int(x0, static_cast<long>(k - 1));
    o.check(lc::derivative(f, x0) == symbolic, "derivative at trial " + std::to_string(trial));
    o.check(lc::continuity_check(f, x0, LCNumber::eps()), "continuity at trial " + std::to_string(trial));
  }
  if (o.pass) o.detail = "1000 polynomials of degree <= 12";
  return o;
}

// Criterion 3: spectra recovered through conjugation and symmetrisation.
Outcome spectral_suite() {
  Outcome o;
  Gen gen(3003);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(gen.integer(1, 64));
    std::vector<double> d(n);
    for (double& x : d) x = gen.real(-4, 4);
    const auto q = opcalc::random_orthogonal(n, 7000 + static_cast<std::uint64_t>(trial));
    const auto got = opcalc::spectrum_desc(opcalc::conjugate(opcalc::diag_embed(d), q)).values();
    std::vector<double> want(n);
    for (std::size_t i = 0; i < n; ++i) want[i] = std::abs(d[i]);
    std::sort(want.rbegin(), want.rend());
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  o.check(worst <= 1e-8, "max error " + std::to_string(worst));
  std::ostringstream ss;
  ss << "200 conjugated diagonals, max error " << worst;
  if (o.pass) o.detail = ss.str();
  return o;
}

// Criterion 4: Dixmier estimator targets.
Outcome dixmier_suite() {
  Outcome o;
  using dixmier::dixmier_estimate;
  auto tail = [](Rational c, Rational p) {
    return opcalc::SpectralSequence({}, RateSeq::monomial(Scalar(c), p));
  };
  std::ostringstream ss;
  const auto h = dixmier_estimate(tail(1, -1));
  o.check(h.measurable && std::abs(*h.value - 1.0) <= 0.05, "(a) 1/n value");
  const double g6 = dixmier::gamma(tail(1, -1), 1'000'000);
  o.check(std::abs(g6 - 1.0418) <= 0.002, "(a) raw gamma at 1e6");
  ss << "(a) value " << (h.value ? *h.value : NAN) << ", gamma(1e6) " << g6;
  for (Rational c : {Rational(1, 2), Rational(2), Rational(5)}) {
    const auto e = dixmier_estimate(tail(c, -1));
    const double want = to_double(c);
    o.check(e.measurable && std::abs(*e.value - want) <= 0.05 * want, "(b) c = " + to_string(c));
  }
  const auto s = dixmier_estimate(tail(1, -2));
  o.check(s.measurable && std::abs(*s.value) <= 0.02, "(c) 1/n^2");
  ss << "; (c) value " << (s.value ? *s.value : NAN);

  const auto tower = dixmier_estimate(testing::tower_sequence());
  o.check(!tower.measurable && tower.spread > 0.2, "(d) tower verdict");
  // Brute-force oracle: direct summation over the blocks.
  long double sigma = 0;
  std::size_t j = 0;
  double worst = 0;
  for (std::uint64_t n = 1; j < tower.schedule.size(); ++n) {
    sigma += static_cast<long double>(testing::tower_coefficient(n)) / static_cast<long double>(n);
    if (n == tower.schedule[j]) {
      const double oracle = static_cast<double>(sigma / std::log(static_cast<long double>(n)));
      worst = std::max(worst, std::abs(oracle - tower.gamma_values[j]));
      ++j;
    }
  }
  o.check(worst <= 1e-12, "(d) gamma vs block oracle");
  ss << "; (d) spread " << tower.spread << ", oracle deviation " << worst;
  if (o.pass) o.detail = ss.str();
  return o;
}

// Criterion 5: the bridge pipeline on random compact models.
Outcome bridge_suite() {
  Outcome o;
  Gen gen(5005);
  const std::array<Rational, 4> alphas{Rational(1, 2), 1, 2, 3};
  const std::vector<Predicate> preds{Predicate::evens(), Predicate::squares(), Predicate::greater_than(10)};
  for (int trial = 0; trial < 50 && o.pass; ++trial) {
    const auto k = gen.integer(1, 9);
    const Rational alpha = alphas[static_cast<std::size_t>(gen.integer(0, 3))];
    const RateSeq tail = RateSeq::monomial(Scalar(Rational(1, k)), -alpha);
    const auto n = static_cast<std::size_t>(gen.integer(1, 32));
    const auto t = opcalc::diag_embed(tail, n);
    const auto q = opcalc::random_orthogonal(n, 9000 + static_cast<std::uint64_t>(trial));
    const auto a = bridge::run_bridge(t, tail, preds);
    const auto b = bridge::run_bridge(opcalc::conjugate(t, q), tail, preds);
    const std::string where = " (trial " + std::to_string(trial) + ", tail " + tail.key() + ")";
    o.check(hyperseq::eventually_equal(a.robinson * a.H, RateSeq::constant(Scalar(1))) == Truth::yes,
            "eps*H != 1" + where);
    o.check(hyperseq::eventually_equal(a.robinson, b.robinson) == Truth::yes, "robinson differs" + where);
    double prefix_gap = 0;
    for (std::size_t i = 1; i <= n; ++i) prefix_gap = std::max(prefix_gap, std::abs(a.robinson(i) - b.robinson(i)));
    o.check(prefix_gap <= 1e-8, "prefix tolerance" + where);
    for (std::size_t i = 0; i < preds.size(); ++i)
      o.check(a.queries[i].verdict == b.queries[i].verdict, "verdict differs" + where);
    unsigned decided = 0;
    while (decided < a.queries.size() && a.queries[decided].verdict != FilterVerdict::undecided) ++decided;
    o.check(a.enclosure.decided_bits == decided &&
                a.enclosure.width() == Rational(1, Integer(1) << decided) && a.enclosure.width() > 0,
            "width law" + where);
  }
  // Verdict table of the worked examples.
  const double quarter[] = {1, 0.5, 1.0 / 3, 0.25};
  const auto t = opcalc::diag_embed(quarter);
  const auto r1 = bridge::run_bridge(t, RateSeq::monomial(Scalar(1), -1), preds);
  const auto r2 = bridge::run_bridge(t, RateSeq::monomial(Scalar(1), -2), preds);
  using V = FilterVerdict;
  const std::vector<V> want1{V::undecided, V::undecided, V::in_filter};
  const std::vector<V> want2{V::undecided, V::in_filter, V::in_filter};
  for (std::size_t i = 0; i < 3; ++i) {
    o.check(r1.queries[i].verdict == want1[i], "table row 1/n, " + r1.queries[i].predicate);
    o.check(r2.queries[i].verdict == want2[i], "table row 1/n^2, " + r2.queries[i].predicate);
  }
  const std::vector<Predicate> example{Predicate::greater_than(10), Predicate::evens()};
  const auto r3 = bridge::run_bridge(t, RateSeq::monomial(Scalar(1), -1), example);
  o.check(r3.enclosure.lower == Rational(1, 2) && r3.enclosure.upper == 1, "example enclosure");
  if (o.pass) o.detail = "50 random models, verdict table 1/n: (undecided, undecided, in_filter), 1/n^2: "
                         "(undecided, in_filter, in_filter)";
  return o;
}

// Criterion 6: questions outside the decidable fragment come back explicit.
Outcome exhibitability_suite() {
  Outcome o;
  const RateSeq n = RateSeq::index();
  const RateSeq inv_n = RateSeq::monomial(Scalar(1), -1);
  const RateSeq osc = RateSeq::monomial(Scalar(2), -1) + RateSeq::monomial(Scalar(1), -1, 0, true);
  const RateSeq opaque =
      RateSeq::opaque("mystery", [](hyperseq::Index k) { return 1.0 / static_cast<double>(k); }, std::nullopt,
                      hyperseq::Limit::unknown());
  int count = 0;
  auto expect_dominance = [&](const std::string& name, const RateSeq& a, const RateSeq& b) {
    const auto v = hyperseq::dominance_compare(a, b);
    std::cout << "  battery dominance " << name << " -> " << hyperseq::to_string(v) << "\n";
    o.check(v == DominanceVerdict::undecidable_without_ultrafilter, "dominance " + name);
    ++count;
  };
  auto expect_equality = [&](const std::string& name, const RateSeq& a, const RateSeq& b) {
    const auto v = hyperseq::eventually_equal(a, b);
    std::cout << "  battery eventually_equal " << name << " -> " << hyperseq::to_string(v) << "\n";
    o.check(v == Truth::undecidable, "eventually_equal " + name);
    ++count;
  };
  auto expect_filter = [&](const std::string& name, const RateSeq& h, const Predicate& p) {
    FilterVerdict v = FilterVerdict::in_filter;
    try {
      v = hyperseq::filter_query(h, p, {.horizon = 200000});
    } catch (const Error& e) {
      o.check(false, "filter " + name + " raised " + std::string(token(e.kind())));
      return;
    }
    std::cout << "  battery filter " << name << " -> " << hyperseq::to_string(v) << "\n";
    o.check(v == FilterVerdict::undecided, "filter " + name);
    ++count;
  };
  expect_dominance("(2+(-1)^n)/n vs 2/n", osc, RateSeq::monomial(Scalar(2), -1));
  expect_dominance("(-1)^n/n + 1/n vs 1/n^2", inv_n + RateSeq::monomial(Scalar(1), -1, 0, true),
                   RateSeq::monomial(Scalar(1), -2));
  expect_dominance("opaque vs 1/n", opaque, inv_n);
  expect_dominance("g(n) with opaque g vs 1", hyperseq::extend(hyperseq::Function::custom("g", [](double x) { return x; }), n),
                   RateSeq::constant(Scalar(1)));
  expect_equality("opaque vs 1/n", opaque, inv_n);
  expect_equality("1/(1/n+1/n^2) round trip",
                  hyperseq::reciprocal(hyperseq::reciprocal(inv_n + RateSeq::monomial(Scalar(1), -2)).sequence).sequence,
                  inv_n + RateSeq::monomial(Scalar(1), -2));
  const RateSeq n_int = n.with_integer_values(true);
  expect_filter("evens on n", n_int, Predicate::evens());
  expect_filter("squares on n", n_int, Predicate::squares());
  expect_filter("pow:3 on n", n_int, Predicate::perfect_powers(3));
  expect_filter("mod:3:1 on floor(n/2)", hyperseq::integer_part(RateSeq::monomial(Scalar(Rational(1, 2)), 1)),
                Predicate::progression(3, 1));
  expect_filter("squares on 2n", RateSeq::monomial(Scalar(2), 1).with_integer_values(true), Predicate::squares());
  expect_filter("evens on floor(sqrt n)", hyperseq::integer_part(RateSeq::monomial(Scalar(1), Rational(1, 2))),
                Predicate::evens());
  expect_filter("squares on n^3", hyperseq::integer_part(RateSeq::monomial(Scalar(1), 3)), Predicate::squares());
  // The enclosure stays open after the first undecided answer.
  const std::vector<FilterVerdict> answers{FilterVerdict::in_filter, FilterVerdict::undecided,
                                           FilterVerdict::in_complement};
  const auto box = hyperseq::dyadic_embed(answers);
  o.check(box.decided_bits == 1 && box.width() == Rational(1, 2), "enclosure after undecided");
  // Outside the certifiable fragment the answer is an error, never a guess.
  bool refused = false;
  try {
    hyperseq::filter_query(hyperseq::integer_part(RateSeq::monomial(Scalar(1), Rational(3, 2))), Predicate::evens(),
                           {.horizon = 20000});
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::certification_failure;
  }
  o.check(refused, "uncertifiable query must raise certification-failure");
  if (o.pass) o.detail = std::to_string(count) + " undecidable questions answered with explicit tokens";
  return o;
}

std::string capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return out + "<exit " + std::to_string(WEXITSTATUS(status)) + ">";
}

// Random trees for the print/parse fixpoint.
expr::ExprPtr random_tree(Gen& gen, int depth) {
  using K = expr::Expr::Kind;
  if (depth == 0 || gen.integer(0, 3) == 0) {
    switch (gen.integer(0, 4)) {
      case 0: return expr::number(Rational(gen.integer(0, 999), gen.coin() ? 1 : 4));
      case 1: return expr::make(K::eps);
      case 2: return expr::make(K::n);
      case 3: return expr::make(K::parity);
      default: return expr::call("ln", expr::make(K::n));
    }
  }
  switch (gen.integer(0, 6)) {
    case 0: return expr::make(K::neg, {random_tree(gen, depth - 1)});
    case 1: return expr::binary(K::add, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 2: return expr::binary(K::sub, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 3: return expr::binary(K::mul, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 4: return expr::binary(K::div, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 5: {
      auto base = random_tree(gen, depth - 1);
      if (base->kind == K::pow || base->kind == K::parity) base = expr::make(K::n);
      return expr::power(base, Rational(gen.integer(-6, 6), gen.integer(1, 4)));
    }
    default: return expr::call(gen.coin() ? "exp" : "sqrt", random_tree(gen, depth - 1));
  }
}

// Criterion 7: deterministic CLI output and the parser fixpoint.
Outcome cli_suite() {
  Outcome o;
  const std::string cli = INFINIKIT_CLI_PATH;
  const std::string data = INFINIKIT_DATA_DIR;
  const std::vector<std::string> golden{
      "eval --f '1/(1 + eps)' --cutoff 4",
      "st '3 + eps'",
      "st '1/eps'",
      "classify 'eps^(3/2) - eps'",
      "diff --f 1,-2,0,1/3 --x0 1/2",
      "seq --expr '3*n^-1*ln(n)^2' --prefix '{1:0.5, 2:0.25}'",
      "compare --a '(2 + (-1)^n)/n' --b '2/n'",
      "compare --a 'eps^2' --b 'eps'",
      "spectrum --matrix " + data + "/shear.txt --conjugate 42 --tail 'n^-1'",
      "--format doc spectrum --matrix " + data + "/quarter.json --conjugate 7",
      "dixmier --tail 'n^-1' --cap 2^20",
      "--format doc dixmier --tail '2*n^-1' --cap 2^16",
      "bridge --matrix " + data + "/quarter.txt --tail 'n^-1' --predicates gt:10,evens,squares --seed 5",
      "--format doc bridge --matrix " + data + "/shear.txt --tail 'n^-2' --predicates squares,mod:3:1 --seed 9",
  };
  for (const auto& args : golden) {
    const std::string first = capture(cli + " " + args + " 2>&1");
    const std::string second = capture(cli + " " + args + " 2>&1");
    o.check(first == second, "nondeterministic: " + args);
    o.check(first.find("<popen failed>") == std::string::npos, "could not run: " + args);
  }
  const std::string env_run = capture("INFINIKIT_SEED=5 " + cli + " bridge --matrix " + data +
                                      "/quarter.txt --tail 'n^-1' --predicates gt:10,evens,squares 2>&1");
  const std::string seeded = capture(cli + " bridge --matrix " + data +
                                     "/quarter.txt --tail 'n^-1' --predicates gt:10,evens,squares --seed 5 2>&1");
  o.check(env_run == seeded, "INFINIKIT_SEED fallback");

  Gen gen(7007);
  for (int trial = 0; trial < 500; ++trial) {
    const auto tree = random_tree(gen, 5);
    const std::string text = expr::print(tree);
    const auto again = expr::parse(text);
    o.check(*again == *tree && expr::print(again) == text, "fixpoint: " + text);
  }
  if (o.pass) o.detail = std::to_string(golden.size()) + " golden commands run twice, 500 expressions round-tripped";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double limit_seconds;  // 0 when no runtime bound applies
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Levi-Civita field suite", levi_civita_suite, 10},
      {2, "infinitesimal calculus", calculus_suite, 0},
      {3, "spectral retrieval", spectral_suite, 30},
      {4, "Dixmier estimator", dixmier_suite, 60},
      {5, "bridge theorem", bridge_suite, 0},
      {6, "exhibitability contract", exhibitability_suite, 0},
      {7, "CLI determinism", cli_suite, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " - " << o.detail << " ["
              << timing << "]" << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
