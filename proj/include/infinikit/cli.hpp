#pragma once

// Command-line front end. run_cli never exits the process; it returns the
// exit code: 0 on success, 1 on domain errors, 2 on usage or syntax errors.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infinikit/bridge.hpp"
#include "infinikit/dixmier.hpp"
#include "infinikit/eval.hpp"
#include "infinikit/io.hpp"
#include "infinikit/levi_civita.hpp"
#include "infinikit/opcalc.hpp"

namespace infinikit::cli {

using io::json;
using hyperseq::Index;

struct Settings {
  std::string format = "text";
  std::string cutoff = "8";
  // LC commands
  std::string f;
  std::string x0 = "0";
  std::string alpha = "eps";
  // seq / compare
  std::string expr;
  std::string prefix;
  std::string a;
  std::string b;
  std::string mode = "auto";
  std::size_t samples = 5;
  // operators
  std::string matrix;
  std::optional<std::uint64_t> conjugate;
  std::string tail;
  std::string cap = "2^20";
  double tol = 1e-3;
  bool no_smoothing = false;
  std::string data;
  std::string predicates;
  std::optional<std::uint64_t> seed;
  std::size_t horizon = 1'000'000;
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::syntax:
    case ErrorKind::usage:
    case ErrorKind::mode_mismatch: return 2;
    default: return 1;
  }
}

namespace detail {

inline std::string seq_text(const hyperseq::RateSeq& s) {
  std::string out = s.key();
  if (!s.prefix().empty()) {
    out += " {";
    bool first = true;
    for (const auto& [n, v] : s.prefix()) {
      out += (first ? "" : ", ") + std::to_string(n) + ":" + (v.is_exact() ? v.str() : io::format_real(v.to_double()));
      first = false;
    }
    out += "}";
  }
  return out;
}

inline std::string scalar_text(const Scalar& s) { return s.is_exact() ? s.str() : io::format_real(s.to_double()); }

inline json scalar_json(const Scalar& s) {
  if (s.is_exact()) return s.str();
  return io::round_real(s.to_double());
}

inline Index parse_cap(const std::string& text) {
  try {
    if (const auto caret = text.find('^'); caret != std::string::npos) {
      const auto base = std::stoull(text.substr(0, caret));
      const auto exponent = std::stoull(text.substr(caret + 1));
      if (base != 2 || exponent > 40) fail(ErrorKind::usage, "--cap accepts 2^k with k <= 40 or an integer");
      return Index{1} << exponent;
    }
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::usage, "--cap: cannot read '" + text + "'");
  }
}

inline lc::Polynomial parse_polynomial(const std::string& text) {
  lc::Polynomial p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) p.coefficients.push_back(parse_rational(io::detail::trim(item)));
  if (p.coefficients.empty()) fail(ErrorKind::syntax, "--f needs a coefficient list c0,c1,...");
  return p;
}

inline hyperseq::RateSeq sequence_with_prefix(const Settings& s, const std::string& text) {
  hyperseq::RateSeq seq = expr::eval_seq(text);
  if (!s.prefix.empty()) {
    const std::string body = s.prefix.front() == '{' ? s.prefix : io::read_file(s.prefix);
    seq = seq.with_prefix(io::parse_prefix(body));
  }
  return seq;
}

inline void emit(std::ostream& out, const Settings& s, const json& doc, const std::string& text) {
  if (s.format == "doc") out << doc.dump(2) << "\n";
  else out << text;
}

inline std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("INFINIKIT_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::usage, "INFINIKIT_SEED must be a nonnegative integer");
}

inline void run_lc(const std::string& command, const Settings& s, std::ostream& out) {
  const Rational cutoff = parse_rational(s.cutoff);
  if (command == "diff") {
    const lc::Polynomial f = parse_polynomial(s.f);
    const Rational x0 = parse_rational(s.x0);
    const Rational d = lc::derivative(f, x0);
    const bool continuous = lc::continuity_check(f, x0, expr::eval_lc(s.alpha, cutoff));
    emit(out, s, {{"derivative", to_string(d)}, {"continuous", continuous}},
         "derivative: " + to_string(d) + "\ncontinuous: " + (continuous ? "true" : "false") + "\n");
    return;
  }
  const lc::LCNumber x = expr::eval_lc(s.f, cutoff);
  if (command == "eval") {
    emit(out, s, {{"value", lc::to_string(x)}}, lc::to_string(x) + "\n");
  } else if (command == "st") {
    const std::string v = to_string(lc::standard_part(x));
    emit(out, s, {{"standard_part", v}}, v + "\n");
  } else {
    const std::string c(lc::to_string(lc::classify(x)));
    emit(out, s, {{"classification", c}}, c + "\n");
  }
}

inline void run_seq(const Settings& s, std::ostream& out) {
  const hyperseq::RateSeq seq = sequence_with_prefix(s, s.expr);
  const auto rate = seq.rate();
  const std::string rate_text = rate ? rate->str() : "unresolved";
  const hyperseq::Limit limit = seq.limit();
  std::optional<Scalar> st;
  if (limit.kind == hyperseq::LimitKind::finite) st = limit.value;
  json samples = json::array();
  std::string sample_text;
  for (Index n = 1; n <= s.samples; ++n) {
    const Scalar v = seq.sample(n);
    samples.push_back(scalar_json(v));
    sample_text += (n > 1 ? ", " : "") + scalar_text(v);
  }
  json doc{{"sequence", seq_text(seq)}, {"class", rate_text}, {"limit", limit.str()}};
  doc["standard_part"] = st ? scalar_json(*st) : json(nullptr);
  doc["integer_valued"] = seq.integer_valued();
  doc["samples"] = samples;
  std::string text = "sequence: " + seq_text(seq) + "\nclass: " + rate_text + "\nlimit: " + limit.str() +
                     "\nst: " + (st ? scalar_text(*st) : "none") + "\nsamples: " + sample_text + "\n";
  emit(out, s, doc, text);
}

inline void run_compare(const Settings& s, std::ostream& out) {
  std::string mode = s.mode;
  if (mode == "auto") {
    mode = "lc";
    try {
      expr::eval_lc(s.a, parse_rational(s.cutoff));
      expr::eval_lc(s.b, parse_rational(s.cutoff));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::mode_mismatch) throw;
      mode = "seq";
    }
  }
  if (mode == "lc") {
    const Rational cutoff = parse_rational(s.cutoff);
    const std::string v(lc::to_string(lc::compare(expr::eval_lc(s.a, cutoff), expr::eval_lc(s.b, cutoff))));
    emit(out, s, {{"mode", "lc"}, {"order", v}}, v + "\n");
    return;
  }
  const hyperseq::RateSeq a = expr::eval_seq(s.a);
  const hyperseq::RateSeq b = expr::eval_seq(s.b);
  const std::string d(hyperseq::to_string(hyperseq::dominance_compare(a, b)));
  const std::string e(hyperseq::to_string(hyperseq::eventually_equal(a, b)));
  emit(out, s, {{"mode", "seq"}, {"dominance", d}, {"eventually_equal", e}},
       "dominance: " + d + "\neventually-equal: " + e + "\n");
}

inline opcalc::OperatorTrunc load_operator(const Settings& s, std::optional<std::uint64_t> seed) {
  if (s.matrix.empty()) fail(ErrorKind::usage, "--matrix is required");
  opcalc::OperatorTrunc t(io::load_matrix(s.matrix), "user");
  if (seed) t = opcalc::conjugate(t, opcalc::random_orthogonal(t.dim(), *seed));
  return t;
}

inline void run_spectrum(const Settings& s, std::ostream& out) {
  opcalc::SpectralSequence spec = opcalc::spectrum_desc(load_operator(s, s.conjugate));
  if (!s.tail.empty()) spec = spec.with_tail(expr::eval_seq(s.tail));
  emit(out, s, io::spectrum_json(spec), io::format_spectrum(spec));
}

inline void run_dixmier(const Settings& s, std::ostream& out) {
  if (s.tail.empty()) fail(ErrorKind::usage, "--tail is required");
  const opcalc::SpectralSequence spec({}, sequence_with_prefix(s, s.tail));
  dixmier::DixmierOptions options;
  options.cap = parse_cap(s.cap);
  options.tolerance = s.tol;
  options.smoothing = !s.no_smoothing;
  const dixmier::DixmierEstimate e = dixmier::dixmier_estimate(spec, options);
  if (!s.data.empty()) {
    std::ofstream data(s.data, std::ios::binary);
    if (!data) fail(ErrorKind::invalid_input, "cannot write '" + s.data + "'");
    data << "# N gamma_N\n";
    for (std::size_t j = 0; j < e.schedule.size(); ++j)
      data << e.schedule[j] << " " << io::format_real(e.gamma_values[j]) << "\n";
  }
  std::ostringstream text;
  text << "N gamma_N extrapolated\n";
  for (std::size_t j = 0; j < e.schedule.size(); ++j) {
    text << e.schedule[j] << " " << io::format_real(e.gamma_values[j]) << " "
         << (j >= e.window_start ? io::format_real(e.extrapolated[j]) : "-") << "\n";
  }
  text << "liminf: " << io::format_real(e.liminf) << "\n"
       << "limsup: " << io::format_real(e.limsup) << "\n"
       << "spread: " << io::format_real(e.spread) << "\n"
       << "verdict: " << (e.measurable ? "measurable" : "non-measurable")
       << " (proxy: spread of the smoothed extrapolated gamma_N, tolerance " << io::format_real(s.tol) << ")\n"
       << "value: " << (e.value ? io::format_real(*e.value) : "none") << "\n";
  emit(out, s, io::dixmier_json(e), text.str());
}

inline std::vector<hyperseq::Predicate> parse_predicates(const std::string& list) {
  std::vector<hyperseq::Predicate> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = io::detail::trim(item);
    if (!t.empty()) out.push_back(hyperseq::Predicate::parse(t));
  }
  return out;
}

inline void run_bridge(const Settings& s, std::ostream& out) {
  if (s.tail.empty()) fail(ErrorKind::usage, "--tail is required");
  const std::optional<std::uint64_t> seed = s.seed ? s.seed : seed_from_env();
  const opcalc::OperatorTrunc t = load_operator(s, seed);
  const std::vector<hyperseq::Predicate> predicates = parse_predicates(s.predicates);
  const bridge::BridgeReport r =
      bridge::run_bridge(t, expr::eval_seq(s.tail), predicates, {.horizon = s.horizon});
  std::ostringstream text;
  for (const auto& st : r.stages)
    text << st.name << " [" << (st.canonical ? "canonical" : "needs ultrafilter") << "]: " << st.value << "\n";
  text << "robinson: " << seq_text(r.robinson) << "\n"
       << "H: " << seq_text(r.H) << "\n"
       << "H_int: " << seq_text(r.H_int) << "\n";
  if (!r.skipped.empty()) {
    text << "skipped:";
    for (auto n : r.skipped) text << " " << n;
    text << "\n";
  }
  text << "enclosure: [" << to_string(r.enclosure.lower) << ", " << to_string(r.enclosure.upper)
       << "] decided bits " << r.enclosure.decided_bits << "\n"
       << "note: " << r.exhibitability_note << "\n";
  json doc = io::bridge_json(r);
  doc["seed"] = seed ? json(*seed) : json(nullptr);
  emit(out, s, doc, text.str());
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact infinitesimals, sequence hyperreals and spectral diagnostics", "infinikit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Settings s;
  app.add_option("--format", s.format, "Output form")->check(CLI::IsMember({"text", "doc"}));
  app.add_option("--cutoff", s.cutoff, "Truncation order for LC inverses");

  std::vector<CLI::App*> lc_commands;
  const std::pair<const char*, const char*> lc_descriptions[] = {
      {"eval", "Evaluate an LC expression"},
      {"st", "Standard part of an LC expression"},
      {"classify", "Zero, infinitesimal, appreciable or infinite"}};
  for (const auto& [name, description] : lc_descriptions) {
    CLI::App* c = app.add_subcommand(name, description);
    auto* f = c->add_option("--f", s.f, "LC expression");
    c->add_option("expression", s.f, "LC expression")->excludes(f);
    lc_commands.push_back(c);
  }
  CLI::App* diff = app.add_subcommand("diff", "Derivative of a polynomial and its continuity check");
  diff->add_option("--f", s.f, "Coefficients c0,c1,... (constant first)")->required();
  diff->add_option("--x0", s.x0, "Rational evaluation point");
  diff->add_option("--alpha", s.alpha, "Infinitesimal increment for the continuity check");

  CLI::App* seq = app.add_subcommand("seq", "Inspect a sequence expression");
  auto* e = seq->add_option("--expr", s.expr, "Sequence expression");
  seq->add_option("expression", s.expr, "Sequence expression")->excludes(e);
  seq->add_option("--prefix", s.prefix, "Prefix file or inline {1:0.5, 2:0.25}");
  seq->add_option("--samples", s.samples, "Number of leading samples to print");

  CLI::App* compare = app.add_subcommand("compare", "Order of LC numbers or dominance of sequences");
  compare->add_option("--a", s.a)->required();
  compare->add_option("--b", s.b)->required();
  compare->add_option("--mode", s.mode)->check(CLI::IsMember({"auto", "lc", "seq"}));

  CLI::App* spectrum = app.add_subcommand("spectrum", "Decreasing spectrum of |T|");
  spectrum->add_option("--matrix", s.matrix, "Matrix file")->required();
  spectrum->add_option("--conjugate", s.conjugate, "Conjugate by a random rotation with this seed");
  spectrum->add_option("--tail", s.tail, "Symbolic tail annotation");

  CLI::App* dix = app.add_subcommand("dixmier", "Logarithmic-mean diagnostics of a tail");
  dix->add_option("--tail", s.tail, "Tail expression")->required();
  dix->add_option("--prefix", s.prefix, "Prefix file or inline overrides");
  dix->add_option("--cap", s.cap, "Schedule cap: an integer or 2^k");
  dix->add_option("--tol", s.tol, "Measurability tolerance");
  dix->add_flag("--no-smoothing", s.no_smoothing, "Disable the running mean");
  dix->add_option("--data", s.data, "Write (N, gamma_N) pairs to this file");

  CLI::App* br = app.add_subcommand("bridge", "Operator to infinitesimal to filter verdicts");
  br->add_option("--matrix", s.matrix, "Matrix file")->required();
  br->add_option("--tail", s.tail, "Tail expression")->required();
  br->add_option("--predicates", s.predicates, "Comma-separated predicates: gt:K, evens, mod:M:R, squares, ...")
      ->required();
  br->add_option("--seed", s.seed, "Rotation seed (default: INFINIKIT_SEED)");
  br->add_option("--horizon", s.horizon, "Sampling horizon for filter certification");

  std::vector<const char*> argv{"infinikit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    for (CLI::App* c : lc_commands)
      if (c->parsed()) {
        if (s.f.empty()) fail(ErrorKind::usage, "an LC expression is required");
        detail::run_lc(c->get_name(), s, out);
      }
    if (diff->parsed()) detail::run_lc("diff", s, out);
    if (seq->parsed()) {
      if (s.expr.empty()) fail(ErrorKind::usage, "--expr is required");
      detail::run_seq(s, out);
    }
    if (compare->parsed()) detail::run_compare(s, out);
    if (spectrum->parsed()) detail::run_spectrum(s, out);
    if (dix->parsed()) detail::run_dixmier(s, out);
    if (br->parsed()) detail::run_bridge(s, out);
  } catch (const Error& e) {
    err << "error: " << token(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << token(ErrorKind::invalid_input) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace infinikit::cli
