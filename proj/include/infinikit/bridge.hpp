#pragma once

// From a compact operator truncation with a symbolic tail to a sequence
// infinitesimal, and on through H = 1/eps, its integer part, membership
// verdicts and their dyadic enclosure.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/filter.hpp"
#include "infinikit/hyperseq.hpp"
#include "infinikit/opcalc.hpp"

namespace infinikit::bridge {

using hyperseq::DyadicInterval;
using hyperseq::FilterVerdict;
using hyperseq::Predicate;
using hyperseq::RateSeq;
using opcalc::OperatorTrunc;
using opcalc::SpectralSequence;

/// An error raised inside one stage of the pipeline.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

inline constexpr const char* exhibitability_note =
    "spectrum, eps, H = 1/eps and [H] are canonical and exhibited term by term; "
    "only answers for finite or cofinite index sets are choice-free, every "
    "undecided answer needs an ultrafilter, so the set itself is not exhibited";

struct Stage {
  std::string name;
  bool canonical = true;
  std::string value;
};

struct QueryResult {
  std::string predicate;
  FilterVerdict verdict;
};

struct BridgeReport {
  SpectralSequence spectral{std::vector<double>{}};
  RateSeq robinson;
  RateSeq H;
  RateSeq H_int;
  std::vector<hyperseq::Index> skipped;
  std::vector<QueryResult> queries;
  DyadicInterval enclosure;
  std::string exhibitability_note;
  std::vector<Stage> stages;
};

/// The decreasing spectrum of |T| as the prefix, the tail as the class.
inline RateSeq operator_to_infinitesimal(const OperatorTrunc& t, const RateSeq& tail) {
  const SpectralSequence s = opcalc::spectrum_desc(t).with_tail(tail);
  if (!opcalc::is_compact_model(s))
    fail(ErrorKind::not_compact, "tail '" + tail.key() + "' does not tend to 0");
  RateSeq::Prefix prefix;
  for (std::size_t k = 0; k < s.values().size(); ++k) prefix[k + 1] = Scalar(s.values()[k]);
  RateSeq eps = tail.with_prefix(prefix);
  if (hyperseq::dominance_compare(eps, RateSeq::constant(Scalar(1))) != hyperseq::DominanceVerdict::less)
    fail(ErrorKind::certification_failure, "cannot certify '" + tail.key() + "' as infinitesimal");
  return eps;
}

template <typename F>
auto in_stage(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

inline BridgeReport run_bridge(const OperatorTrunc& t, const RateSeq& tail,
                               std::span<const Predicate> predicates,
                               const hyperseq::FilterOptions& options = {}) {
  if (predicates.empty())
    throw StageError("input", Error(ErrorKind::precondition, "run_bridge needs at least one predicate"));
  BridgeReport r;
  r.spectral = in_stage("spectrum", [&] { return opcalc::spectrum_desc(t).with_tail(tail); });
  r.robinson = in_stage("infinitesimal", [&] { return operator_to_infinitesimal(t, tail); });
  auto rec = in_stage("reciprocal", [&] { return hyperseq::reciprocal(r.robinson); });
  r.H = std::move(rec.sequence);
  r.skipped = std::move(rec.skipped);
  r.H_int = in_stage("integer-part", [&] { return hyperseq::integer_part(r.H); });

  std::vector<FilterVerdict> verdicts;
  for (const Predicate& p : predicates) {
    const FilterVerdict v = in_stage("filter:" + p.name(), [&] { return hyperseq::filter_query(r.H_int, p, options); });
    r.queries.push_back({p.name(), v});
    verdicts.push_back(v);
  }
  r.enclosure = hyperseq::dyadic_embed(verdicts);
  r.exhibitability_note = exhibitability_note;

  r.stages.push_back({"spectrum", true, std::to_string(r.spectral.values().size()) + " values"});
  r.stages.push_back({"infinitesimal", true, r.robinson.key()});
  r.stages.push_back({"reciprocal", true, r.H.key()});
  r.stages.push_back({"integer-part", true, r.H_int.key()});
  for (const auto& q : r.queries)
    r.stages.push_back({"filter:" + q.predicate, q.verdict != FilterVerdict::undecided,
                        std::string(hyperseq::to_string(q.verdict))});
  const bool all_decided = r.enclosure.decided_bits == verdicts.size();
  r.stages.push_back({"enclosure", all_decided,
                      "[" + infinikit::to_string(r.enclosure.lower) + ", " + infinikit::to_string(r.enclosure.upper) + "]"});
  return r;
}

}  // namespace infinikit::bridge
