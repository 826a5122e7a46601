#pragma once

// Recovers a model's characterisation from its predictions: per-gcd
// histograms, determinism, the inferred set of correct values and checks
// that the predictions follow f(k) = max{d in D : d | k}.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcdlab/oracle.hpp"

namespace gcdlab::analyzer {

struct PredictionRecord {
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  std::uint64_t g = 1;
  /// Empty when the model output did not decode to an integer.
  std::optional<std::uint64_t> pred;
  std::int64_t epoch = 0;
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct TopPrediction {
  std::optional<std::uint64_t> value;
  std::uint64_t count = 0;
  double frequency = 0.0;
};

/// Per-gcd histogram of predictions. Merging is associative and
/// commutative, so partial tallies from any partition of the records can
/// be combined.
class GcdTally {
 public:
  void add(const PredictionRecord& r) { add(r.g, r.pred); }
  void add(std::uint64_t k, std::optional<std::uint64_t> pred, std::uint64_t count = 1);
  GcdTally& merge(const GcdTally& other);

  std::vector<std::uint64_t> gcds() const;
  bool has(std::uint64_t k) const { return rows_.contains(k); }
  const std::map<std::uint64_t, std::uint64_t>& histogram(std::uint64_t k) const;
  std::uint64_t malformed(std::uint64_t k) const;
  std::uint64_t total(std::uint64_t k) const;
  std::uint64_t total() const;
  std::uint64_t malformed_total() const;

  /// Most frequent outcome; ties go to the smaller value, and decoded
  /// values win ties against the malformed bucket.
  TopPrediction top(std::uint64_t k) const;

  /// Fewest distinct outcomes (malformed counts as one) whose combined
  /// frequency reaches `coverage`.
  std::size_t predictions_to_cover(std::uint64_t k, double coverage) const;

  friend bool operator==(const GcdTally&, const GcdTally&) = default;

 private:
  struct Row {
    std::map<std::uint64_t, std::uint64_t> preds;
    std::uint64_t malformed = 0;
    std::uint64_t total = 0;
    friend bool operator==(const Row&, const Row&) = default;
  };
  std::map<std::uint64_t, Row> rows_;
};

/// Throws std::invalid_argument on an empty record set.
GcdTally tally(std::span<const PredictionRecord> records);
std::map<std::int64_t, GcdTally> tally_by_epoch(std::span<const PredictionRecord> records);

struct AnalysisOptions {
  double determinism_threshold = 0.99;
  /// Top frequency needed for k to count as correctly predicted.
  double membership_threshold = 0.9;
  /// Rules are only asserted for gcds with at least this many records.
  std::uint64_t min_records = 100;
  std::uint64_t cap = 100;
  /// Mostly-deterministic check: at most this many outcomes ...
  std::size_t max_predictions = 3;
  /// ... must cover this share of the records of a gcd.
  double coverage = 0.9;
};

struct DeterminismResult {
  std::map<std::uint64_t, bool> per_k;
  std::map<std::uint64_t, double> top_frequency;
  bool all = true;
};

/// theta must lie in (0.5, 1].
DeterminismResult check_determinism(const GcdTally& t, double theta);

struct InferredRules {
  oracle::RuleSet rules;
  /// k in [1, cap] with no record at all.
  std::vector<std::uint64_t> missing;
  /// k in [1, cap] with fewer than min_records records.
  std::vector<std::uint64_t> insufficient;
};

InferredRules infer_rule_set(const GcdTally& t, const AnalysisOptions& opts = {});

enum class Verdict { pass, fail, insufficient_data };
std::string_view to_string(Verdict v);

struct Violation {
  std::string rule;
  std::uint64_t k = 0;
  std::optional<std::uint64_t> expected;
  std::optional<std::uint64_t> observed;
  std::string detail;
};

struct RuleReport {
  std::uint64_t base = 0;
  /// "R" for plain rules, "G" once grokked primes are allowed.
  std::string family = "R";
  std::vector<std::uint64_t> inferred;
  std::vector<std::uint64_t> missing;
  std::vector<std::uint64_t> insufficient;
  std::map<std::uint64_t, double> top_frequency;
  std::map<std::string, Verdict> verdicts;
  std::vector<Violation> violations;
  std::uint64_t malformed = 0;

  bool passed() const;
};

/// Checks determinism, that every inferred value factors over the primes of
/// the base plus `grok_primes`, and that the top prediction for each k is
/// the largest inferred value dividing k.
RuleReport verify_rules(const GcdTally& t, const oracle::RuleSet& inferred, std::uint64_t base,
                        std::span<const std::uint64_t> grok_primes,
                        const AnalysisOptions& opts = {});

/// infer_rule_set() followed by verify_rules().
RuleReport analyze_rules(const GcdTally& t, std::uint64_t base,
                         std::span<const std::uint64_t> grok_primes,
                         const AnalysisOptions& opts = {});

/// Groups [1, cap] by the largest element of `set` dividing each value.
class ClassPartition {
 public:
  ClassPartition(std::vector<std::uint64_t> set, std::uint64_t cap);

  /// Defined for every positive integer, not only those up to cap.
  std::uint64_t label_of(std::uint64_t k) const;
  const std::map<std::uint64_t, std::vector<std::uint64_t>>& classes() const { return classes_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::vector<std::uint64_t> set_;
  std::uint64_t cap_;
  std::map<std::uint64_t, std::vector<std::uint64_t>> classes_;
};

ClassPartition class_partition(std::span<const std::uint64_t> set, std::uint64_t cap);

struct EpochUniformResult {
  std::int64_t epoch = 0;
  std::map<std::string, Verdict> verdicts;
  /// Class label -> prediction shared by the class: the most common top
  /// value, decoded values first, then the one of the smallest member.
  std::map<std::uint64_t, std::optional<std::uint64_t>> class_prediction;
  std::vector<std::uint64_t> correct;
  std::vector<Violation> violations;
  /// consistent | inconsistent | breakdown
  std::string status;
};

struct UniformReport {
  std::vector<EpochUniformResult> epochs;
  /// Class label -> (epoch, chosen prediction) across epochs.
  std::map<std::uint64_t, std::vector<std::pair<std::int64_t, std::optional<std::uint64_t>>>> drift;
  /// Share of the previous epoch's correct gcds that are no longer correct.
  std::vector<std::pair<std::int64_t, double>> churn;
  bool breakdown = false;
};

UniformReport verify_uniform_rules(const std::map<std::int64_t, GcdTally>& epochs,
                                   const ClassPartition& partition,
                                   const AnalysisOptions& opts = {});

enum class Weighting { natural, stratified };

struct Metrics {
  std::uint64_t records = 0;
  /// natural: share of records predicted exactly. stratified: mean of the
  /// per-gcd accuracies over k <= cap.
  double accuracy = 0.0;
  std::uint64_t correct_gcd_count = 0;
  std::map<std::uint64_t, double> per_k_accuracy;
};

Metrics metrics(std::span<const PredictionRecord> records, Weighting weighting = Weighting::natural,
                std::uint64_t cap = 100, double learned_threshold = 0.9);

/// (epoch, per-gcd accuracy) in epoch order.
using EpochSeries = std::vector<std::pair<std::int64_t, std::map<std::uint64_t, double>>>;

std::optional<std::int64_t> epoch_learned(const EpochSeries& series, std::uint64_t k,
                                          double theta = 0.9);

/// "GCD Pred %" blocks side by side, `columns` blocks per row.
std::string render_prediction_table(const GcdTally& t, std::uint64_t kmax,
                                    std::size_t columns = 3);

}  // namespace gcdlab::analyzer
