#include "gcdlab/analyzer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gcdlab/number_theory.hpp"

namespace gcdlab::analyzer {

namespace nt = number_theory;

void GcdTally::add(std::uint64_t k, std::optional<std::uint64_t> pred, std::uint64_t count) {
  auto& row = rows_[k];
  if (pred) {
    row.preds[*pred] += count;
  } else {
    row.malformed += count;
  }
  row.total += count;
}

GcdTally& GcdTally::merge(const GcdTally& other) {
  for (const auto& [k, row] : other.rows_) {
    auto& mine = rows_[k];
    for (const auto& [p, c] : row.preds) mine.preds[p] += c;
    mine.malformed += row.malformed;
    mine.total += row.total;
  }
  return *this;
}

std::vector<std::uint64_t> GcdTally::gcds() const {
  std::vector<std::uint64_t> out;
  for (const auto& [k, row] : rows_) out.push_back(k);
  return out;
}

const std::map<std::uint64_t, std::uint64_t>& GcdTally::histogram(std::uint64_t k) const {
  static const std::map<std::uint64_t, std::uint64_t> kEmpty;
  auto it = rows_.find(k);
  return it == rows_.end() ? kEmpty : it->second.preds;
}

std::uint64_t GcdTally::malformed(std::uint64_t k) const {
  auto it = rows_.find(k);
  return it == rows_.end() ? 0 : it->second.malformed;
}

std::uint64_t GcdTally::total(std::uint64_t k) const {
  auto it = rows_.find(k);
  return it == rows_.end() ? 0 : it->second.total;
}

std::uint64_t GcdTally::total() const {
  std::uint64_t n = 0;
  for (const auto& [k, row] : rows_) n += row.total;
  return n;
}

std::uint64_t GcdTally::malformed_total() const {
  std::uint64_t n = 0;
  for (const auto& [k, row] : rows_) n += row.malformed;
  return n;
}

TopPrediction GcdTally::top(std::uint64_t k) const {
  auto it = rows_.find(k);
  if (it == rows_.end() || it->second.total == 0) return {};
  const auto& row = it->second;
  TopPrediction best;
  for (const auto& [p, c] : row.preds) {
    if (c > best.count) best = {p, c, 0.0};
  }
  if (row.malformed > best.count) best = {std::nullopt, row.malformed, 0.0};
  best.frequency = static_cast<double>(best.count) / static_cast<double>(row.total);
  return best;
}

std::size_t GcdTally::predictions_to_cover(std::uint64_t k, double coverage) const {
  auto it = rows_.find(k);
  if (it == rows_.end() || it->second.total == 0) return 0;
  const auto& row = it->second;
  std::vector<std::uint64_t> counts;
  for (const auto& [p, c] : row.preds) counts.push_back(c);
  if (row.malformed) counts.push_back(row.malformed);
  std::sort(counts.rbegin(), counts.rend());
  const double need = coverage * static_cast<double>(row.total);
  double acc = 0.0;
  std::size_t used = 0;
  for (auto c : counts) {
    acc += static_cast<double>(c);
    ++used;
    if (acc >= need) break;
  }
  return used;
}

GcdTally tally(std::span<const PredictionRecord> records) {
  if (records.empty()) throw std::invalid_argument("tally: no records");
  GcdTally t;
  for (const auto& r : records) t.add(r);
  return t;
}

std::map<std::int64_t, GcdTally> tally_by_epoch(std::span<const PredictionRecord> records) {
  if (records.empty()) throw std::invalid_argument("tally: no records");
  std::map<std::int64_t, GcdTally> out;
  for (const auto& r : records) out[r.epoch].add(r);
  return out;
}

DeterminismResult check_determinism(const GcdTally& t, double theta) {
  if (!(theta > 0.5 && theta <= 1.0)) {
    throw std::invalid_argument("determinism threshold must lie in (0.5, 1]");
  }
  DeterminismResult out;
  for (auto k : t.gcds()) {
    const auto top = t.top(k);
    const bool ok = top.value.has_value() && top.frequency >= theta;
    out.per_k[k] = ok;
    out.top_frequency[k] = top.frequency;
    out.all = out.all && ok;
  }
  return out;
}

InferredRules infer_rule_set(const GcdTally& t, const AnalysisOptions& opts) {
  std::vector<std::uint64_t> elements{1};
  std::vector<std::uint64_t> missing, insufficient;
  for (std::uint64_t k = 1; k <= opts.cap; ++k) {
    const auto n = t.total(k);
    if (n == 0) {
      missing.push_back(k);
      continue;
    }
    if (n < opts.min_records) {
      insufficient.push_back(k);
      continue;
    }
    const auto top = t.top(k);
    if (k != 1 && top.value == k && top.frequency >= opts.membership_threshold) {
      elements.push_back(k);
    }
  }
  return {oracle::RuleSet(std::move(elements), opts.cap), std::move(missing),
          std::move(insufficient)};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::insufficient_data:
      return "insufficient_data";
  }
  return "?";
}

bool RuleReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const auto& kv) { return kv.second == Verdict::pass; });
}

RuleReport verify_rules(const GcdTally& t, const oracle::RuleSet& inferred, std::uint64_t base,
                        std::span<const std::uint64_t> grok_primes, const AnalysisOptions& opts) {
  RuleReport report;
  report.base = base;
  report.family = grok_primes.empty() ? "R" : "G";
  report.inferred = inferred.elements();
  report.malformed = t.malformed_total();
  const auto rule = [&](int i) { return report.family + std::to_string(i); };

  std::vector<std::uint64_t> checked;
  for (auto k : t.gcds()) {
    if (k > opts.cap) continue;
    if (t.total(k) < opts.min_records) {
      report.insufficient.push_back(k);
      continue;
    }
    checked.push_back(k);
  }
  for (std::uint64_t k = 1; k <= opts.cap; ++k) {
    if (!t.has(k)) report.missing.push_back(k);
  }

  if (checked.empty()) {
    for (int i = 1; i <= 3; ++i) report.verdicts[rule(i)] = Verdict::insufficient_data;
    return report;
  }

  // Determinism.
  Verdict r1 = Verdict::pass;
  for (auto k : checked) {
    const auto top = t.top(k);
    report.top_frequency[k] = top.frequency;
    if (!top.value || top.frequency < opts.determinism_threshold) {
      r1 = Verdict::fail;
      report.violations.push_back(
          {rule(1), k, std::nullopt, top.value,
           fmt::format("top prediction frequency {:.4f} below {:.4f}", top.frequency,
                       opts.determinism_threshold)});
    }
  }
  report.verdicts[rule(1)] = r1;

  // Correct values factor over the allowed primes.
  std::set<std::uint64_t> allowed;
  for (auto p : nt::distinct_primes(base)) allowed.insert(p);
  allowed.insert(grok_primes.begin(), grok_primes.end());
  Verdict r2 = Verdict::pass;
  for (auto d : inferred.elements()) {
    if (d == 1) continue;
    for (const auto& pp : nt::factorize(d)) {
      if (!allowed.contains(pp.prime)) {
        r2 = Verdict::fail;
        report.violations.push_back({rule(2), d, std::nullopt, d,
                                     fmt::format("prime {} neither divides the base nor is "
                                                 "an allowed grokked prime",
                                                 pp.prime)});
        break;
      }
    }
  }
  report.verdicts[rule(2)] = r2;

  // Largest correct value dividing k.
  Verdict r3 = Verdict::pass;
  for (auto k : checked) {
    const auto expected = oracle::predict_f(k, inferred);
    const auto top = t.top(k);
    if (top.value != expected) {
      r3 = Verdict::fail;
      report.violations.push_back(
          {rule(3), k, expected, top.value, "top prediction is not the largest correct divisor"});
    }
  }
  report.verdicts[rule(3)] = r3;
  return report;
}

RuleReport analyze_rules(const GcdTally& t, std::uint64_t base,
                         std::span<const std::uint64_t> grok_primes, const AnalysisOptions& opts) {
  const auto inferred = infer_rule_set(t, opts);
  return verify_rules(t, inferred.rules, base, grok_primes, opts);
}

ClassPartition::ClassPartition(std::vector<std::uint64_t> set, std::uint64_t cap)
    : set_(std::move(set)), cap_(cap) {
  std::sort(set_.begin(), set_.end());
  set_.erase(std::unique(set_.begin(), set_.end()), set_.end());
  if (set_.empty() || set_.front() != 1) {
    throw std::invalid_argument("class partition needs a set containing 1");
  }
  for (std::uint64_t k = 1; k <= cap_; ++k) classes_[label_of(k)].push_back(k);
}

std::uint64_t ClassPartition::label_of(std::uint64_t k) const {
  auto it = std::upper_bound(set_.begin(), set_.end(), k);
  while (it != set_.begin()) {
    --it;
    if (k % *it == 0) return *it;
  }
  return 1;
}

ClassPartition class_partition(std::span<const std::uint64_t> set, std::uint64_t cap) {
  return ClassPartition({set.begin(), set.end()}, cap);
}

namespace {

std::vector<std::uint64_t> correct_set(const GcdTally& t, const AnalysisOptions& opts) {
  std::vector<std::uint64_t> out;
  for (auto k : t.gcds()) {
    if (k > opts.cap || t.total(k) < opts.min_records) continue;
    const auto top = t.top(k);
    if (top.value == k && top.frequency >= opts.membership_threshold) out.push_back(k);
  }
  return out;
}

}  // namespace

UniformReport verify_uniform_rules(const std::map<std::int64_t, GcdTally>& epochs,
                                   const ClassPartition& partition, const AnalysisOptions& opts) {
  UniformReport report;
  std::optional<std::vector<std::uint64_t>> previous;

  for (const auto& [epoch, t] : epochs) {
    EpochUniformResult res;
    res.epoch = epoch;

    // Members with enough data, grouped by class.
    std::map<std::uint64_t, std::vector<std::uint64_t>> members;
    Verdict u1 = Verdict::pass;
    for (auto k : t.gcds()) {
      if (k > partition.cap() || t.total(k) < opts.min_records) continue;
      members[partition.label_of(k)].push_back(k);
      const auto spread = t.predictions_to_cover(k, opts.coverage);
      if (spread > opts.max_predictions) {
        u1 = Verdict::fail;
        res.violations.push_back(
            {"U1", k, std::nullopt, t.top(k).value,
             fmt::format("{} distinct predictions needed to cover {:.0f}% of records", spread,
                         opts.coverage * 100)});
      }
    }

    Verdict u2 = Verdict::pass;
    Verdict u3 = Verdict::pass;
    for (const auto& [label, ks] : members) {
      // Most common top prediction; decoded values beat malformed, then the
      // prediction of the smaller member wins.
      std::map<std::optional<std::uint64_t>, std::size_t> votes;
      for (auto k : ks) ++votes[t.top(k).value];
      std::optional<std::uint64_t> shared;
      std::size_t best = 0;
      for (auto k : ks) {
        const auto v = t.top(k).value;
        const auto n = votes[v];
        if (n > best || (n == best && !shared && v)) {
          shared = v;
          best = n;
        }
      }
      res.class_prediction[label] = shared;
      report.drift[label].push_back({epoch, shared});
      for (auto k : ks) {
        const auto top = t.top(k).value;
        if (top != shared) {
          u2 = Verdict::fail;
          res.violations.push_back({"U2", k, shared, top,
                                    fmt::format("class {} is not predicted uniformly", label)});
        }
      }
      if (!shared || partition.label_of(*shared) != label) {
        u3 = Verdict::fail;
        res.violations.push_back(
            {"U3", label, std::nullopt, shared,
             fmt::format("prediction for class {} lies outside the class", label)});
      }
    }
    if (members.empty()) u1 = u2 = u3 = Verdict::insufficient_data;
    res.verdicts = {{"U1", u1}, {"U2", u2}, {"U3", u3}};
    if (u1 == Verdict::fail) {
      res.status = "breakdown";
      report.breakdown = true;
    } else if (u2 == Verdict::fail || u3 == Verdict::fail) {
      res.status = "inconsistent";
    } else if (u1 == Verdict::insufficient_data) {
      res.status = "insufficient_data";
    } else {
      res.status = "consistent";
    }

    res.correct = correct_set(t, opts);
    const auto current = res.correct;
    report.epochs.push_back(std::move(res));
    if (previous) {
      double churn = 0.0;
      if (!previous->empty()) {
        std::size_t kept = 0;
        for (auto k : *previous) {
          if (std::binary_search(current.begin(), current.end(), k)) ++kept;
        }
        churn = 1.0 - static_cast<double>(kept) / static_cast<double>(previous->size());
      }
      report.churn.push_back({epoch, churn});
    }
    previous = current;
  }
  return report;
}

Metrics metrics(std::span<const PredictionRecord> records, Weighting weighting, std::uint64_t cap,
                double learned_threshold) {
  Metrics m;
  m.records = records.size();
  if (records.empty()) return m;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> per_k;  // correct, total
  std::uint64_t correct = 0;
  for (const auto& r : records) {
    const bool ok = r.pred == r.g;
    correct += ok;
    auto& slot = per_k[r.g];
    slot.first += ok;
    ++slot.second;
  }
  for (const auto& [k, ct] : per_k) {
    m.per_k_accuracy[k] = static_cast<double>(ct.first) / static_cast<double>(ct.second);
  }
  double stratified_sum = 0.0;
  std::uint64_t stratified_n = 0;
  for (const auto& [k, acc] : m.per_k_accuracy) {
    if (k > cap) continue;
    stratified_sum += acc;
    ++stratified_n;
    if (acc >= learned_threshold) ++m.correct_gcd_count;
  }
  if (weighting == Weighting::natural) {
    m.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
  } else {
    m.accuracy = stratified_n ? stratified_sum / static_cast<double>(stratified_n) : 0.0;
  }
  return m;
}

std::optional<std::int64_t> epoch_learned(const EpochSeries& series, std::uint64_t k,
                                          double theta) {
  for (const auto& [epoch, acc] : series) {
    auto it = acc.find(k);
    if (it != acc.end() && it->second >= theta) return epoch;
  }
  return std::nullopt;
}

std::string render_prediction_table(const GcdTally& t, std::uint64_t kmax, std::size_t columns) {
  if (columns == 0) columns = 1;
  const std::uint64_t rows = (kmax + columns - 1) / columns;
  std::string out;
  for (std::size_t c = 0; c < columns; ++c) {
    out += fmt::format("{:>5} {:>6} {:>6}", "GCD", "Pred", "%");
    out += c + 1 < columns ? "  |  " : "\n";
  }
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns; ++c) {
      const std::uint64_t k = 1 + r + c * rows;
      std::string cell;
      if (k > kmax) {
        cell = fmt::format("{:>19}", "");
      } else if (!t.has(k)) {
        cell = fmt::format("{:>5} {:>6} {:>6}", k, "-", "-");
      } else {
        const auto top = t.top(k);
        const auto pred = top.value ? std::to_string(*top.value) : std::string("null");
        const auto mark = top.value == k ? "*" : " ";
        cell = fmt::format("{:>5} {:>5}{} {:>6.1f}", k, pred, mark, top.frequency * 100);
      }
      out += cell;
      out += c + 1 < columns ? "  |  " : "\n";
    }
  }
  return out;
}

}  // namespace gcdlab::analyzer
