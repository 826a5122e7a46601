// gcdlab: dataset generation, rule-based model simulation, prediction
// analysis and closed-form accuracies.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <set>
#include <sstream>

#include "gcdlab/analyzer.hpp"
#include "gcdlab/dataio.hpp"
#include "gcdlab/number_theory.hpp"
#include "gcdlab/oracle.hpp"
#include "gcdlab/report.hpp"
#include "gcdlab/sampling.hpp"

namespace {

using nlohmann::json;
namespace an = gcdlab::analyzer;
namespace io = gcdlab::dataio;
namespace nt = gcdlab::number_theory;
namespace orc = gcdlab::oracle;
namespace smp = gcdlab::sampling;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileIngestError : std::runtime_error {
  FileIngestError(std::string path, const io::IngestError& e)
      : std::runtime_error(e.what()), path(std::move(path)), line(e.line()) {}
  std::string path;
  std::size_t line;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s.front() == '-') {
    throw UsageError(fmt::format("{}: '{}' is not an unsigned integer", what, s));
  }
  return v;
}

// "2:6,5:2" -> {2: 6, 5: 2}
nt::ExponentCaps parse_caps(const std::string& s) {
  nt::ExponentCaps caps;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw UsageError("--caps expects prime:exponent pairs, got '" + item + "'");
    const auto p = to_u64(parts[0], "--caps");
    if (!nt::is_prime(p)) throw UsageError(fmt::format("--caps: {} is not prime", p));
    caps[p] = static_cast<unsigned>(to_u64(parts[1], "--caps"));
  }
  return caps;
}

std::vector<std::uint64_t> parse_list(const std::string& s, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(s, ',')) out.push_back(to_u64(item, what));
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

// "-" writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// gen-data ------------------------------------------------------------------

struct GenDataArgs {
  std::uint64_t base = 10;
  std::uint64_t M = 1'000'000;
  std::string operand_dist = "uniform";
  std::string outcome_dist = "natural";
  double mix_rho = 0.05;
  std::uint64_t kmax = 100;
  std::string log_rounding = "floor";
  std::string task = "gcd";
  std::uint64_t n = 300'000;
  std::uint64_t seed = 0;
  std::uint64_t shard = 0;
  std::string out;
};

void add_gen_data(CLI::App& app, GenDataArgs& a) {
  auto* cmd = app.add_subcommand("gen-data", "write a dataset file");
  cmd->add_option("--base", a.base, "numeral base")->capture_default_str();
  cmd->add_option("--M", a.M, "largest operand")->capture_default_str();
  cmd->add_option("--operand-dist", a.operand_dist, "uniform | log_uniform")->capture_default_str();
  cmd->add_option("--outcome-dist", a.outcome_dist,
                  "natural | mix_uniform | log_uniform | inv_sqrt | inv_power_1_5 | uniform")
      ->capture_default_str();
  cmd->add_option("--mix-rho", a.mix_rho, "share of uniform-outcome examples (mix_uniform)")
      ->capture_default_str();
  cmd->add_option("--kmax", a.kmax, "largest gcd drawn by outcome-controlled laws")
      ->capture_default_str();
  cmd->add_option("--log-rounding", a.log_rounding, "floor | nearest (log_uniform operands)")
      ->capture_default_str();
  cmd->add_option("--task", a.task, "gcd | compare | int_div | simplify | add | multiply")
      ->capture_default_str();
  cmd->add_option("--n", a.n, "number of examples")->capture_default_str();
  cmd->add_option("--seed", a.seed)->capture_default_str();
  cmd->add_option("--shard", a.shard)->capture_default_str();
  cmd->add_option("--out", a.out, "output path, - for stdout")->required();
}

void run_gen_data(const CLI::App& cmd, const GenDataArgs& a) {
  const auto given = [&](const char* name) { return cmd.count(name) > 0; };
  io::DatasetSpec spec;
  spec.task = a.task;
  spec.base = a.base;
  spec.n = a.n;
  spec.sampler.M = a.M;
  spec.sampler.seed = a.seed;
  spec.sampler.shard_id = a.shard;
  spec.sampler.mix_rho = a.mix_rho;
  spec.sampler.kmax = a.kmax;
  try {
    spec.sampler.operand_dist = smp::parse_operand_dist(a.operand_dist);
    spec.sampler.outcome_dist = smp::parse_outcome_dist(a.outcome_dist);
    spec.sampler.log_rounding = smp::parse_log_rounding(a.log_rounding);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (a.task != "gcd") {
    for (const char* opt : {"--operand-dist", "--outcome-dist", "--mix-rho", "--kmax",
                            "--log-rounding"}) {
      if (given(opt)) {
        throw UsageError(fmt::format("{} only applies to --task gcd; rational tasks draw every "
                                     "operand uniformly on [1, M]",
                                     opt));
      }
    }
  }
  if (given("--mix-rho") && spec.sampler.outcome_dist != smp::OutcomeDist::mix_uniform) {
    throw UsageError("--mix-rho requires --outcome-dist mix_uniform");
  }
  if (given("--kmax") && spec.sampler.outcome_dist == smp::OutcomeDist::natural) {
    throw UsageError("--kmax has no effect with --outcome-dist natural");
  }
  if (given("--log-rounding") && spec.sampler.operand_dist != smp::OperandDist::log_uniform) {
    throw UsageError("--log-rounding requires --operand-dist log_uniform");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Output out(a.out);
  io::write_dataset(out.stream(), spec);
}

// gen-testsets --------------------------------------------------------------

struct GenTestsetsArgs {
  std::uint64_t base = 10;
  std::uint64_t M = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t n = 100'000;
  std::string out_dir;
};

void add_gen_testsets(CLI::App& app, GenTestsetsArgs& a) {
  auto* cmd = app.add_subcommand("gen-testsets", "write natural.txt and stratified.txt");
  cmd->add_option("--base", a.base)->capture_default_str();
  cmd->add_option("--M", a.M)->capture_default_str();
  cmd->add_option("--seed", a.seed)->capture_default_str();
  cmd->add_option("--n", a.n, "examples per test set")->capture_default_str();
  cmd->add_option("--out-dir", a.out_dir)->required();
}

// Test sets use their own shards so they never overlap a training shard 0.
constexpr std::uint64_t kNaturalShard = 1'000'001;
constexpr std::uint64_t kStratifiedShard = 1'000'002;

void run_gen_testsets(const GenTestsetsArgs& a) {
  std::filesystem::create_directories(a.out_dir);
  json written = json::array();
  for (const bool stratified : {false, true}) {
    io::DatasetSpec spec;
    spec.base = a.base;
    spec.n = a.n;
    spec.sampler.M = a.M;
    spec.sampler.seed = a.seed;
    spec.sampler.shard_id = stratified ? kStratifiedShard : kNaturalShard;
    spec.sampler.outcome_dist = stratified ? smp::OutcomeDist::uniform : smp::OutcomeDist::natural;
    const auto path =
        (std::filesystem::path(a.out_dir) / (stratified ? "stratified.txt" : "natural.txt"))
            .string();
    Output out(path);
    io::write_dataset(out.stream(), spec);
    written.push_back({{"path", path}, {"n", a.n}});
  }
  std::cout << written.dump() << '\n';
}

// oracle-sim ----------------------------------------------------------------

struct OracleArgs {
  std::string preset;
  std::uint64_t base = 0;
  std::string caps;
  std::string grok;
  std::uint64_t cap = 100;
  std::string rules_out;
  std::string testset;
  std::int64_t epoch = 0;
  std::string out = "-";
  bool list = false;
};

void add_oracle_sim(CLI::App& app, OracleArgs& a) {
  auto* cmd = app.add_subcommand("oracle-sim", "predict a test set with a rule-based model");
  auto* preset = cmd->add_option("--preset", a.preset, "named rule set (see --list)");
  auto* base = cmd->add_option("--base", a.base, "build the rule set from a base");
  preset->excludes(base);
  cmd->add_option("--caps", a.caps, "exponent caps, e.g. 2:4,5:2")->needs(base);
  cmd->add_option("--grok", a.grok, "grokked prime powers, e.g. 3,9")->needs(base);
  cmd->add_option("--cap", a.cap, "largest element of D")->capture_default_str();
  cmd->add_option("--rules-out", a.rules_out, "also write the rule set");
  cmd->add_option("--testset", a.testset, "dataset file to predict");
  cmd->add_option("--epoch", a.epoch, "epoch field of the records")->capture_default_str();
  cmd->add_option("--out", a.out, "dump path, - for stdout")->capture_default_str();
  cmd->add_flag("--list", a.list, "list presets and exit");
}

orc::RuleSet rules_from(const OracleArgs& a) {
  if (!a.preset.empty()) {
    try {
      return orc::build_rule_set(orc::find_preset(a.preset), a.cap);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (a.base == 0) throw UsageError("give --preset or --base");
  try {
    return orc::build_rule_set(a.base, parse_caps(a.caps),
                               orc::GrokSpec(parse_list(a.grok, "--grok")), a.cap);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void run_oracle_sim(const OracleArgs& a) {
  if (a.list) {
    for (const auto& p : orc::presets()) {
      const auto rules = orc::build_rule_set(p);
      std::cout << fmt::format("{:<24} base {:<6} |D| {:<3} reported {:<3} {}\n", p.name, p.base,
                               rules.size(), p.reported_correct, p.description);
    }
    return;
  }
  const auto rules = rules_from(a);
  if (!a.rules_out.empty()) {
    Output out(a.rules_out);
    orc::write_rule_set(out.stream(), rules);
  }
  if (a.testset.empty()) {
    if (a.rules_out.empty()) throw UsageError("--testset is required unless only --rules-out is wanted");
    return;
  }
  auto in = open_in(a.testset);
  io::Dataset ds;
  try {
    ds = io::read_dataset(in);
  } catch (const io::IngestError& e) {
    throw FileIngestError(a.testset, e);
  }
  const auto pairs = io::gcd_pairs(ds);
  io::PredictionDump dump;
  dump.header = {{"model", a.preset.empty() ? "rules" : "preset:" + a.preset},
                 {"testset", a.testset}};
  std::string elements;
  for (auto d : rules.elements()) elements += (elements.empty() ? "" : ",") + std::to_string(d);
  dump.header.emplace_back("D", elements);
  dump.records = io::simulate(pairs, rules, a.epoch);
  Output out(a.out);
  io::write_dump(out.stream(), dump);
}

// analyze -------------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<std::string> dumps;
  std::uint64_t base = 10;
  std::string grok;
  std::string caps;
  bool uniform = false;
  std::string report;
  bool table = false;
  double theta = 0.99;
  std::uint64_t min_records = 100;
  std::uint64_t cap = 100;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
  auto* cmd = app.add_subcommand("analyze", "check predictions against the rules");
  cmd->add_option("--dump", a.dumps, "prediction dump(s); repeat to concatenate")->required();
  cmd->add_option("--base", a.base)->capture_default_str();
  cmd->add_option("--grok", a.grok, "grokked prime powers allowed on top of the base primes");
  cmd->add_option("--caps", a.caps, "exponent caps of the class partition (--uniform)");
  cmd->add_flag("--uniform", a.uniform, "uniform-outcome checks per epoch");
  cmd->add_option("--report", a.report, "write the JSON report here");
  cmd->add_flag("--table", a.table, "print prediction tables");
  cmd->add_option("--theta", a.theta, "determinism threshold")->capture_default_str();
  cmd->add_option("--min-records", a.min_records, "records needed per gcd")->capture_default_str();
  cmd->add_option("--cap", a.cap, "largest gcd checked")->capture_default_str();
}

void run_analyze(const AnalyzeArgs& a) {
  std::vector<an::PredictionRecord> records;
  for (const auto& path : a.dumps) {
    auto in = open_in(path);
    try {
      auto dump = io::read_dump(in);
      records.insert(records.end(), dump.records.begin(), dump.records.end());
    } catch (const io::IngestError& e) {
      throw FileIngestError(path, e);
    }
  }
  if (records.empty()) throw UsageError("no records in the dump");

  an::AnalysisOptions opts;
  opts.determinism_threshold = a.theta;
  opts.min_records = a.min_records;
  opts.cap = a.cap;
  if (!(a.theta > 0.5 && a.theta <= 1.0)) throw UsageError("--theta must lie in (0.5, 1]");

  const auto grok_powers = parse_list(a.grok, "--grok");
  std::set<std::uint64_t> grok_primes;
  for (auto q : grok_powers) {
    nt::PrimePower pp{};
    if (!nt::as_prime_power(q, pp)) throw UsageError(fmt::format("--grok: {} is not a prime power", q));
    grok_primes.insert(pp.prime);
  }
  const std::vector<std::uint64_t> primes(grok_primes.begin(), grok_primes.end());

  const auto by_epoch = an::tally_by_epoch(records);
  std::map<std::int64_t, std::vector<an::PredictionRecord>> epoch_records;
  for (const auto& r : records) epoch_records[r.epoch].push_back(r);

  json report = json::object();
  json epochs = json::array();
  an::EpochSeries series;
  for (const auto& [epoch, t] : by_epoch) {
    const auto rules = an::analyze_rules(t, a.base, primes, opts);
    const auto natural = an::metrics(epoch_records[epoch], an::Weighting::natural, a.cap);
    const auto stratified = an::metrics(epoch_records[epoch], an::Weighting::stratified, a.cap);
    series.emplace_back(epoch, natural.per_k_accuracy);
    epochs.push_back({{"epoch", epoch},
                      {"rules", rules},
                      {"metrics", {{"natural", natural}, {"stratified", stratified}}}});

    std::string verdicts;
    for (const auto& [rule, v] : rules.verdicts) {
      verdicts += fmt::format(" {}={}", rule, an::to_string(v));
    }
    std::cout << fmt::format(
        "epoch {}: {} records, accuracy {:.2f}% (natural) {:.2f}% (stratified), "
        "{} correct gcds,{}\n",
        epoch, natural.records, natural.accuracy * 100, stratified.accuracy * 100,
        natural.correct_gcd_count, verdicts);
    for (const auto& v : rules.violations) {
      std::cout << fmt::format("  {} k={}: {}\n", v.rule, v.k, v.detail);
    }
    if (rules.malformed) std::cout << fmt::format("  malformed outputs: {}\n", rules.malformed);
    if (a.table) std::cout << an::render_prediction_table(t, a.cap);
  }
  report["epochs"] = epochs;

  json learned = json::object();
  for (std::uint64_t k = 1; k <= a.cap; ++k) {
    if (auto e = an::epoch_learned(series, k)) learned[std::to_string(k)] = *e;
  }
  report["epoch_learned"] = learned;

  if (a.uniform) {
    const auto classes =
        orc::build_rule_set(a.base, parse_caps(a.caps), orc::GrokSpec(grok_powers), a.cap);
    const an::ClassPartition partition(classes.elements(), a.cap);
    const auto uniform = an::verify_uniform_rules(by_epoch, partition, opts);
    for (const auto& e : uniform.epochs) {
      std::string verdicts;
      for (const auto& [rule, v] : e.verdicts) {
        verdicts += fmt::format(" {}={}", rule, an::to_string(v));
      }
      std::cout << fmt::format("epoch {} uniform-outcome rules: {}{}\n", e.epoch, e.status,
                               verdicts);
    }
    for (const auto& [epoch, churn] : uniform.churn) {
      std::cout << fmt::format("epoch {} churn {:.2f}\n", epoch, churn);
    }
    report["uniform"] = uniform;
  }

  if (!a.report.empty()) {
    Output out(a.report);
    out.stream() << report.dump(2) << '\n';
  }
}

// theory --------------------------------------------------------------------

struct TheoryArgs {
  std::vector<std::uint64_t> bases;
  bool json_out = false;
};

void add_theory(CLI::App& app, TheoryArgs& a) {
  auto* cmd = app.add_subcommand("theory", "closed-form accuracy of a base");
  cmd->add_option("--base", a.bases, "one or more bases")->required();
  cmd->add_flag("--json", a.json_out, "JSON lines instead of a table");
}

json theory_row(std::uint64_t base) {
  if (base < 2) throw UsageError("--base must be >= 2");
  json row = {{"base", base},
              {"theoretical", orc::theoretical_accuracy_base(base) * 100},
              {"smooth", orc::smooth_accuracy_base(base) * 100}};
  if (const auto* p = orc::base_preset(base)) {
    const auto rules = orc::build_rule_set(*p);
    row["exact_d"] = orc::exact_accuracy(rules) * 100;
    row["correct_gcd"] = rules.size();
  } else {
    row["exact_d"] = nullptr;
    row["correct_gcd"] = nullptr;
  }
  return row;
}

void run_theory(const TheoryArgs& a) {
  if (!a.json_out) {
    std::cout << fmt::format("{:>6} {:>12} {:>8} {:>8} {:>8}\n", "base", "theoretical", "smooth",
                             "exact-D", "|D|");
  }
  for (auto base : a.bases) {
    const auto row = theory_row(base);
    if (a.json_out) {
      std::cout << row.dump() << '\n';
      continue;
    }
    const auto exact = row["exact_d"].is_null()
                           ? std::string("-")
                           : fmt::format("{:.1f}", row["exact_d"].get<double>());
    const auto count = row["correct_gcd"].is_null()
                           ? std::string("-")
                           : std::to_string(row["correct_gcd"].get<std::size_t>());
    std::cout << fmt::format("{:>6} {:>12.1f} {:>8.1f} {:>8} {:>8}\n", base,
                             row["theoretical"].get<double>(), row["smooth"].get<double>(), exact,
                             count);
  }
}

int fail(const std::string& kind, const std::string& message, int code, json extra = {}) {
  json j = {{"error", kind}, {"message", message}};
  if (extra.is_object()) j.update(extra);
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcdlab: gcd learning experiments without the training"};
  app.require_subcommand(1);

  GenDataArgs gen_data;
  GenTestsetsArgs gen_testsets;
  OracleArgs oracle_args;
  AnalyzeArgs analyze;
  TheoryArgs theory;
  add_gen_data(app, gen_data);
  add_gen_testsets(app, gen_testsets);
  add_oracle_sim(app, oracle_args);
  add_analyze(app, analyze);
  add_theory(app, theory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (auto* cmd = app.get_subcommand("gen-data"); cmd->parsed()) run_gen_data(*cmd, gen_data);
    if (app.get_subcommand("gen-testsets")->parsed()) run_gen_testsets(gen_testsets);
    if (app.get_subcommand("oracle-sim")->parsed()) run_oracle_sim(oracle_args);
    if (app.get_subcommand("analyze")->parsed()) run_analyze(analyze);
    if (app.get_subcommand("theory")->parsed()) run_theory(theory);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const FileIngestError& e) {
    return fail("ingest", e.what(), 3, {{"file", e.path}, {"line", e.line}});
  } catch (const io::IngestError& e) {
    return fail("ingest", e.what(), 3, {{"line", e.line()}});
  } catch (const IoError& e) {
    return fail("io", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
