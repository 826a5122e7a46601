#pragma once

// Line-oriented file formats.
//
// Dataset files carry a "# key=value" header that fully determines the body,
// followed by one "input TAB output" line of rendered tokens per example.
// Prediction dumps are JSON Lines records {"a","b","g","pred","epoch"}.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcdlab/analyzer.hpp"
#include "gcdlab/oracle.hpp"
#include "gcdlab/sampling.hpp"

namespace gcdlab::dataio {

inline constexpr std::string_view kDatasetFormat = "gcdlab-dataset/1";

struct DatasetSpec {
  /// "gcd" or one of the rational tasks (compare, int_div, simplify, add, multiply).
  std::string task = "gcd";
  std::uint64_t base = 10;
  std::uint64_t n = 0;
  sampling::SamplerConfig sampler;

  void validate() const;
  std::vector<std::pair<std::string, std::string>> header() const;
  static DatasetSpec from_header(const std::map<std::string, std::string>& kv);
};

struct DatasetExample {
  std::vector<std::uint64_t> input;
  std::vector<std::uint64_t> output;
  friend bool operator==(const DatasetExample&, const DatasetExample&) = default;
};

struct Dataset {
  DatasetSpec spec;
  std::vector<DatasetExample> examples;
};

/// Thrown for malformed dataset or dump input; `line` is 1-based.
class IngestError : public std::runtime_error {
 public:
  IngestError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Generates spec.n examples and writes header plus body.
void write_dataset(std::ostream& os, const DatasetSpec& spec);

/// Parses and validates a dataset: every body line must decode under the
/// header base, and gcd rows must satisfy output = gcd(input).
Dataset read_dataset(std::istream& is);

/// Reads only the header of a dataset file.
DatasetSpec read_dataset_spec(std::istream& is);

/// The (a, b, gcd) triples of a gcd dataset.
std::vector<sampling::ExamplePair> gcd_pairs(const Dataset& ds);

/// Rule-based predictions for every pair of a gcd dataset.
std::vector<analyzer::PredictionRecord> simulate(std::span<const sampling::ExamplePair> pairs,
                                                 const oracle::RuleSet& rules,
                                                 std::int64_t epoch = 0);

struct PredictionDump {
  /// "# key=value" lines, e.g. trainer configuration.
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<analyzer::PredictionRecord> records;
};

void write_dump_record(std::ostream& os, const analyzer::PredictionRecord& r);
void write_dump(std::ostream& os, const PredictionDump& dump);

/// Blank lines are skipped. Throws IngestError for malformed records and
/// for records whose g is not gcd(a, b).
PredictionDump read_dump(std::istream& is);

}  // namespace gcdlab::dataio
