#include "gcdlab/dataio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <json.hpp>
#include <string>

#include "gcdlab/number_theory.hpp"
#include "gcdlab/numeral.hpp"

namespace gcdlab::dataio {

using analyzer::PredictionRecord;
using json = nlohmann::json;

namespace {

bool is_rational_task(std::string_view task) {
  try {
    sampling::parse_rational_task(task);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::uint64_t header_u64(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("dataset header lacks '" + key + "'");
  std::uint64_t v = 0;
  const auto& s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("dataset header '" + key + "' is not an unsigned integer");
  }
  return v;
}

// "# key=value" -> (key, value); false for other comment lines.
bool split_header_line(std::string_view line, std::string& key, std::string& value) {
  if (line.rfind("# ", 0) != 0) return false;
  line.remove_prefix(2);
  const auto eq = line.find('=');
  if (eq == std::string_view::npos || eq == 0) return false;
  key = std::string(line.substr(0, eq));
  value = std::string(line.substr(eq + 1));
  return true;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

IngestError::IngestError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

void DatasetSpec::validate() const {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (task != "gcd" && !is_rational_task(task)) {
    throw std::invalid_argument("unknown task '" + task + "'");
  }
  if (task == "int_div" && sampler.M < 2) throw std::invalid_argument("int_div needs M >= 2");
  sampler.validate();
}

std::vector<std::pair<std::string, std::string>> DatasetSpec::header() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"format", std::string(kDatasetFormat)},
      {"task", task},
      {"base", std::to_string(base)},
      {"n", std::to_string(n)},
  };
  for (auto& kv : sampling::config_to_header(sampler)) out.push_back(std::move(kv));
  return out;
}

DatasetSpec DatasetSpec::from_header(const std::map<std::string, std::string>& kv) {
  auto fmt_it = kv.find("format");
  if (fmt_it == kv.end() || fmt_it->second != kDatasetFormat) {
    throw std::invalid_argument("not a dataset file (expected format=" +
                                std::string(kDatasetFormat) + ")");
  }
  DatasetSpec spec;
  if (auto it = kv.find("task"); it != kv.end()) spec.task = it->second;
  spec.base = header_u64(kv, "base");
  spec.n = header_u64(kv, "n");
  spec.sampler = sampling::config_from_header(kv);
  spec.validate();
  return spec;
}

void write_dataset(std::ostream& os, const DatasetSpec& spec) {
  spec.validate();
  for (const auto& [k, v] : spec.header()) os << "# " << k << '=' << v << '\n';

  const auto emit = [&](std::span<const std::uint64_t> in, std::span<const std::uint64_t> out) {
    os << numeral::render(numeral::encode_ints(in, spec.base)) << '\t'
       << numeral::render(numeral::encode_ints(out, spec.base)) << '\n';
  };

  if (spec.task == "gcd") {
    sampling::TrainingStream stream(spec.sampler);
    for (std::uint64_t i = 0; i < spec.n; ++i) {
      const auto e = stream.next();
      const std::uint64_t in[] = {e.a, e.b};
      const std::uint64_t out[] = {e.g};
      emit(in, out);
    }
    return;
  }
  const auto task = sampling::parse_rational_task(spec.task);
  Rng rng(spec.sampler.seed, spec.sampler.shard_id);
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    const auto e = sampling::gen_rational_task(task, spec.sampler.M, rng);
    emit(e.input, e.target);
  }
}

namespace {

// Consumes header lines and hands back the first body line, if any.
std::map<std::string, std::string> read_header(std::istream& is, std::size_t& lineno,
                                               std::string& first_body, bool& has_body) {
  std::map<std::string, std::string> kv;
  std::string line;
  has_body = false;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    if (line.front() != '#') {
      first_body = std::move(line);
      has_body = true;
      break;
    }
    std::string k, v;
    if (split_header_line(line, k, v)) kv[k] = v;
  }
  return kv;
}

DatasetSpec spec_or_ingest_error(const std::map<std::string, std::string>& kv) {
  try {
    return DatasetSpec::from_header(kv);
  } catch (const std::invalid_argument& e) {
    throw IngestError(1, e.what());
  }
}

}  // namespace

DatasetSpec read_dataset_spec(std::istream& is) {
  std::size_t lineno = 0;
  std::string first;
  bool has_body = false;
  return spec_or_ingest_error(read_header(is, lineno, first, has_body));
}

Dataset read_dataset(std::istream& is) {
  std::size_t lineno = 0;
  std::string line;
  bool has_body = false;
  Dataset ds;
  ds.spec = spec_or_ingest_error(read_header(is, lineno, line, has_body));
  const bool gcd_task = ds.spec.task == "gcd";

  while (has_body) {
    if (!line.empty()) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw IngestError(lineno, "expected input TAB output");
      DatasetExample ex;
      try {
        ex.input = numeral::decode_ints(numeral::parse(line.substr(0, tab), ds.spec.base));
        ex.output = numeral::decode_ints(numeral::parse(line.substr(tab + 1), ds.spec.base));
      } catch (const std::exception& e) {
        throw IngestError(lineno, e.what());
      }
      if (gcd_task) {
        if (ex.input.size() != 2 || ex.output.size() != 1) {
          throw IngestError(lineno, "gcd rows hold two inputs and one output");
        }
        if (number_theory::gcd(ex.input[0], ex.input[1]) != ex.output[0]) {
          throw IngestError(lineno, "output is not the gcd of the inputs");
        }
      }
      ds.examples.push_back(std::move(ex));
    }
    if (!std::getline(is, line)) break;
    ++lineno;
    line = strip_cr(std::move(line));
  }
  if (ds.examples.size() != ds.spec.n) {
    throw IngestError(lineno, fmt::format("header announces {} examples, body has {}", ds.spec.n,
                                          ds.examples.size()));
  }
  return ds;
}

std::vector<sampling::ExamplePair> gcd_pairs(const Dataset& ds) {
  if (ds.spec.task != "gcd") throw std::invalid_argument("not a gcd dataset");
  std::vector<sampling::ExamplePair> out;
  out.reserve(ds.examples.size());
  for (const auto& e : ds.examples) out.push_back({e.input[0], e.input[1], e.output[0]});
  return out;
}

std::vector<PredictionRecord> simulate(std::span<const sampling::ExamplePair> pairs,
                                       const oracle::RuleSet& rules, std::int64_t epoch) {
  std::vector<PredictionRecord> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back({p.a, p.b, p.g, oracle::predict_f(p.g, rules), epoch});
  }
  return out;
}

void write_dump_record(std::ostream& os, const PredictionRecord& r) {
  const auto pred = r.pred ? std::to_string(*r.pred) : std::string("null");
  os << fmt::format(R"({{"a":{},"b":{},"g":{},"pred":{},"epoch":{}}})", r.a, r.b, r.g, pred,
                    r.epoch)
     << '\n';
}

void write_dump(std::ostream& os, const PredictionDump& dump) {
  for (const auto& [k, v] : dump.header) os << "# " << k << '=' << v << '\n';
  for (const auto& r : dump.records) write_dump_record(os, r);
}

namespace {

std::uint64_t positive_field(const json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end()) throw IngestError(lineno, fmt::format("missing field '{}'", key));
  if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0) {
    throw IngestError(lineno, fmt::format("field '{}' must be a positive integer", key));
  }
  return it->get<std::uint64_t>();
}

}  // namespace

PredictionDump read_dump(std::istream& is) {
  PredictionDump dump;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty() || std::all_of(line.begin(), line.end(), [](char c) { return c == ' '; })) {
      continue;
    }
    if (line.front() == '#') {
      std::string k, v;
      if (split_header_line(line, k, v)) dump.header.emplace_back(k, v);
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IngestError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw IngestError(lineno, "record is not a JSON object");

    PredictionRecord r;
    r.a = positive_field(j, "a", lineno);
    r.b = positive_field(j, "b", lineno);
    r.g = positive_field(j, "g", lineno);
    auto pred = j.find("pred");
    if (pred == j.end()) throw IngestError(lineno, "missing field 'pred'");
    if (pred->is_number_unsigned()) {
      r.pred = pred->get<std::uint64_t>();
    } else if (!pred->is_null()) {
      throw IngestError(lineno, "field 'pred' must be a non-negative integer or null");
    }
    auto epoch = j.find("epoch");
    if (epoch == j.end()) throw IngestError(lineno, "missing field 'epoch'");
    if (!epoch->is_number_integer()) throw IngestError(lineno, "field 'epoch' must be an integer");
    r.epoch = epoch->get<std::int64_t>();

    if (number_theory::gcd(r.a, r.b) != r.g) {
      throw IngestError(lineno, fmt::format("g = {} but gcd({}, {}) = {}", r.g, r.a, r.b,
                                            number_theory::gcd(r.a, r.b)));
    }
    dump.records.push_back(r);
  }
  return dump;
}

}  // namespace gcdlab::dataio
