// Copyright 2026 The factdag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "factdag/corpus.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "factdag/error.h"
#include "json.hpp"

namespace factdag {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void Malformed(int line, size_t offset, const std::string &what) {
  throw Error("parse-error", "line " + std::to_string(line) + ", byte " +
                                 std::to_string(offset) + ": " + what);
}

// Parses one line, mapping JSON errors to the file-wide byte offset.
json ParseLine(const std::string &text, int line, size_t line_offset) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    size_t within = e.byte > 0 ? e.byte - 1 : 0;
    Malformed(line, line_offset + within, e.what());
  }
}

Span ParseSpan(const json &value) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
      !value[1].is_number_integer()) {
    throw std::invalid_argument("span must be [begin, end]");
  }
  return {value[0].get<int>(), value[1].get<int>()};
}

Fact ParseFact(const json &value) {
  Fact fact;
  if (!value.is_object() || !value.contains("elements") ||
      !value["elements"].is_array()) {
    throw std::invalid_argument("fact needs an 'elements' array");
  }
  for (const json &item : value["elements"]) {
    if (!item.is_object() || !item.contains("role") || !item["role"].is_string()) {
      throw std::invalid_argument("element needs a string 'role'");
    }
    Element element;
    element.role = item["role"].get<std::string>();
    if (item.contains("spans")) {
      if (!item["spans"].is_array()) {
        throw std::invalid_argument("'spans' must be an array");
      }
      for (const json &span : item["spans"]) element.spans.push_back(ParseSpan(span));
    }
    if (item.contains("virtual") && !item["virtual"].is_null()) {
      if (!item["virtual"].is_string()) {
        throw std::invalid_argument("'virtual' must be a string or null");
      }
      element.virtual_predicate = item["virtual"].get<std::string>();
    }
    fact.elements.push_back(std::move(element));
  }
  if (value.contains("confidence") && !value["confidence"].is_null()) {
    if (!value["confidence"].is_number()) {
      throw std::invalid_argument("'confidence' must be a number");
    }
    fact.confidence = value["confidence"].get<double>();
  }
  return fact;
}

ordered_json FactJson(const Fact &fact) {
  ordered_json out = ordered_json::object();
  if (fact.confidence) out["confidence"] = *fact.confidence;
  ordered_json elements = ordered_json::array();
  for (const Element &element : fact.elements) {
    ordered_json spans = ordered_json::array();
    for (const Span &span : element.spans) spans.push_back({span.begin, span.end});
    ordered_json item = ordered_json::object();
    item["role"] = element.role;
    item["spans"] = std::move(spans);
    item["virtual"] = element.virtual_predicate
                          ? ordered_json(*element.virtual_predicate)
                          : ordered_json(nullptr);
    elements.push_back(std::move(item));
  }
  out["elements"] = std::move(elements);
  return out;
}

// Calls `fn(json, line_number)` for each non-blank line.
template <typename Fn>
void ForEachJsonLine(std::istream &in, Fn fn) {
  std::string line;
  int line_number = 0;
  size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_number;
    size_t start = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(ParseLine(line, line_number, start), line_number, start);
  }
}

void CheckRecordSpans(const CorpusRecord &record, const Schema *schema) {
  const int n = record.sentence.size();
  for (size_t f = 0; f < record.facts.size(); ++f) {
    for (const Element &element : record.facts[f].elements) {
      for (const Span &span : element.spans) {
        if (span.begin < 0 || span.end >= n || span.begin > span.end) {
          throw Error("invalid-record",
                      "record '" + record.sentence.id + "', fact " +
                          std::to_string(f) + ": invalid span [" +
                          std::to_string(span.begin) + "," +
                          std::to_string(span.end) + "]");
        }
      }
    }
    if (schema != nullptr) {
      auto violations = ValidateFact(record.facts[f], record.sentence, *schema);
      if (!violations.empty()) {
        throw Error("invalid-record",
                    "record '" + record.sentence.id + "', fact " +
                        std::to_string(f) + ": " + violations.front().code + " (" +
                        violations.front().detail + ")");
      }
    }
  }
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void FinishOutput(std::ofstream &out, const std::string &path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

template <typename T>
T Draw(std::mt19937_64 &rng, const std::map<T, double> &weights) {
  double total = 0;
  for (const auto &[value, weight] : weights) total += weight;
  double target = std::uniform_real_distribution<double>(0.0, total)(rng);
  for (const auto &[value, weight] : weights) {
    if (target < weight) return value;
    target -= weight;
  }
  return weights.rbegin()->first;
}

bool Chance(std::mt19937_64 &rng, double rate) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < rate;
}

int Uniform(std::mt19937_64 &rng, int low, int high) {
  return std::uniform_int_distribution<int>(low, high)(rng);
}

// Builds one sentence left to right. Facts are assembled from templates whose
// layouts keep every fact decodable by the full DAG codec.
class SentenceBuilder {
 public:
  SentenceBuilder(const GenConfig &config, const Schema &schema,
                  std::mt19937_64 &rng)
      : config_(config), schema_(schema), rng_(rng) {
    for (const std::string &role : schema.roles) {
      if (role != kSubject && role != kPredicate && role != kObject) {
        extra_roles_.push_back(role);
      }
    }
  }

  // Returns false when the sentence outgrew max_tokens.
  bool Build(bool overlap, bool nested, bool discontinuous, int fact_count) {
    tokens_.clear();
    facts_.clear();

    enum class Segment { kSolo, kOverlap, kNested };
    std::vector<Segment> segments;
    int used = 0;
    if (overlap) {
      segments.push_back(Segment::kOverlap);
      used += nested ? 3 : 2;
    } else if (nested) {
      segments.push_back(Segment::kNested);
      used += 2;
    }
    for (int f = used; f < std::max(fact_count, used + (segments.empty() ? 1 : 0));
         ++f) {
      segments.push_back(Segment::kSolo);
    }
    std::shuffle(segments.begin(), segments.end(), rng_);

    // The split element lives in one segment chosen up front.
    const int split_segment =
        discontinuous ? Uniform(rng_, 0, static_cast<int>(segments.size()) - 1) : -1;

    for (size_t s = 0; s < segments.size(); ++s) {
      Filler(Uniform(rng_, 0, 2));
      const bool split = split_segment == static_cast<int>(s);
      switch (segments[s]) {
        case Segment::kSolo:
          Solo(split);
          break;
        case Segment::kOverlap:
          Overlap(nested, split);
          break;
        case Segment::kNested:
          NestedPair(split);
          break;
      }
      if (static_cast<int>(tokens_.size()) > config_.max_tokens) return false;
    }
    Filler(Uniform(rng_, 0, 2));
    if (tokens_.empty()) Filler(1);
    return static_cast<int>(tokens_.size()) <= config_.max_tokens;
  }

  std::vector<std::string> &tokens() { return tokens_; }
  std::vector<Fact> &facts() { return facts_; }

 private:
  std::string Word() {
    return "w" + std::to_string(Uniform(rng_, 0, config_.vocab_size - 1));
  }

  void Filler(int count) {
    for (int k = 0; k < count; ++k) tokens_.push_back(Word());
  }

  int SpanLength(int longest = 3) {
    int length = Draw<int>(rng_, {{1, 0.5}, {2, 0.3}, {3, 0.2}});
    return std::min(length, longest);
  }

  void Gap() { Filler(Draw<int>(rng_, {{0, 0.5}, {1, 0.35}, {2, 0.15}})); }

  Span Content(int length) {
    Span span{static_cast<int>(tokens_.size()), 0};
    Filler(length);
    span.end = static_cast<int>(tokens_.size()) - 1;
    return span;
  }

  int NewFact() {
    facts_.emplace_back();
    return static_cast<int>(facts_.size()) - 1;
  }

  void Put(int fact, const std::string &role, Span span) {
    for (Element &element : facts_[fact].elements) {
      if (element.role == role && !element.is_virtual()) {
        element.spans.push_back(span);
        return;
      }
    }
    facts_[fact].elements.push_back({role, {span}, std::nullopt});
  }

  // One element of one or more facts; a split element gets two spans with
  // at least one filler word between them.
  Span Place(const std::vector<int> &owners, const std::string &role, bool split) {
    Gap();
    Span first = Content(SpanLength());
    for (int fact : owners) Put(fact, role, first);
    if (!split) return first;
    Filler(1 + Uniform(rng_, 0, 1));
    Span second = Content(SpanLength());
    for (int fact : owners) Put(fact, role, second);
    return second;
  }

  // Fact B packed into the object span X of fact A, B's first span starting
  // at X's first word and its last span ending at X's last word.
  void NestHost(int host, int inner) {
    Gap();
    const int start = static_cast<int>(tokens_.size());
    Span subject = Content(SpanLength(2));
    Span predicate = Content(SpanLength(2));
    Span object = Content(SpanLength(2));
    Put(inner, std::string(kSubject), subject);
    Put(inner, std::string(kPredicate), predicate);
    Put(inner, std::string(kObject), object);
    Put(host, std::string(kObject), {start, object.end});
  }

  int ExtraCount(int core) {
    int target = Draw<int>(rng_, config_.span_counts);
    return std::clamp(target - core, 0, static_cast<int>(extra_roles_.size()));
  }

  std::vector<std::string> PickExtras(int count) {
    std::vector<std::string> roles = extra_roles_;
    std::shuffle(roles.begin(), roles.end(), rng_);
    roles.resize(count);
    return roles;
  }

  void Extras(int fact) {
    for (const std::string &role : PickExtras(ExtraCount(3))) {
      Place({fact}, role, false);
    }
  }

  void Solo(bool split) {
    const int fact = NewFact();
    const bool is_virtual = !schema_.virtual_predicates.empty() &&
                            Chance(rng_, config_.virtual_rate);
    int spans = Draw<int>(rng_, config_.span_counts);
    int elements = std::max(2, spans - (split ? 1 : 0));
    std::vector<std::string> roles;
    if (is_virtual) {
      roles = {std::string(kObject)};
    } else {
      roles = {std::string(kPredicate)};
      if (elements >= 3) roles.push_back(std::string(kObject));
    }
    int extras = std::min<int>(elements - 1 - static_cast<int>(roles.size()),
                               static_cast<int>(extra_roles_.size()));
    for (const std::string &role : PickExtras(std::max(0, extras))) {
      roles.insert(roles.begin() + Uniform(rng_, 0, static_cast<int>(roles.size())),
                   role);
    }
    // Keep the predicate ahead of the object.
    auto predicate = std::find(roles.begin(), roles.end(), kPredicate);
    auto object = std::find(roles.begin(), roles.end(), kObject);
    if (predicate != roles.end() && object != roles.end() && object < predicate) {
      std::iter_swap(predicate, object);
    }
    roles.insert(roles.begin(), std::string(kSubject));
    int split_at = split ? Uniform(rng_, 0, static_cast<int>(roles.size()) - 1) : -1;
    for (size_t k = 0; k < roles.size(); ++k) {
      Place({fact}, roles[k], static_cast<int>(k) == split_at);
    }
    if (is_virtual) {
      int which = Uniform(rng_, 0, static_cast<int>(schema_.virtual_predicates.size()) - 1);
      facts_[fact].elements.push_back(
          {std::string(kPredicate), {}, schema_.virtual_predicates[which]});
    }
  }

  // Two facts sharing one or two elements, in one of three layouts; with
  // `nested` a third fact sits inside the last core object of the first fact.
  void Overlap(bool nested, bool split) {
    const int first = NewFact();
    const int second = NewFact();
    const int inner = nested ? NewFact() : -1;
    const std::string subject(kSubject), predicate(kPredicate), object(kObject);
    auto host_object = [&](int fact) {
      if (nested) {
        NestHost(fact, inner);
      } else {
        Place({fact}, object, false);
      }
    };
    switch (Uniform(rng_, 0, 2)) {
      case 0:  // S P1 O1 .. P2 O2: shared subject
        Place({first, second}, subject, false);
        Place({first}, predicate, split);
        host_object(first);
        Extras(first);
        Place({second}, predicate, false);
        Place({second}, object, false);
        Extras(second);
        break;
      case 1:  // S1 S2 P O: shared predicate and object
        Place({first}, subject, false);
        Place({second}, subject, split);
        Place({first, second}, predicate, false);
        if (nested) {
          NestHost(first, inner);
          Put(second, object, facts_[first].elements.back().spans.front());
        } else {
          Place({first, second}, object, false);
        }
        Extras(first);
        Extras(second);
        break;
      default:  // S1 S2 P O1 .. O2: shared predicate
        Place({first}, subject, false);
        Place({second}, subject, false);
        Place({first, second}, predicate, false);
        host_object(first);
        Extras(first);
        Place({second}, object, split);
        Extras(second);
        break;
    }
  }

  void NestedPair(bool split) {
    const int host = NewFact();
    const int inner = NewFact();
    Place({host}, std::string(kSubject), false);
    Place({host}, std::string(kPredicate), split);
    NestHost(host, inner);
    Extras(host);
  }

  const GenConfig &config_;
  const Schema &schema_;
  std::mt19937_64 &rng_;
  std::vector<std::string> extra_roles_;
  std::vector<std::string> tokens_;
  std::vector<Fact> facts_;
};

void CheckConfig(const GenConfig &config, const Schema &schema) {
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (config.sentences < 0 || config.vocab_size < 1 || config.max_tokens < 1 ||
      !rate_ok(config.overlap_rate) || !rate_ok(config.nesting_rate) ||
      !rate_ok(config.discontinuity_rate) || !rate_ok(config.virtual_rate)) {
    throw Error("invalid-config", "rates must lie in [0,1] and sizes be positive");
  }
  if (config.span_counts.empty() || config.fact_counts.empty()) {
    throw Error("invalid-config", "span and fact count distributions are required");
  }
  for (const auto &[count, weight] : config.span_counts) {
    if (count < 1 || weight < 0) throw Error("invalid-config", "bad span count weight");
  }
  for (const auto &[range, weight] : config.fact_counts) {
    if (range.first < 0 || range.second < range.first || weight < 0) {
      throw Error("invalid-config", "bad fact count range");
    }
  }
  for (const auto &[name, weight] : config.domains) {
    if (weight < 0) throw Error("invalid-config", "bad domain weight");
  }
  if (!schema.HasRole(kSubject) || !schema.HasRole(kPredicate) ||
      !schema.HasRole(kObject)) {
    throw Error("invalid-config",
                "generator needs subject, predicate and object roles");
  }
}

}  // namespace

std::vector<CorpusRecord> ParseCorpus(std::istream &in, const Schema *schema) {
  std::vector<CorpusRecord> records;
  std::set<std::string> ids;
  ForEachJsonLine(in, [&](const json &value, int line, size_t offset) {
    CorpusRecord record;
    try {
      if (!value.is_object()) throw std::invalid_argument("record must be an object");
      if (!value.contains("id") || !value["id"].is_string()) {
        throw std::invalid_argument("record needs a string 'id'");
      }
      record.sentence.id = value["id"].get<std::string>();
      if (value.contains("domain") && !value["domain"].is_null()) {
        if (!value["domain"].is_string()) {
          throw std::invalid_argument("'domain' must be a string or null");
        }
        record.domain = value["domain"].get<std::string>();
      }
      if (!value.contains("tokens") || !value["tokens"].is_array()) {
        throw std::invalid_argument("record needs a 'tokens' array");
      }
      for (const json &token : value["tokens"]) {
        if (!token.is_string() || token.get<std::string>().empty()) {
          throw std::invalid_argument("tokens must be non-empty strings");
        }
        record.sentence.tokens.push_back(token.get<std::string>());
      }
      if (record.sentence.tokens.empty()) {
        throw std::invalid_argument("sentence has no tokens");
      }
      if (value.contains("facts")) {
        if (!value["facts"].is_array()) {
          throw std::invalid_argument("'facts' must be an array");
        }
        for (const json &fact : value["facts"]) {
          record.facts.push_back(ParseFact(fact));
        }
      }
    } catch (const std::invalid_argument &e) {
      Malformed(line, offset, e.what());
    } catch (const json::exception &e) {
      Malformed(line, offset, e.what());
    }
    if (!ids.insert(record.sentence.id).second) {
      throw Error("invalid-record", "duplicate record id '" + record.sentence.id + "'");
    }
    CheckRecordSpans(record, schema);
    records.push_back(std::move(record));
  });
  return records;
}

void WriteCorpus(std::ostream &out, const std::vector<CorpusRecord> &records) {
  for (const CorpusRecord &record : records) {
    ordered_json line = ordered_json::object();
    line["id"] = record.sentence.id;
    line["domain"] = record.domain ? ordered_json(*record.domain)
                                   : ordered_json(nullptr);
    line["tokens"] = record.sentence.tokens;
    ordered_json facts = ordered_json::array();
    for (const Fact &fact : record.facts) facts.push_back(FactJson(fact));
    line["facts"] = std::move(facts);
    out << line.dump() << '\n';
  }
}

std::vector<CorpusRecord> ReadCorpusFile(const std::string &path,
                                         const Schema *schema) {
  std::ifstream in = OpenInput(path);
  return ParseCorpus(in, schema);
}

void WriteCorpusFile(const std::string &path,
                     const std::vector<CorpusRecord> &records) {
  std::ofstream out = OpenOutput(path);
  WriteCorpus(out, records);
  FinishOutput(out, path);
}

std::vector<PredictionRecord> ParsePredictions(std::istream &in) {
  std::vector<PredictionRecord> records;
  ForEachJsonLine(in, [&](const json &value, int line, size_t offset) {
    PredictionRecord record;
    try {
      if (!value.is_object() || !value.contains("id") || !value["id"].is_string()) {
        throw std::invalid_argument("prediction needs a string 'id'");
      }
      record.id = value["id"].get<std::string>();
      if (value.contains("facts")) {
        if (!value["facts"].is_array()) {
          throw std::invalid_argument("'facts' must be an array");
        }
        for (const json &fact : value["facts"]) {
          record.facts.push_back(ParseFact(fact));
        }
      }
    } catch (const std::invalid_argument &e) {
      Malformed(line, offset, e.what());
    } catch (const json::exception &e) {
      Malformed(line, offset, e.what());
    }
    records.push_back(std::move(record));
  });
  return records;
}

void WritePredictions(std::ostream &out,
                      const std::vector<PredictionRecord> &records) {
  for (const PredictionRecord &record : records) {
    ordered_json line = ordered_json::object();
    line["id"] = record.id;
    ordered_json facts = ordered_json::array();
    for (const Fact &fact : record.facts) facts.push_back(FactJson(fact));
    line["facts"] = std::move(facts);
    out << line.dump() << '\n';
  }
}

std::vector<PredictionRecord> ReadPredictionsFile(const std::string &path) {
  std::ifstream in = OpenInput(path);
  return ParsePredictions(in);
}

void WritePredictionsFile(const std::string &path,
                          const std::vector<PredictionRecord> &records) {
  std::ofstream out = OpenOutput(path);
  WritePredictions(out, records);
  FinishOutput(out, path);
}

Schema ParseSchema(std::istream &in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  Schema schema;
  try {
    json value = json::parse(buffer.str());
    schema.roles = value.at("roles").get<std::vector<std::string>>();
    if (value.contains("virtual_predicates")) {
      schema.virtual_predicates =
          value["virtual_predicates"].get<std::vector<std::string>>();
    }
  } catch (const json::exception &e) {
    throw Error("parse-error", std::string("schema: ") + e.what());
  }
  schema.Check();
  return schema;
}

Schema ReadSchemaFile(const std::string &path) {
  std::ifstream in = OpenInput(path);
  return ParseSchema(in);
}

GenConfig GenConfig::SaokeLike(int sentences, uint64_t seed) {
  GenConfig config;
  config.sentences = sentences;
  config.seed = seed;
  config.overlap_rate = 0.833;
  config.discontinuity_rate = 0.831;
  config.nesting_rate = 0.629;
  config.virtual_rate = 0.1;
  config.span_counts = {{2, 0.10}, {3, 0.30}, {4, 0.30}, {5, 0.18}, {6, 0.12}};
  config.fact_counts = {{{1, 3}, 0.429},
                        {{4, 6}, 0.324},
                        {{7, 9}, 0.123},
                        {{10, 12}, 0.063},
                        {{13, 15}, 0.061}};
  config.domains = {{"insurance", 0.119},  {"education", 0.166},
                    {"finance", 0.100},    {"government", 0.173},
                    {"medicine", 0.259},   {"news", 0.183}};
  return config;
}

std::vector<CorpusRecord> GenerateSynthetic(const GenConfig &config,
                                            const Schema &schema) {
  schema.Check();
  CheckConfig(config, schema);
  std::mt19937_64 rng(config.seed);
  std::map<std::pair<int, int>, double> fact_ranges(config.fact_counts.begin(),
                                                    config.fact_counts.end());
  std::map<std::string, double> domains(config.domains.begin(), config.domains.end());
  constexpr int kAttempts = 100;

  std::vector<CorpusRecord> records;
  records.reserve(config.sentences);
  SentenceBuilder builder(config, schema, rng);
  for (int s = 0; s < config.sentences; ++s) {
    const bool overlap = Chance(rng, config.overlap_rate);
    const bool nested = Chance(rng, config.nesting_rate);
    const bool discontinuous = Chance(rng, config.discontinuity_rate);
    const ComplicationFlags wanted{overlap, discontinuous, nested};
    std::optional<std::string> domain;
    if (!domains.empty()) domain = Draw<std::string>(rng, domains);

    bool built = false;
    for (int attempt = 0; attempt < kAttempts && !built; ++attempt) {
      auto range = Draw<std::pair<int, int>>(rng, fact_ranges);
      int fact_count = Uniform(rng, range.first, range.second);
      if (!builder.Build(overlap, nested, discontinuous, fact_count)) continue;
      char id[32];
      std::snprintf(id, sizeof(id), "syn-%06d", s);
      CorpusRecord record{{id, builder.tokens()}, domain, builder.facts()};
      if (ClassifySentence(record) != wanted) continue;
      bool valid = true;
      for (const Fact &fact : record.facts) {
        valid = valid && ValidateFact(fact, record.sentence, schema).empty();
      }
      if (!valid) continue;
      records.push_back(std::move(record));
      built = true;
    }
    if (!built) {
      throw Error("infeasible-config",
                  "could not build sentence " + std::to_string(s) + " within " +
                      std::to_string(config.max_tokens) + " tokens");
    }
  }
  return records;
}

int FactCountBin(int facts) {
  for (size_t b = 0; b < kFactCountBins.size(); ++b) {
    auto [low, high] = kFactCountBins[b];
    if (facts >= low && (high < 0 || facts <= high)) return static_cast<int>(b);
  }
  return 0;
}

double CorpusStats::Percent(int count) const {
  return sentences > 0 ? 100.0 * count / sentences : 0.0;
}

CorpusStats ComputeCorpusStats(const std::vector<CorpusRecord> &records) {
  CorpusStats stats;
  for (const CorpusRecord &record : records) {
    ++stats.sentences;
    stats.facts += static_cast<int>(record.facts.size());
    if (record.domain) ++stats.domains[*record.domain];
    ComplicationFlags flags = ClassifySentence(record);
    stats.overlapping += flags.overlapping;
    stats.discontinuous += flags.discontinuous;
    stats.nested += flags.nested;
    stats.complicated += flags.complicated();
    ++stats.fact_count_bins[FactCountBin(static_cast<int>(record.facts.size()))];
  }
  return stats;
}

void WriteCorpusStats(std::ostream &out, const CorpusStats &stats) {
  auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  out << "sentences " << stats.sentences << '\n';
  out << "facts " << stats.facts << '\n';
  auto row = [&](const char *name, int count) {
    out << name << ' ' << count << ' ' << stats.Percent(count) << '\n';
  };
  row("overlapping", stats.overlapping);
  row("discontinuous", stats.discontinuous);
  row("nested", stats.nested);
  row("complicated", stats.complicated);
  for (size_t b = 0; b < kFactCountBins.size(); ++b) {
    auto [low, high] = kFactCountBins[b];
    std::string name = "facts[" + std::to_string(low) + "," +
                       (high < 0 ? std::string("inf") : std::to_string(high)) + "]";
    row(name.c_str(), stats.fact_count_bins[b]);
  }
  for (const auto &[domain, count] : stats.domains) {
    row(("domain " + domain).c_str(), count);
  }
  out.flags(flags);
}

}  // namespace factdag
