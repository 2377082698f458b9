#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

namespace symind {

struct Verdict {
  enum class Kind { Integer, Infinite, Undetermined };
  Kind kind = Kind::Undetermined;
  long value = 0;
  std::string reason;

  static Verdict integer(long v) { return {Kind::Integer, v, ""}; }
  static Verdict infinite(std::string why = "") { return {Kind::Infinite, 0, std::move(why)}; }
  static Verdict undetermined(std::string why) { return {Kind::Undetermined, 0, std::move(why)}; }
  bool is_integer() const { return kind == Kind::Integer; }
  bool is_infinite() const { return kind == Kind::Infinite; }
};

struct CrossingEntry {
  double t = 0.0;
  int multiplicity = 0;
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;
  int contribution = 0;
};

struct IndexReport {
  std::string command;
  std::string index;  // which index was computed
  Verdict verdict;
  std::vector<CrossingEntry> crossings;
  std::map<std::string, bool> assumptions;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  std::string version;
  std::string config_hash;

  nlohmann::ordered_json to_json() const;
};

const char* verdict_kind_name(Verdict::Kind k);
std::string toolkit_version();
// FNV-1a over the canonical dump of a config object, hex encoded.
std::string config_hash(const nlohmann::ordered_json& config);

}  // namespace symind
