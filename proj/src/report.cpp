#include "symind/report.hpp"

#include <cstdint>
#include <cstdio>

#ifndef SYMIND_VERSION
#define SYMIND_VERSION "0.0.0"
#endif

namespace symind {

const char* verdict_kind_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Integer: return "integer";
    case Verdict::Kind::Infinite: return "infinite";
    case Verdict::Kind::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string toolkit_version() { return SYMIND_VERSION; }

std::string config_hash(const nlohmann::ordered_json& config) {
  std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json IndexReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["index"] = index;
  nlohmann::ordered_json v;
  v["kind"] = verdict_kind_name(verdict.kind);
  if (verdict.is_integer())
    v["value"] = verdict.value;
  else
    v["value"] = nullptr;
  if (!verdict.reason.empty() || verdict.kind == Verdict::Kind::Undetermined) v["reason"] = verdict.reason;
  j["verdict"] = v;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : crossings) {
    cs.push_back({{"t", c.t},
                  {"multiplicity", c.multiplicity},
                  {"inertia", {c.n_plus, c.n_zero, c.n_minus}},
                  {"contribution", c.contribution}});
  }
  j["crossings"] = cs;
  nlohmann::ordered_json as = nlohmann::ordered_json::object();
  for (const auto& [k, val] : assumptions) as[k] = val;
  j["assumptions"] = as;
  j["diagnostics"] = diagnostics;
  j["provenance"] = {{"version", version.empty() ? toolkit_version() : version}, {"config_hash", config_hash}};
  return j;
}

}  // namespace symind
