#pragma once

// Certificate envelope: an ordered, replayable record of every exact check a
// verification pipeline ran, serialized deterministically.

#include <json.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppcert/error.hpp"
#include "ppcert/exactnum.hpp"
#include "ppcert/numeric.hpp"

namespace ppcert::cert {

inline constexpr const char* kVersion = "1.0";

struct CheckEntry {
  std::string name;
  std::string kind;
  std::string lhs, rhs;
  std::string margin;  // exact witness value where applicable
  bool pass = false;
};

class CheckRecorder {
public:
  // Record a check whose witness is the sign of an exact field element.
  bool sign_check(const std::string& name, const std::string& kind,
                  const exactnum::AlgebraicNumber& value, int expected_sign,
                  const std::string& lhs = "", const std::string& rhs = "") {
    bool ok = value.sign() == expected_sign ||
              (expected_sign > 0 && value.sign() > 0);  // ">= 1" style checks pass at +1
    entries_.push_back({name, kind, lhs, rhs, value.to_string(), ok});
    return ok;
  }

  bool bool_check(const std::string& name, const std::string& kind, bool ok,
                  const std::string& lhs = "", const std::string& rhs = "",
                  const std::string& margin = "") {
    entries_.push_back({name, kind, lhs, rhs, margin, ok});
    return ok;
  }

  void append(const CheckEntry& e) { entries_.push_back(e); }

  bool all_pass() const {
    for (const auto& e : entries_)
      if (!e.pass) return false;
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
      if (!e.pass) out.push_back(e.name);
    return out;
  }

  std::size_t count_prefix(const std::string& prefix) const {
    std::size_t n = 0;
    for (const auto& e : entries_)
      if (e.name.rfind(prefix, 0) == 0) ++n;
    return n;
  }

  const std::vector<CheckEntry>& entries() const { return entries_; }

private:
  std::vector<CheckEntry> entries_;
};

struct Certificate {
  std::string scenario;
  std::string status;  // "verified" | "failed"
  Rat epsilon = Rat(0);
  std::map<std::string, int> powers;
  CheckRecorder checks;
  std::string conclusion;
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["scenario"] = scenario;
    j["status"] = status;
    j["epsilon"] = rat_to_string(epsilon);
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : powers) p[k] = v;
    j["powers"] = p;
    j["conclusion"] = conclusion;
    j["notes"] = notes;
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const auto& e : checks.entries()) {
      nlohmann::ordered_json c;
      c["name"] = e.name;
      c["kind"] = e.kind;
      c["lhs"] = e.lhs;
      c["rhs"] = e.rhs;
      c["margin"] = e.margin;
      c["status"] = e.pass ? "pass" : "fail";
      cs.push_back(c);
    }
    j["checks"] = cs;
    return j;
  }

  std::string to_json_string() const { return to_json().dump(2) + "\n"; }

  std::string to_text() const {
    std::string s;
    s += "certificate " + scenario + " (version " + kVersion + ")\n";
    s += "status: " + status + "\n";
    s += "epsilon: " + rat_to_string(epsilon) + "\n";
    s += "powers:";
    for (const auto& [k, v] : powers) s += " " + k + "=" + std::to_string(v);
    s += "\nconclusion: " + conclusion + "\n";
    for (const auto& n : notes) s += "note: " + n + "\n";
    s += "checks (" + std::to_string(checks.entries().size()) + "):\n";
    for (const auto& e : checks.entries()) {
      s += "  [" + std::string(e.pass ? "pass" : "FAIL") + "] " + e.name + " (" + e.kind + ")";
      if (!e.margin.empty()) s += " margin=" + e.margin;
      if (!e.lhs.empty()) s += " lhs=" + e.lhs;
      if (!e.rhs.empty()) s += " rhs=" + e.rhs;
      s += "\n";
    }
    return s;
  }
};

}  // namespace ppcert::cert
