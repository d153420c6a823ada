// Verdict reports: one JSON payload per command, rendered either as canonical
// JSON (schema 1, sorted keys) or as the human text derived from that same
// payload. Non-conclusive verdicts always carry a caveat line.
#pragma once

#include <string>

#include "json.hpp"

#include "fmw/structure.hpp"

namespace fmw {

// Verdict vocabulary shared by the CLI and the reproduction registry.
inline constexpr const char* kVerdictPass = "pass";
inline constexpr const char* kVerdictFail = "fail";
inline constexpr const char* kVerdictFriendly = "friendly-up-to-bounds";
inline constexpr const char* kVerdictNotFriendly = "not-friendly-within-bounds";
inline constexpr const char* kVerdictEntailed = "entailed-up-to-bound";
inline constexpr const char* kVerdictRefuted = "refuted";

struct Report {
  nlohmann::json body;  // always carries "schema": 1

  // Canonical serialization: sorted keys, no insignificant whitespace.
  std::string json_text() const;
  // Line-oriented rendering generated from `body`; nothing appears here that
  // is not in the JSON.
  std::string human_text() const;

  bool passed() const;  // verdict == "pass" (repro entries)
};

Report make_report(const std::string& command);

// Sets the verdict and, unless the verdict is conclusive, a caveat spelling
// out that witnesses beyond the bounds — larger finite ones or infinite ones —
// remain possible.
void set_verdict(Report& r, const std::string& verdict, bool conclusive);

nlohmann::json structure_to_json_value(const FiniteStructure& s);

}  // namespace fmw
