#include "fmw/report.hpp"

#include <sstream>

namespace fmw {

Report make_report(const std::string& command) {
  Report r;
  r.body["schema"] = 1;
  r.body["command"] = command;
  return r;
}

void set_verdict(Report& r, const std::string& verdict, bool conclusive) {
  r.body["verdict"] = verdict;
  r.body["conclusive"] = conclusive;
  if (!conclusive) {
    r.body["caveat"] =
        "not conclusive: only structures within the stated bounds were "
        "examined; witnesses may exist as larger finite or infinite structures";
  }
}

std::string Report::json_text() const { return body.dump(); }

bool Report::passed() const {
  return body.contains("verdict") && body["verdict"] == "pass";
}

namespace {

void render_value(std::ostream& os, const nlohmann::json& v) {
  if (v.is_string()) {
    os << v.get<std::string>();
  } else {
    os << v.dump();
  }
}

}  // namespace

std::string Report::human_text() const {
  std::ostringstream os;
  // Verdict first, caveat right under it, everything else alphabetically.
  if (body.contains("command")) os << "$ " << body["command"].get<std::string>() << "\n";
  if (body.contains("verdict")) {
    os << "verdict: " << body["verdict"].get<std::string>() << "\n";
  }
  if (body.contains("conclusive")) {
    os << "conclusive: " << (body["conclusive"].get<bool>() ? "yes" : "no") << "\n";
  }
  if (body.contains("caveat")) {
    os << "caveat: " << body["caveat"].get<std::string>() << "\n";
  }
  for (const auto& [key, value] : body.items()) {
    if (key == "schema" || key == "command" || key == "verdict" || key == "conclusive" ||
        key == "caveat") {
      continue;
    }
    os << key << ": ";
    render_value(os, value);
    os << "\n";
  }
  return os.str();
}

nlohmann::json structure_to_json_value(const FiniteStructure& s) {
  nlohmann::json rels = nlohmann::json::object();
  for (const auto& [name, tuples] : s.relations) {
    nlohmann::json tup = nlohmann::json::array();
    for (const auto& t : tuples) tup.push_back(t);
    rels[name] = {{"arity", s.signature.arity(name)}, {"tuples", tup}};
  }
  return nlohmann::json{{"domain_size", s.domain_size}, {"relations", rels}};
}

}  // namespace fmw
