#include "satbench/response.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "json.hpp"

namespace satbench {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Sat: return "SAT";
    case Decision::Unsat: return "UNSAT";
    case Decision::Yes: return "YES";
    case Decision::No: return "NO";
    case Decision::Abstain: return "ABSTAIN";
  }
  return "ABSTAIN";
}

Decision decision_from_string(std::string_view s) {
  for (Decision d : {Decision::Sat, Decision::Unsat, Decision::Yes, Decision::No, Decision::Abstain})
    if (to_string(d) == s) return d;
  throw DomainError("unknown decision '" + std::string(s) + "'");
}

Verdict to_verdict(Decision d) {
  switch (d) {
    case Decision::Sat:
    case Decision::Yes: return Verdict::Sat;
    case Decision::Unsat:
    case Decision::No: return Verdict::Unsat;
    case Decision::Abstain: return Verdict::Abstain;
  }
  return Verdict::Abstain;
}

bool is_affirmative(Decision d) { return d == Decision::Sat || d == Decision::Yes; }

namespace {

using nlohmann::json;

std::string upper_trim(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Decision> decision_word(std::string_view raw) {
  const std::string s = upper_trim(raw);
  if (s == "SATISFIABLE" || s == "SAT") return Decision::Sat;
  if (s == "UNSATISFIABLE" || s == "UNSAT") return Decision::Unsat;
  if (s == "YES") return Decision::Yes;
  if (s == "NO") return Decision::No;
  return std::nullopt;
}

std::optional<std::int64_t> as_count(const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return static_cast<std::int64_t>(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (...) {
    }
  }
  return std::nullopt;
}

std::optional<bool> as_truth(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v == 0 || v == 1) return v == 1;
  }
  if (j.is_string()) {
    const std::string s = upper_trim(j.get<std::string>());
    if (s == "TRUE" || s == "T" || s == "1") return true;
    if (s == "FALSE" || s == "F" || s == "0") return false;
  }
  return std::nullopt;
}

// "x12", "12", "-12", "¬x12", "~x12", "!x12", "-x12"
std::optional<std::pair<Variable, bool>> literal_token(std::string s) {
  bool positive = true;
  for (std::string_view neg : {"¬", "~", "!", "-"}) {
    if (s.rfind(neg, 0) == 0) {
      positive = false;
      s.erase(0, neg.size());
      break;
    }
  }
  if (!s.empty() && (s[0] == 'x' || s[0] == 'X')) s.erase(0, 1);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  unsigned long v = std::stoul(s);
  if (v == 0 || v > 0xffffffffUL) return std::nullopt;
  return std::pair{static_cast<Variable>(v), positive};
}

std::optional<Witness> assignment_witness(const json& j) {
  AssignmentWitness w;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      auto lit = literal_token(key);
      auto truth = as_truth(value);
      if (!lit || !truth) return std::nullopt;
      w[lit->first] = lit->second ? *truth : !*truth;
    }
    return w;
  }
  if (j.is_array()) {
    for (const json& item : j) {
      std::optional<std::pair<Variable, bool>> lit;
      if (item.is_number_integer() && item.get<std::int64_t>() != 0) {
        auto v = item.get<std::int64_t>();
        lit = std::pair{static_cast<Variable>(v < 0 ? -v : v), v > 0};
      } else if (item.is_string()) {
        lit = literal_token(item.get<std::string>());
      }
      if (!lit) return std::nullopt;
      w[lit->first] = lit->second;
    }
    return w;
  }
  return std::nullopt;
}

std::string label_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return "#" + std::to_string(j.get<std::int64_t>());
  return j.dump();
}

std::optional<Witness> cover_witness(const json& j) {
  const json* list = &j;
  if (j.is_object() && j.contains("cover")) list = &j.at("cover");
  if (!list->is_array()) return std::nullopt;
  CoverWitness w;
  for (const json& item : *list) w.vertices.push_back(label_of(item));
  return w;
}

std::optional<Witness> packing_witness(const json& j) {
  if (!j.is_object()) return std::nullopt;
  PackingWitnessText w;
  if (j.contains("rods") && j.at("rods").is_array())
    for (const json& r : j.at("rods")) w.rods.push_back(label_of(r));
  if (j.contains("placements")) {
    const json& p = j.at("placements");
    auto add = [&](std::string token, const json& entry) {
      TokenPlacementText t;
      t.token = std::move(token);
      if (entry.is_object()) {
        if (entry.contains("rod")) t.rod = label_of(entry.at("rod"));
        if (entry.contains("slot")) t.slot = as_count(entry.at("slot")).value_or(0);
      } else if (entry.is_array() && entry.size() == 2) {
        t.rod = label_of(entry.at(0));
        t.slot = as_count(entry.at(1)).value_or(0);
      }
      w.placements.push_back(std::move(t));
    };
    if (p.is_object()) {
      for (const auto& [token, entry] : p.items()) add(token, entry);
    } else if (p.is_array()) {
      for (const json& entry : p)
        if (entry.is_object() && entry.contains("token")) add(label_of(entry.at("token")), entry);
    }
  }
  return w;
}

// Every balanced {...} region, outermost first, ignoring braces inside strings.
std::vector<std::string_view> json_object_candidates(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false, escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        out.push_back(text.substr(start, i - start + 1));
        break;
      }
    }
  }
  return out;
}

bool read_json(std::string_view text, Representation rep, Prediction& out) {
  std::optional<json> chosen;
  for (std::string_view candidate : json_object_candidates(text)) {
    json j = json::parse(candidate, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("decision") || !j.at("decision").is_string()) continue;
    if (!decision_word(j.at("decision").get<std::string>())) continue;
    chosen = std::move(j);  // later objects override earlier ones
  }
  if (!chosen) return false;
  const json& j = *chosen;
  out.decision = *decision_word(j.at("decision").get<std::string>());
  if (j.contains("branches")) out.branches = as_count(j.at("branches"));
  if (j.contains("conflicts")) out.conflicts = as_count(j.at("conflicts"));
  const char* witness_keys[] = {"witness", "assignment", "cover", "model"};
  for (const char* key : witness_keys) {
    if (!j.contains(key) || j.at(key).is_null()) continue;
    const json& w = j.at(key);
    switch (rep) {
      case Representation::Cnf: out.witness = assignment_witness(w); break;
      case Representation::VertexCover: out.witness = cover_witness(w); break;
      case Representation::Packing: out.witness = packing_witness(w); break;
    }
    break;
  }
  return true;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Position of the last whole-word occurrence of any keyword, with its decision.
std::optional<Decision> last_keyword(std::string_view text, std::initializer_list<std::pair<std::string_view, Decision>> words) {
  std::optional<std::pair<std::size_t, Decision>> best;
  for (const auto& [word, decision] : words) {
    for (std::size_t pos = text.find(word); pos != std::string_view::npos; pos = text.find(word, pos + 1)) {
      bool left = pos == 0 || !word_char(text[pos - 1]);
      bool right = pos + word.size() == text.size() || !word_char(text[pos + word.size()]);
      if (left && right && (!best || pos > best->first)) best = std::pair{pos, decision};
    }
  }
  if (!best) return std::nullopt;
  return best->second;
}

std::optional<std::int64_t> scan_count(const std::string& text, const char* noun) {
  std::regex re(std::string(noun) + R"([^0-9\n]{0,40}?(\d+))", std::regex::icase);
  std::smatch m;
  if (std::regex_search(text, m, re)) return std::stoll(m[1].str());
  return std::nullopt;
}

AssignmentWitness scan_assignment(const std::string& text) {
  static const std::regex re(R"((?:^|[^A-Za-z0-9_])[xX](\d+)\s*(?:=|:|is)\s*(True|False|true|false|TRUE|FALSE|T|F|1|0)\b)");
  AssignmentWitness w;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    unsigned long v = std::stoul((*it)[1].str());
    if (v == 0 || v > 0xffffffffUL) continue;
    const std::string t = (*it)[2].str();
    w[static_cast<Variable>(v)] = t == "True" || t == "true" || t == "TRUE" || t == "T" || t == "1";
  }
  return w;
}

}  // namespace

Prediction parse_response(std::string_view text, Representation representation) {
  Prediction p;
  p.raw_text = std::string(text);
  try {
    if (!read_json(text, representation, p)) {
      std::optional<Decision> d =
          representation == Representation::Cnf
              ? last_keyword(text, {{"SATISFIABLE", Decision::Sat}, {"UNSATISFIABLE", Decision::Unsat}})
              : last_keyword(text, {{"YES", Decision::Yes}, {"NO", Decision::No}});
      if (!d) return p;
      p.decision = *d;
      const std::string s(text);
      p.branches = scan_count(s, "branches");
      p.conflicts = scan_count(s, "conflicts");
      if (representation == Representation::Cnf && p.decision == Decision::Sat) {
        AssignmentWitness w = scan_assignment(s);
        if (!w.empty()) p.witness = std::move(w);
      }
    }
  } catch (const std::exception&) {
    // a malformed response must never escape as an exception
    Prediction abstain;
    abstain.raw_text = std::string(text);
    return abstain;
  }
  if (!is_affirmative(p.decision)) p.witness.reset();
  return p;
}

}  // namespace satbench
