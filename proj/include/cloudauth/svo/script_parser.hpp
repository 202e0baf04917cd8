#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "cloudauth/result.hpp"
#include "cloudauth/svo/parser.hpp"
#include "cloudauth/svo/proof.hpp"

namespace cloudauth::svo {

struct ScriptError {
  std::size_t line = 0;
  std::string message;

  std::string to_string() const {
    return "line " + std::to_string(line) + ": " + message;
  }
};

// Line-oriented proof scripts:
//
//   # comment
//   premise I1: <formula>
//   step D1.2: <formula> ; by TAUT from C1, P1, D1.1
//   step D2.1: <formula> ; by A5 with P := client, Q := CServer, ... from I1
//   goal: <formula>
//
// `with` bindings instantiate axiom metavariables; `from` cites earlier
// labels. Axiom steps may cite premises for readability; only the
// instantiation is checked against them.
class ScriptParser {
 public:
  explicit ScriptParser(std::string_view text) : text_(text) {}

  Result<ProofScript, ScriptError> parse() {
    ProofScript script;
    bool have_goal = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t eol = text_.find('\n', pos);
      std::string_view line = text_.substr(
          pos, eol == std::string_view::npos ? text_.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text_.size() + 1 : eol + 1;
      ++line_no;

      auto hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      if (line.rfind("premise", 0) == 0) {
        auto rest = trim(line.substr(7));
        auto colon = rest.find(':');
        if (colon == std::string_view::npos)
          return ScriptError{line_no, "expected 'premise LABEL: formula'"};
        std::string label{trim(rest.substr(0, colon))};
        if (!valid_label(label)) return ScriptError{line_no, "bad label '" + label + "'"};
        auto formula = parse_formula(rest.substr(colon + 1));
        if (!formula)
          return ScriptError{line_no, formula.error().to_string()};
        script.premises.emplace_back(std::move(label), formula.value());
        continue;
      }
      if (line.rfind("goal", 0) == 0) {
        auto rest = trim(line.substr(4));
        if (rest.empty() || rest[0] != ':')
          return ScriptError{line_no, "expected 'goal: formula'"};
        auto formula = parse_formula(rest.substr(1));
        if (!formula)
          return ScriptError{line_no, formula.error().to_string()};
        script.goal = formula.value();
        have_goal = true;
        continue;
      }
      if (line.rfind("step", 0) == 0) {
        auto step = parse_step(trim(line.substr(4)), line_no);
        if (!step) return step.error();
        script.steps.push_back(step.value());
        continue;
      }
      return ScriptError{line_no, "expected 'premise', 'step', or 'goal'"};
    }
    if (!have_goal) return ScriptError{line_no, "missing goal"};
    return script;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  }

  static bool valid_label(std::string_view label) {
    if (label.empty()) return false;
    for (char c : label)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
        return false;
    return true;
  }

  Result<ProofStep, ScriptError> parse_step(std::string_view rest,
                                            std::size_t line_no) {
    ProofStep step;
    auto colon = rest.find(':');
    if (colon == std::string_view::npos)
      return ScriptError{line_no, "expected 'step LABEL: formula ; by RULE ...'"};
    step.label = std::string(trim(rest.substr(0, colon)));
    if (!valid_label(step.label))
      return ScriptError{line_no, "bad label '" + step.label + "'"};

    auto semi = rest.find(';', colon);
    if (semi == std::string_view::npos)
      return ScriptError{line_no, "missing '; by RULE' clause"};
    auto formula = parse_formula(rest.substr(colon + 1, semi - colon - 1));
    if (!formula) return ScriptError{line_no, formula.error().to_string()};
    step.conclusion = formula.value();

    std::string_view tail = trim(rest.substr(semi + 1));
    if (tail.rfind("by", 0) != 0)
      return ScriptError{line_no, "expected 'by RULE' after ';'"};
    tail = trim(tail.substr(2));

    std::size_t i = 0;
    while (i < tail.size() && !std::isspace(static_cast<unsigned char>(tail[i])))
      ++i;
    auto rule = axiom_id_from(tail.substr(0, i));
    if (!rule)
      return ScriptError{line_no,
                         "unknown rule '" + std::string(tail.substr(0, i)) + "'"};
    step.rule = *rule;
    tail = trim(tail.substr(i));

    if (tail.rfind("with", 0) == 0) {
      tail = trim(tail.substr(4));
      while (true) {
        std::size_t j = 0;
        while (j < tail.size() &&
               (std::isalnum(static_cast<unsigned char>(tail[j])) || tail[j] == '_'))
          ++j;
        if (j == 0) return ScriptError{line_no, "expected metavariable name"};
        std::string name{tail.substr(0, j)};
        tail = trim(tail.substr(j));
        if (tail.rfind(":=", 0) != 0)
          return ScriptError{line_no, "expected ':=' after '" + name + "'"};
        tail = trim(tail.substr(2));
        FormulaParser value_parser(tail);
        auto value = value_parser.parse_prefix();
        if (!value) return ScriptError{line_no, value.error().to_string()};
        step.substitution[name] = value.value();
        tail = trim(tail.substr(value_parser.position()));
        if (tail.rfind(",", 0) == 0) {
          tail = trim(tail.substr(1));
          continue;
        }
        break;
      }
    }

    if (tail.rfind("from", 0) == 0) {
      tail = trim(tail.substr(4));
      while (true) {
        std::size_t j = 0;
        while (j < tail.size() &&
               (std::isalnum(static_cast<unsigned char>(tail[j])) ||
                tail[j] == '_' || tail[j] == '.'))
          ++j;
        if (j == 0) return ScriptError{line_no, "expected premise label"};
        step.premises.emplace_back(tail.substr(0, j));
        tail = trim(tail.substr(j));
        if (tail.rfind(",", 0) == 0) {
          tail = trim(tail.substr(1));
          continue;
        }
        break;
      }
    }
    if (!tail.empty())
      return ScriptError{line_no, "trailing text '" + std::string(tail) + "'"};
    return step;
  }

  std::string_view text_;
};

inline Result<ProofScript, ScriptError> parse_script(std::string_view text) {
  return ScriptParser(text).parse();
}

}  // namespace cloudauth::svo
