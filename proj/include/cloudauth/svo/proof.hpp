#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cloudauth/svo/axioms.hpp"
#include "cloudauth/svo/formula.hpp"

namespace cloudauth::svo {

inline constexpr std::size_t kMaxTautAtoms = 12;

struct ProofStep {
  std::string label;
  NodeRef conclusion;
  AxiomId rule = AxiomId::PREMISE;
  std::vector<std::string> premises;  // labels of earlier steps or assumptions
  Subst substitution;                 // axiom steps only
};

struct ProofScript {
  std::vector<std::pair<std::string, NodeRef>> premises;
  std::vector<ProofStep> steps;
  NodeRef goal;
};

struct StepResult {
  std::string label;
  bool ok = false;
  std::string diagnostic;  // empty when ok
};

struct Verdict {
  bool accepted = false;
  std::vector<StepResult> steps;
  std::string failing_label;  // first failing step, if any

  std::string summary() const {
    if (accepted) return "accepted";
    return "rejected at " + (failing_label.empty() ? "goal" : failing_label);
  }
};

namespace detail {

struct Fact {
  NodeRef formula;
  bool is_theorem = false;  // derivable with no recourse to script premises
};

using Env = std::map<std::string, Fact>;

// Decomposes over the propositional connectives; anything else is an atom
// keyed by its printed form.
inline void collect_atoms(const NodeRef& f, std::vector<NodeRef>& atoms,
                          std::map<std::string, std::size_t>& index) {
  switch (f->kind) {
    case NodeKind::not_f:
      collect_atoms(f->args[0], atoms, index);
      return;
    case NodeKind::and_f:
    case NodeKind::implies:
      collect_atoms(f->args[0], atoms, index);
      collect_atoms(f->args[1], atoms, index);
      return;
    default: {
      auto key = print(f);
      if (index.emplace(key, atoms.size()).second) atoms.push_back(f);
      return;
    }
  }
}

inline bool eval_prop(const NodeRef& f,
                      const std::map<std::string, std::size_t>& index,
                      std::uint32_t assignment) {
  switch (f->kind) {
    case NodeKind::not_f:
      return !eval_prop(f->args[0], index, assignment);
    case NodeKind::and_f:
      return eval_prop(f->args[0], index, assignment) &&
             eval_prop(f->args[1], index, assignment);
    case NodeKind::implies:
      return !eval_prop(f->args[0], index, assignment) ||
             eval_prop(f->args[1], index, assignment);
    default:
      return (assignment >> index.at(print(f))) & 1u;
  }
}

// True when premises |= conclusion by truth table.
inline Result<bool, std::string> taut_entails(const std::vector<NodeRef>& premises,
                                              const NodeRef& conclusion) {
  std::vector<NodeRef> atoms;
  std::map<std::string, std::size_t> index;
  for (const auto& p : premises) collect_atoms(p, atoms, index);
  collect_atoms(conclusion, atoms, index);
  if (atoms.size() > kMaxTautAtoms)
    return std::string("TAUT limit exceeded: ") + std::to_string(atoms.size()) +
           " atoms (max " + std::to_string(kMaxTautAtoms) + ")";
  for (std::uint32_t a = 0; a < (1u << atoms.size()); ++a) {
    bool all = true;
    for (const auto& p : premises)
      if (!eval_prop(p, index, a)) {
        all = false;
        break;
      }
    if (all && !eval_prop(conclusion, index, a)) return false;
  }
  return true;
}

}  // namespace detail

// Validates one step against everything proved before it. On success also
// reports whether the new fact is a theorem (NEC may only cite theorems).
inline Result<bool /*is_theorem*/, std::string> check_step(
    const detail::Env& env, const ProofStep& step) {
  if (!step.conclusion) return std::string("step has no conclusion");

  std::vector<detail::Fact> cited;
  for (const auto& label : step.premises) {
    auto it = env.find(label);
    if (it == env.end())
      return "unknown premise label '" + label + "'";
    cited.push_back(it->second);
  }

  switch (step.rule) {
    case AxiomId::MP: {
      if (cited.size() != 2)
        return std::string("MP needs exactly two premises");
      auto matches = [&](const detail::Fact& antecedent,
                         const detail::Fact& implication) {
        return implication.formula->kind == NodeKind::implies &&
               equal(implication.formula->args[0], antecedent.formula) &&
               equal(implication.formula->args[1], step.conclusion);
      };
      // premise order is immaterial
      if (!matches(cited[0], cited[1]) && !matches(cited[1], cited[0]))
        return std::string("MP premises do not yield the conclusion");
      return cited[0].is_theorem && cited[1].is_theorem;
    }
    case AxiomId::NEC: {
      if (cited.size() != 1)
        return std::string("NEC needs exactly one premise");
      if (!cited[0].is_theorem)
        return std::string("NEC premise must be a theorem, not an assumption");
      if (step.conclusion->kind != NodeKind::believes ||
          !equal(step.conclusion->args[1], cited[0].formula))
        return std::string("NEC conclusion must be 'P believes <premise>'");
      return true;
    }
    case AxiomId::PREMISE:
      return std::string(
          "PREMISE steps are resolved by the script checker");  // see check_script
    case AxiomId::TAUT: {
      std::vector<NodeRef> forms;
      bool theorem = true;
      for (const auto& f : cited) {
        forms.push_back(f.formula);
        theorem = theorem && f.is_theorem;
      }
      auto entails = detail::taut_entails(forms, step.conclusion);
      if (!entails) return entails.error();
      if (!entails.value())
        return std::string("not a propositional consequence of the premises");
      return theorem;
    }
    default: {  // axiom schema instantiation
      auto inst = instantiate(step.rule, step.substitution);
      if (!inst)
        return std::string(to_string(step.rule)) + ": " + inst.error().message;
      if (!equal(inst.value(), step.conclusion))
        return std::string("conclusion does not match ") + to_string(step.rule) +
               " instance: expected " + print(inst.value());
      return true;
    }
  }
}

// Runs the whole script. Every step is validated in order; the script is
// accepted iff all steps hold and the final conclusion equals the goal.
// Failed steps still enter the environment so later diagnostics stay useful.
inline Verdict check_script(const ProofScript& script) {
  Verdict verdict;
  detail::Env env;
  for (const auto& [label, formula] : script.premises)
    env[label] = detail::Fact{formula, false};

  bool all_ok = true;
  for (const auto& step : script.steps) {
    StepResult r;
    r.label = step.label;
    if (env.contains(step.label)) {
      r.ok = false;
      r.diagnostic = "duplicate label";
    } else if (step.rule == AxiomId::PREMISE) {
      r.ok = false;
      r.diagnostic = "conclusion is not among the script premises";
      for (const auto& [label, formula] : script.premises) {
        if (equal(formula, step.conclusion)) {
          r.ok = true;
          r.diagnostic.clear();
          break;
        }
      }
      env[step.label] = detail::Fact{step.conclusion, false};
    } else {
      auto res = check_step(env, step);
      r.ok = res.ok();
      if (!r.ok) r.diagnostic = res.error();
      env[step.label] = detail::Fact{step.conclusion, res.ok() && res.value()};
    }
    if (!r.ok && all_ok) {
      all_ok = false;
      verdict.failing_label = r.label;
    }
    verdict.steps.push_back(std::move(r));
  }

  bool goal_met = !script.steps.empty() &&
                  equal(script.steps.back().conclusion, script.goal);
  if (script.steps.empty() && script.goal) {
    goal_met = false;  // an empty step list proves nothing
  }
  verdict.accepted = all_ok && goal_met;
  if (all_ok && !goal_met && verdict.failing_label.empty())
    verdict.failing_label = "goal";
  return verdict;
}

}  // namespace cloudauth::svo
