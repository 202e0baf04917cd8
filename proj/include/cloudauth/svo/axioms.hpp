#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloudauth/result.hpp"
#include "cloudauth/svo/formula.hpp"

namespace cloudauth::svo {

// A1..A22 are the axiom schemas; MP/NEC are the inference rules; PREMISE
// cites a script assumption; TAUT closes propositional glue (conjunction
// introduction/elimination and friends) that the axiom list leaves implicit.
enum class AxiomId : std::uint8_t {
  A1, A2, A3, A4, A5, A6, A7, A8, A9, A10, A11,
  A12, A13, A14, A15, A16, A17, A18, A19, A20, A21, A22,
  MP, NEC, PREMISE, TAUT,
};

inline const char* to_string(AxiomId id) {
  static constexpr const char* names[] = {
      "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11",
      "A12", "A13", "A14", "A15", "A16", "A17", "A18", "A19", "A20", "A21",
      "A22", "MP", "NEC", "PREMISE", "TAUT"};
  return names[static_cast<int>(id)];
}

inline std::optional<AxiomId> axiom_id_from(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(AxiomId::TAUT); ++i) {
    auto id = static_cast<AxiomId>(i);
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

inline bool is_axiom(AxiomId id) { return id <= AxiomId::A22; }

// Metavariable bindings for one schema instantiation.
using Subst = std::map<std::string, NodeRef>;

struct InstError {
  std::string message;
};

namespace detail {

inline bool is_key_term(const NodeRef& n) {
  return n->kind == NodeKind::atom || n->kind == NodeKind::key_inverse ||
         n->kind == NodeKind::func_app;
}

class Binder {
 public:
  Binder(const Subst& subst) : subst_(subst) {}

  Result<NodeRef, InstError> need(const std::string& name, Sort sort) {
    auto it = subst_.find(name);
    if (it == subst_.end())
      return InstError{"missing binding for metavariable " + name};
    const NodeRef& v = it->second;
    switch (sort) {
      case Sort::principal:
        if (v->kind != NodeKind::atom)
          return InstError{"sort mismatch: " + name +
                           " must be a principal atom, got " + print(v)};
        break;
      case Sort::key:
        if (!is_key_term(v))
          return InstError{"sort mismatch: " + name + " must be a key term, got " +
                           print(v)};
        break;
      case Sort::formula:
        if (!is_formula(v) || v->kind == NodeKind::meta_var)
          return InstError{"sort mismatch: " + name + " must be a formula, got " +
                           print(v)};
        break;
      case Sort::tuple_term:
        if (v->kind != NodeKind::tuple)
          return InstError{"sort mismatch: " + name + " must be a tuple, got " +
                           print(v)};
        break;
      case Sort::func_name:
        if (v->kind != NodeKind::atom)
          return InstError{"sort mismatch: " + name +
                           " must name a function, got " + print(v)};
        break;
      case Sort::message:
        break;  // terms and formulas both travel in messages
    }
    return v;
  }

 private:
  const Subst& subst_;
};

// Replaces every occurrence of f0(a, b) with f0(b, a).
inline NodeRef swap_f0(const NodeRef& n, const NodeRef& a, const NodeRef& b) {
  std::vector<NodeRef> args;
  args.reserve(n->args.size());
  for (const auto& arg : n->args) args.push_back(swap_f0(arg, a, b));
  auto out = make(n->kind, n->name, std::move(args));
  if (n->kind == NodeKind::meta_var)
    out = meta(n->name, n->meta_sort);
  if (out->kind == NodeKind::func_app && out->name == "f0" &&
      out->args.size() == 2 && equal(out->args[0], a) && equal(out->args[1], b))
    return func_app("f0", {b, a});
  return out;
}

inline bool tuple_contains(const NodeRef& tup, const NodeRef& elem) {
  for (const auto& e : tup->args)
    if (equal(e, elem)) return true;
  return false;
}

}  // namespace detail

// Builds the conclusion formula of an axiom schema under `subst`, checking
// binding coverage, sorts, and the schema's side conditions. Binding names
// follow the schema statements: P Q R (principals), k kp kq (keys),
// X Y Xi (messages), Xs (a tuple standing for X1..Xn), phi psi (formulas),
// F (a function name).
inline Result<NodeRef, InstError> instantiate(AxiomId id, const Subst& subst) {
  using detail::Binder;
  Binder bind(subst);
  auto component_of = [](const NodeRef& xs, const NodeRef& xi,
                         const char* axiom) -> std::optional<InstError> {
    if (!detail::tuple_contains(xs, xi))
      return InstError{std::string(axiom) + ": Xi must be a component of Xs"};
    return std::nullopt;
  };

  switch (id) {
    case AxiomId::A1: {
      auto p = bind.need("P", Sort::principal);
      auto phi = bind.need("phi", Sort::formula);
      auto psi = bind.need("psi", Sort::formula);
      if (!p) return p.error();
      if (!phi) return phi.error();
      if (!psi) return psi.error();
      return implies(and_f(believes(p.value(), phi.value()),
                           believes(p.value(), implies(phi.value(), psi.value()))),
                     believes(p.value(), psi.value()));
    }
    case AxiomId::A2: {
      auto p = bind.need("P", Sort::principal);
      auto phi = bind.need("phi", Sort::formula);
      if (!p) return p.error();
      if (!phi) return phi.error();
      return implies(believes(p.value(), phi.value()), phi.value());
    }
    case AxiomId::A3: {
      auto p = bind.need("P", Sort::principal);
      auto phi = bind.need("phi", Sort::formula);
      if (!p) return p.error();
      if (!phi) return phi.error();
      return implies(believes(p.value(), phi.value()),
                     believes(p.value(), believes(p.value(), phi.value())));
    }
    case AxiomId::A4: {
      auto p = bind.need("P", Sort::principal);
      auto phi = bind.need("phi", Sort::formula);
      if (!p) return p.error();
      if (!phi) return phi.error();
      return implies(not_f(believes(p.value(), phi.value())),
                     believes(p.value(), not_f(believes(p.value(), phi.value()))));
    }
    case AxiomId::A5: {
      auto p = bind.need("P", Sort::principal);
      auto q = bind.need("Q", Sort::principal);
      auto r = bind.need("R", Sort::principal);
      auto k = bind.need("k", Sort::key);
      auto x = bind.need("X", Sort::message);
      if (!p) return p.error();
      if (!q) return q.error();
      if (!r) return r.error();
      if (!k) return k.error();
      if (!x) return x.error();
      return implies(
          and_f(shared_key(p.value(), k.value(), q.value()),
                received(r.value(),
                         encrypted(from_tagged(x.value(), q.value()), k.value()))),
          and_f(said(q.value(), x.value()), has(q.value(), x.value())));
    }
    case AxiomId::A6: {
      auto q = bind.need("Q", Sort::principal);
      auto r = bind.need("R", Sort::principal);
      auto k = bind.need("k", Sort::key);
      auto x = bind.need("X", Sort::message);
      auto y = bind.need("Y", Sort::message);
      if (!q) return q.error();
      if (!r) return r.error();
      if (!k) return k.error();
      if (!x) return x.error();
      if (!y) return y.error();
      return implies(and_f(and_f(pk_sigma(q.value(), k.value()),
                                 received(r.value(), x.value())),
                           sv(x.value(), k.value(), y.value())),
                     said(q.value(), y.value()));
    }
    case AxiomId::A7: {
      auto p = bind.need("P", Sort::principal);
      auto q = bind.need("Q", Sort::principal);
      auto kp = bind.need("kp", Sort::key);
      auto kq = bind.need("kq", Sort::key);
      if (!p) return p.error();
      if (!q) return q.error();
      if (!kp) return kp.error();
      if (!kq) return kq.error();
      return implies(and_f(pk_delta(p.value(), kp.value()),
                           pk_delta(q.value(), kq.value())),
                     shared_key(p.value(), func_app("f0", {kp.value(), kq.value()}),
                                q.value()));
    }
    case AxiomId::A8: {
      auto phi = bind.need("phi", Sort::formula);
      auto k = bind.need("k", Sort::key);
      auto kp = bind.need("kp", Sort::key);
      if (!phi) return phi.error();
      if (!k) return k.error();
      if (!kp) return kp.error();
      NodeRef swapped = detail::swap_f0(phi.value(), k.value(), kp.value());
      return and_f(implies(phi.value(), swapped), implies(swapped, phi.value()));
    }
    case AxiomId::A9: {
      auto p = bind.need("P", Sort::principal);
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto xi = bind.need("Xi", Sort::message);
      if (!p) return p.error();
      if (!xs) return xs.error();
      if (!xi) return xi.error();
      if (auto e = component_of(xs.value(), xi.value(), "A9")) return *e;
      return implies(received(p.value(), xs.value()), received(p.value(), xi.value()));
    }
    case AxiomId::A10: {
      auto p = bind.need("P", Sort::principal);
      auto x = bind.need("X", Sort::message);
      auto k = bind.need("k", Sort::key);
      if (!p) return p.error();
      if (!x) return x.error();
      if (!k) return k.error();
      return implies(and_f(received(p.value(), encrypted(x.value(), k.value())),
                           has(p.value(), key_inverse(k.value()))),
                     received(p.value(), x.value()));
    }
    case AxiomId::A11: {
      auto p = bind.need("P", Sort::principal);
      auto x = bind.need("X", Sort::message);
      auto k = bind.need("k", Sort::key);
      if (!p) return p.error();
      if (!x) return x.error();
      if (!k) return k.error();
      return implies(received(p.value(), signed_msg(x.value(), k.value())),
                     received(p.value(), x.value()));
    }
    case AxiomId::A12: {
      auto p = bind.need("P", Sort::principal);
      auto x = bind.need("X", Sort::message);
      if (!p) return p.error();
      if (!x) return x.error();
      return implies(received(p.value(), x.value()), has(p.value(), x.value()));
    }
    case AxiomId::A13: {
      auto p = bind.need("P", Sort::principal);
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto xi = bind.need("Xi", Sort::message);
      if (!p) return p.error();
      if (!xs) return xs.error();
      if (!xi) return xi.error();
      if (auto e = component_of(xs.value(), xi.value(), "A13")) return *e;
      return implies(has(p.value(), xs.value()), has(p.value(), xi.value()));
    }
    case AxiomId::A14: {
      auto p = bind.need("P", Sort::principal);
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto f = bind.need("F", Sort::func_name);
      if (!p) return p.error();
      if (!xs) return xs.error();
      if (!f) return f.error();
      std::vector<NodeRef> hyps;
      for (const auto& x : xs.value()->args) hyps.push_back(has(p.value(), x));
      return implies(and_chain(hyps),
                     has(p.value(), func_app(f.value()->name, xs.value()->args)));
    }
    case AxiomId::A15: {
      auto p = bind.need("P", Sort::principal);
      auto x = bind.need("X", Sort::message);
      auto f = bind.need("F", Sort::func_name);
      if (!p) return p.error();
      if (!x) return x.error();
      if (!f) return f.error();
      return implies(
          believes(p.value(), has(p.value(), func_app(f.value()->name, {x.value()}))),
          believes(p.value(), has(p.value(), x.value())));
    }
    case AxiomId::A16: {
      auto p = bind.need("P", Sort::principal);
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto xi = bind.need("Xi", Sort::message);
      if (!p) return p.error();
      if (!xs) return xs.error();
      if (!xi) return xi.error();
      if (auto e = component_of(xs.value(), xi.value(), "A16")) return *e;
      return implies(said(p.value(), xs.value()),
                     and_f(said(p.value(), xi.value()), has(p.value(), xi.value())));
    }
    case AxiomId::A17: {
      auto p = bind.need("P", Sort::principal);
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto xi = bind.need("Xi", Sort::message);
      if (!p) return p.error();
      if (!xs) return xs.error();
      if (!xi) return xi.error();
      if (auto e = component_of(xs.value(), xi.value(), "A17")) return *e;
      return implies(says(p.value(), xs.value()),
                     and_f(said(p.value(), xs.value()), says(p.value(), xi.value())));
    }
    case AxiomId::A18: {
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto xi = bind.need("Xi", Sort::message);
      if (!xs) return xs.error();
      if (!xi) return xi.error();
      if (auto e = component_of(xs.value(), xi.value(), "A18")) return *e;
      return implies(fresh(xi.value()), fresh(xs.value()));
    }
    case AxiomId::A19: {
      auto xs = bind.need("Xs", Sort::tuple_term);
      auto f = bind.need("F", Sort::func_name);
      if (!xs) return xs.error();
      if (!f) return f.error();
      return implies(fresh(xs.value()),
                     fresh(func_app(f.value()->name, xs.value()->args)));
    }
    case AxiomId::A20: {
      auto p = bind.need("P", Sort::principal);
      auto phi = bind.need("phi", Sort::formula);
      if (!p) return p.error();
      if (!phi) return phi.error();
      return implies(and_f(controls(p.value(), phi.value()),
                           says(p.value(), phi.value())),
                     phi.value());
    }
    case AxiomId::A21: {
      auto p = bind.need("P", Sort::principal);
      auto x = bind.need("X", Sort::message);
      if (!p) return p.error();
      if (!x) return x.error();
      return implies(and_f(fresh(x.value()), said(p.value(), x.value())),
                     says(p.value(), x.value()));
    }
    case AxiomId::A22: {
      auto p = bind.need("P", Sort::principal);
      auto q = bind.need("Q", Sort::principal);
      auto k = bind.need("k", Sort::key);
      if (!p) return p.error();
      if (!q) return q.error();
      if (!k) return k.error();
      auto lhs = shared_key(p.value(), k.value(), q.value());
      auto rhs = shared_key(q.value(), k.value(), p.value());
      // the equivalence, rendered as two implications
      return and_f(implies(lhs, rhs), implies(rhs, lhs));
    }
    default:
      return InstError{std::string(to_string(id)) + " is not an axiom schema"};
  }
}

}  // namespace cloudauth::svo
