#pragma once

#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cloudauth::svo {

// One node type covers both message terms and formulas: the logic lets
// formulas travel inside messages (an encrypted payload may assert key
// goodness or freshness), so the two sorts share a tree and are separated
// by is_formula() where it matters.
enum class NodeKind : std::uint8_t {
  // terms
  atom,         // named constant: principal, key, nonce, payload
  key_inverse,  // inv(k)
  tuple,        // (X1, ..., Xn)
  func_app,     // F(X1, ..., Xn); the key-agreement combiner is f0(k, k')
  encrypted,    // enc{X}[k]
  signed_msg,   // sig[X][k]
  from_tagged,  // X from(Q): X with its source comprehended
  unrecognized, // unrec{X}[P]: X not recognized by P
  // atomic formulas
  believes,
  received,
  said,
  says,
  has,
  controls,
  fresh,
  shared_key,  // P sharedkey[k] Q
  pk_sigma,
  pk_psi,
  pk_delta,
  sv,          // sv(X, k, Y): uninterpreted signature-verification predicate
  // connectives
  not_f,
  and_f,
  implies,
  // schema machinery
  meta_var,
};

enum class Sort : std::uint8_t { principal, key, message, formula, tuple_term, func_name };

inline const char* to_string(Sort s) {
  switch (s) {
    case Sort::principal: return "principal";
    case Sort::key: return "key";
    case Sort::message: return "message";
    case Sort::formula: return "formula";
    case Sort::tuple_term: return "tuple";
    case Sort::func_name: return "function name";
  }
  return "?";
}

struct Node;
using NodeRef = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  std::string name;           // atom / func_app / meta_var
  Sort meta_sort = Sort::message;  // meta_var only
  std::vector<NodeRef> args;

  Node(NodeKind k, std::string n, std::vector<NodeRef> a)
      : kind(k), name(std::move(n)), args(std::move(a)) {}
};

inline NodeRef make(NodeKind k, std::string name, std::vector<NodeRef> args) {
  return std::make_shared<Node>(k, std::move(name), std::move(args));
}

inline NodeRef atom(std::string name) { return make(NodeKind::atom, std::move(name), {}); }
inline NodeRef key_inverse(NodeRef k) { return make(NodeKind::key_inverse, "", {std::move(k)}); }
inline NodeRef tuple(std::vector<NodeRef> elems) { return make(NodeKind::tuple, "", std::move(elems)); }
inline NodeRef func_app(std::string f, std::vector<NodeRef> args) {
  return make(NodeKind::func_app, std::move(f), std::move(args));
}
inline NodeRef encrypted(NodeRef x, NodeRef k) {
  return make(NodeKind::encrypted, "", {std::move(x), std::move(k)});
}
inline NodeRef signed_msg(NodeRef x, NodeRef k) {
  return make(NodeKind::signed_msg, "", {std::move(x), std::move(k)});
}
inline NodeRef from_tagged(NodeRef x, NodeRef q) {
  return make(NodeKind::from_tagged, "", {std::move(x), std::move(q)});
}
inline NodeRef unrecognized(NodeRef x, NodeRef p) {
  return make(NodeKind::unrecognized, "", {std::move(x), std::move(p)});
}
inline NodeRef believes(NodeRef p, NodeRef f) { return make(NodeKind::believes, "", {std::move(p), std::move(f)}); }
inline NodeRef received(NodeRef p, NodeRef x) { return make(NodeKind::received, "", {std::move(p), std::move(x)}); }
inline NodeRef said(NodeRef p, NodeRef x) { return make(NodeKind::said, "", {std::move(p), std::move(x)}); }
inline NodeRef says(NodeRef p, NodeRef x) { return make(NodeKind::says, "", {std::move(p), std::move(x)}); }
inline NodeRef has(NodeRef p, NodeRef x) { return make(NodeKind::has, "", {std::move(p), std::move(x)}); }
inline NodeRef controls(NodeRef p, NodeRef f) { return make(NodeKind::controls, "", {std::move(p), std::move(f)}); }
inline NodeRef fresh(NodeRef x) { return make(NodeKind::fresh, "", {std::move(x)}); }
inline NodeRef shared_key(NodeRef p, NodeRef k, NodeRef q) {
  return make(NodeKind::shared_key, "", {std::move(p), std::move(k), std::move(q)});
}
inline NodeRef pk_sigma(NodeRef p, NodeRef k) { return make(NodeKind::pk_sigma, "", {std::move(p), std::move(k)}); }
inline NodeRef pk_psi(NodeRef p, NodeRef k) { return make(NodeKind::pk_psi, "", {std::move(p), std::move(k)}); }
inline NodeRef pk_delta(NodeRef p, NodeRef k) { return make(NodeKind::pk_delta, "", {std::move(p), std::move(k)}); }
inline NodeRef sv(NodeRef x, NodeRef k, NodeRef y) {
  return make(NodeKind::sv, "", {std::move(x), std::move(k), std::move(y)});
}
inline NodeRef not_f(NodeRef f) { return make(NodeKind::not_f, "", {std::move(f)}); }
inline NodeRef and_f(NodeRef a, NodeRef b) { return make(NodeKind::and_f, "", {std::move(a), std::move(b)}); }
inline NodeRef implies(NodeRef a, NodeRef b) { return make(NodeKind::implies, "", {std::move(a), std::move(b)}); }
inline NodeRef meta(std::string name, Sort sort) {
  auto n = std::make_shared<Node>(NodeKind::meta_var, std::move(name),
                                  std::vector<NodeRef>{});
  n->meta_sort = sort;
  return n;
}

// Left-associative conjunction chain, matching the parser.
inline NodeRef and_chain(const std::vector<NodeRef>& fs) {
  NodeRef out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = and_f(out, fs[i]);
  return out;
}

inline bool is_formula(const NodeRef& n) {
  switch (n->kind) {
    case NodeKind::believes:
    case NodeKind::received:
    case NodeKind::said:
    case NodeKind::says:
    case NodeKind::has:
    case NodeKind::controls:
    case NodeKind::fresh:
    case NodeKind::shared_key:
    case NodeKind::pk_sigma:
    case NodeKind::pk_psi:
    case NodeKind::pk_delta:
    case NodeKind::sv:
    case NodeKind::not_f:
    case NodeKind::and_f:
    case NodeKind::implies:
      return true;
    case NodeKind::meta_var:
      return n->meta_sort == Sort::formula;
    default:
      return false;
  }
}

inline bool equal(const NodeRef& a, const NodeRef& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name ||
      a->args.size() != b->args.size())
    return false;
  if (a->kind == NodeKind::meta_var && a->meta_sort != b->meta_sort)
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

namespace detail {

// Precedence bands, loosest to tightest: implies < and < not < modal < primary.
enum Prec { kImplies = 0, kAnd = 1, kNot = 2, kModal = 3, kPrimary = 4 };

inline int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::implies: return kImplies;
    case NodeKind::and_f: return kAnd;
    case NodeKind::not_f: return kNot;
    case NodeKind::believes:
    case NodeKind::received:
    case NodeKind::said:
    case NodeKind::says:
    case NodeKind::has:
    case NodeKind::controls:
    case NodeKind::shared_key:
      return kModal;
    default: return kPrimary;
  }
}

inline void print_node(std::ostringstream& os, const NodeRef& n, int min_prec);

inline void print_wrapped(std::ostringstream& os, const NodeRef& n, int min_prec) {
  if (precedence(*n) < min_prec) {
    os << '(';
    print_node(os, n, kImplies);
    os << ')';
  } else {
    print_node(os, n, min_prec);
  }
}

inline void print_modal(std::ostringstream& os, const NodeRef& n,
                        const char* word) {
  print_wrapped(os, n->args[0], kPrimary);
  os << ' ' << word << ' ';
  // Arguments that are themselves modal or looser get parentheses; bare
  // atoms and prefix forms do not.
  if (precedence(*n->args[1]) == kPrimary) {
    print_node(os, n->args[1], kPrimary);
  } else {
    os << '(';
    print_node(os, n->args[1], kImplies);
    os << ')';
  }
}

inline void print_node(std::ostringstream& os, const NodeRef& n, int min_prec) {
  (void)min_prec;
  switch (n->kind) {
    case NodeKind::atom:
      os << n->name;
      break;
    case NodeKind::meta_var:
      os << '?' << n->name;
      break;
    case NodeKind::key_inverse:
      os << "inv(";
      print_node(os, n->args[0], kImplies);
      os << ')';
      break;
    case NodeKind::tuple: {
      os << '(';
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        if (i) os << ", ";
        print_node(os, n->args[i], kImplies);
      }
      os << ')';
      break;
    }
    case NodeKind::func_app: {
      os << n->name << '(';
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        if (i) os << ", ";
        print_node(os, n->args[i], kImplies);
      }
      os << ')';
      break;
    }
    case NodeKind::encrypted:
      os << "enc{";
      print_node(os, n->args[0], kImplies);
      os << "}[";
      print_node(os, n->args[1], kImplies);
      os << ']';
      break;
    case NodeKind::signed_msg:
      os << "sig[";
      print_node(os, n->args[0], kImplies);
      os << "][";
      print_node(os, n->args[1], kImplies);
      os << ']';
      break;
    case NodeKind::from_tagged:
      print_wrapped(os, n->args[0], kPrimary);
      os << " from(";
      print_node(os, n->args[1], kImplies);
      os << ')';
      break;
    case NodeKind::unrecognized:
      os << "unrec{";
      print_node(os, n->args[0], kImplies);
      os << "}[";
      print_node(os, n->args[1], kImplies);
      os << ']';
      break;
    case NodeKind::believes: print_modal(os, n, "believes"); break;
    case NodeKind::received: print_modal(os, n, "received"); break;
    case NodeKind::said: print_modal(os, n, "said"); break;
    case NodeKind::says: print_modal(os, n, "says"); break;
    case NodeKind::has: print_modal(os, n, "has"); break;
    case NodeKind::controls: print_modal(os, n, "controls"); break;
    case NodeKind::fresh:
      os << "fresh(";
      print_node(os, n->args[0], kImplies);
      os << ')';
      break;
    case NodeKind::shared_key:
      print_wrapped(os, n->args[0], kPrimary);
      os << " sharedkey[";
      print_node(os, n->args[1], kImplies);
      os << "] ";
      print_wrapped(os, n->args[2], kPrimary);
      break;
    case NodeKind::pk_sigma:
    case NodeKind::pk_psi:
    case NodeKind::pk_delta: {
      os << (n->kind == NodeKind::pk_sigma   ? "pk_sigma"
             : n->kind == NodeKind::pk_psi ? "pk_psi"
                                             : "pk_delta")
         << '(';
      print_node(os, n->args[0], kImplies);
      os << ", ";
      print_node(os, n->args[1], kImplies);
      os << ')';
      break;
    }
    case NodeKind::sv:
      os << "sv(";
      print_node(os, n->args[0], kImplies);
      os << ", ";
      print_node(os, n->args[1], kImplies);
      os << ", ";
      print_node(os, n->args[2], kImplies);
      os << ')';
      break;
    case NodeKind::not_f:
      os << "not ";
      print_wrapped(os, n->args[0], kNot);
      break;
    case NodeKind::and_f:
      print_wrapped(os, n->args[0], kAnd);
      os << " and ";
      print_wrapped(os, n->args[1], kNot);  // right operand binds tighter
      break;
    case NodeKind::implies:
      print_wrapped(os, n->args[0], kAnd);
      os << " -> ";
      print_wrapped(os, n->args[1], kImplies);  // right-associative
      break;
  }
}

}  // namespace detail

inline std::string print(const NodeRef& n) {
  std::ostringstream os;
  detail::print_node(os, n, detail::kImplies);
  return os.str();
}

}  // namespace cloudauth::svo
