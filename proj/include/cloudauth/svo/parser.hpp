#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloudauth/result.hpp"
#include "cloudauth/svo/formula.hpp"

namespace cloudauth::svo {

struct ParseError {
  std::size_t position = 0;  // byte offset into the input
  std::string expected;

  std::string to_string() const {
    return "parse error at offset " + std::to_string(position) + ": expected " +
           expected;
  }
};

// Recursive-descent parser for the formula grammar (see docs/svo.md):
//
//   formula  := conjunct [ '->' formula ]            right-associative
//   conjunct := negation { 'and' negation }          left-associative
//   negation := 'not' negation | modal
//   modal    := primary [ modal-op ]                 binds tightest
//   modal-op := ('believes'|'controls') negation     argument must be a formula
//             | ('received'|'said'|'says'|'has') negation
//             | 'sharedkey' '[' expr ']' primary
//   primary  := ident | '(' expr {',' expr} ')' | 'fresh' '(' expr ')'
//             | 'enc' '{' expr '}' '[' expr ']' | 'sig' '[' expr ']' '[' expr ']'
//             | 'pk_sigma/psi/delta' '(' expr ',' expr ')'
//             | 'sv' '(' expr ',' expr ',' expr ')' | 'f0' '(' expr ',' expr ')'
//             | 'inv' '(' expr ')' | 'unrec' '{' expr '}' '[' expr ']'
//   a primary may carry a 'from' '(' expr ')' postfix
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Result<NodeRef, ParseError> parse() {
    auto f = parse_expr();
    if (!f) return f;
    skip_ws();
    if (pos_ != text_.size()) return err("end of input");
    return f;
  }

  // Parses one expression and stops at the first token that cannot extend
  // it; used for substitution values embedded in larger lines.
  Result<NodeRef, ParseError> parse_prefix() { return parse_expr(); }

  std::size_t position() const { return pos_; }

 private:
  Result<NodeRef, ParseError> err(std::string expected) {
    return ParseError{pos_, std::move(expected)};
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  bool peek_symbol(std::string_view sym) {
    skip_ws();
    return text_.substr(pos_, sym.size()) == sym;
  }

  bool eat_symbol(std::string_view sym) {
    if (!peek_symbol(sym)) return false;
    pos_ += sym.size();
    return true;
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::optional<std::string_view> peek_ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) return std::nullopt;
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  bool eat_keyword(std::string_view kw) {
    auto id = peek_ident();
    if (!id || *id != kw) return false;
    pos_ += kw.size();
    return true;
  }

  Result<NodeRef, ParseError> parse_expr() {
    auto lhs = parse_conjunct();
    if (!lhs) return lhs;
    if (eat_symbol("->")) {
      if (!is_formula(lhs.value())) return err("formula before '->'");
      auto rhs = parse_expr();
      if (!rhs) return rhs;
      if (!is_formula(rhs.value())) return err("formula after '->'");
      return implies(lhs.value(), rhs.value());
    }
    return lhs;
  }

  Result<NodeRef, ParseError> parse_conjunct() {
    auto lhs = parse_negation();
    if (!lhs) return lhs;
    while (true) {
      // 'and' only counts when followed by something that starts a formula;
      // it is a keyword, not an identifier, so a plain peek suffices.
      auto save = pos_;
      if (!eat_keyword("and")) break;
      if (!is_formula(lhs.value())) {
        pos_ = save;
        return err("formula before 'and'");
      }
      auto rhs = parse_negation();
      if (!rhs) return rhs;
      if (!is_formula(rhs.value())) return err("formula after 'and'");
      lhs = Result<NodeRef, ParseError>(and_f(lhs.value(), rhs.value()));
    }
    return lhs;
  }

  Result<NodeRef, ParseError> parse_negation() {
    if (eat_keyword("not")) {
      auto arg = parse_negation();
      if (!arg) return arg;
      if (!is_formula(arg.value())) return err("formula after 'not'");
      return not_f(arg.value());
    }
    return parse_modal();
  }

  static bool is_modal_word(std::string_view id) {
    return id == "believes" || id == "controls" || id == "received" ||
           id == "said" || id == "says" || id == "has" || id == "sharedkey";
  }

  Result<NodeRef, ParseError> parse_modal() {
    auto lhs = parse_primary();
    if (!lhs) return lhs;
    auto id = peek_ident();
    if (!id) return lhs;
    if (is_modal_word(*id) && is_formula(lhs.value()))
      return err("principal term before '" + std::string(*id) + "'");

    auto modal_arg = [this](bool needs_formula,
                            const char* what) -> Result<NodeRef, ParseError> {
      auto arg = parse_negation();
      if (!arg) return arg;
      if (needs_formula && !is_formula(arg.value())) return err(what);
      return arg;
    };

    if (*id == "believes") {
      pos_ += id->size();
      auto arg = modal_arg(true, "formula after 'believes'");
      if (!arg) return arg;
      return believes(lhs.value(), arg.value());
    }
    if (*id == "controls") {
      pos_ += id->size();
      auto arg = modal_arg(true, "formula after 'controls'");
      if (!arg) return arg;
      return controls(lhs.value(), arg.value());
    }
    if (*id == "received" || *id == "said" || *id == "says" || *id == "has") {
      std::string op(*id);
      pos_ += id->size();
      auto arg = modal_arg(false, "");
      if (!arg) return arg;
      if (op == "received") return received(lhs.value(), arg.value());
      if (op == "said") return said(lhs.value(), arg.value());
      if (op == "says") return says(lhs.value(), arg.value());
      return has(lhs.value(), arg.value());
    }
    if (*id == "sharedkey") {
      pos_ += id->size();
      if (!eat_symbol("[")) return err("'[' after 'sharedkey'");
      auto key = parse_expr();
      if (!key) return key;
      if (is_formula(key.value())) return err("key term in sharedkey[...]");
      if (!eat_symbol("]")) return err("']'");
      auto rhs = parse_primary();
      if (!rhs) return rhs;
      if (is_formula(rhs.value())) return err("principal term after sharedkey[...]");
      return shared_key(lhs.value(), key.value(), rhs.value());
    }
    return lhs;
  }

  Result<NodeRef, ParseError> parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) return err("expression");

    Result<NodeRef, ParseError> base = err("expression");
    if (eat_symbol("(")) {
      auto first = parse_expr();
      if (!first) return first;
      std::vector<NodeRef> elems{first.value()};
      while (eat_symbol(",")) {
        auto next = parse_expr();
        if (!next) return next;
        elems.push_back(next.value());
      }
      if (!eat_symbol(")")) return err("')'");
      base = elems.size() == 1 ? Result<NodeRef, ParseError>(elems[0])
                               : Result<NodeRef, ParseError>(tuple(elems));
    } else if (auto id = peek_ident()) {
      if (*id == "fresh") {
        pos_ += id->size();
        auto args = parse_paren_args(1, "fresh");
        if (!args) return args.error();
        base = fresh(args.value()[0]);
      } else if (*id == "inv") {
        pos_ += id->size();
        auto args = parse_paren_args(1, "inv");
        if (!args) return args.error();
        if (is_formula(args.value()[0])) return err("key term in inv(...)");
        base = key_inverse(args.value()[0]);
      } else if (*id == "f0") {
        pos_ += id->size();
        auto args = parse_paren_args(2, "f0");
        if (!args) return args.error();
        base = func_app("f0", args.value());
      } else if (*id == "pk_sigma" || *id == "pk_psi" || *id == "pk_delta") {
        std::string op(*id);
        pos_ += id->size();
        auto args = parse_paren_args(2, op.c_str());
        if (!args) return args.error();
        base = op == "pk_sigma" ? pk_sigma(args.value()[0], args.value()[1])
               : op == "pk_psi" ? pk_psi(args.value()[0], args.value()[1])
                                : pk_delta(args.value()[0], args.value()[1]);
      } else if (*id == "sv") {
        pos_ += id->size();
        auto args = parse_paren_args(3, "sv");
        if (!args) return args.error();
        base = sv(args.value()[0], args.value()[1], args.value()[2]);
      } else if (*id == "enc") {
        pos_ += id->size();
        if (!eat_symbol("{")) return err("'{' after 'enc'");
        auto msg = parse_expr();
        if (!msg) return msg;
        if (!eat_symbol("}")) return err("'}'");
        if (!eat_symbol("[")) return err("'['");
        auto key = parse_expr();
        if (!key) return key;
        if (!eat_symbol("]")) return err("']'");
        base = encrypted(msg.value(), key.value());
      } else if (*id == "unrec") {
        pos_ += id->size();
        if (!eat_symbol("{")) return err("'{' after 'unrec'");
        auto msg = parse_expr();
        if (!msg) return msg;
        if (!eat_symbol("}")) return err("'}'");
        if (!eat_symbol("[")) return err("'['");
        auto p = parse_expr();
        if (!p) return p;
        if (!eat_symbol("]")) return err("']'");
        base = unrecognized(msg.value(), p.value());
      } else if (*id == "sig") {
        pos_ += id->size();
        if (!eat_symbol("[")) return err("'[' after 'sig'");
        auto msg = parse_expr();
        if (!msg) return msg;
        if (!eat_symbol("]")) return err("']'");
        if (!eat_symbol("[")) return err("'['");
        auto key = parse_expr();
        if (!key) return key;
        if (!eat_symbol("]")) return err("']'");
        base = signed_msg(msg.value(), key.value());
      } else if (is_reserved(*id)) {
        return err("expression (found keyword '" + std::string(*id) + "')");
      } else {
        std::string name(*id);
        pos_ += id->size();
        if (eat_symbol("(")) {  // uninterpreted function application
          std::vector<NodeRef> args;
          do {
            auto arg = parse_expr();
            if (!arg) return arg;
            args.push_back(arg.value());
          } while (eat_symbol(","));
          if (!eat_symbol(")")) return err("')'");
          base = func_app(std::move(name), std::move(args));
        } else {
          base = atom(std::move(name));
        }
      }
    } else {
      return err("expression");
    }
    if (!base) return base;

    // optional source annotations: X from(Q)
    while (true) {
      auto save = pos_;
      if (!eat_keyword("from")) break;
      if (!eat_symbol("(")) {
        pos_ = save;  // 'from' belonged to an enclosing construct
        break;
      }
      auto q = parse_expr();
      if (!q) return q;
      if (!eat_symbol(")")) return err("')'");
      base = from_tagged(base.value(), q.value());
    }
    return base;
  }

  Result<std::vector<NodeRef>, ParseError> parse_paren_args(std::size_t n,
                                                            const char* what) {
    if (!eat_symbol("("))
      return ParseError{pos_, std::string("'(' after '") + what + "'"};
    std::vector<NodeRef> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i && !eat_symbol(",")) return ParseError{pos_, "','"};
      auto arg = parse_expr();
      if (!arg) return arg.error();
      out.push_back(arg.value());
    }
    if (!eat_symbol(")")) return ParseError{pos_, "')'"};
    return out;
  }

  static bool is_reserved(std::string_view id) {
    static constexpr std::string_view kReserved[] = {
        "believes", "received", "said", "says", "has", "controls", "fresh",
        "sharedkey", "enc", "sig", "pk_sigma", "pk_psi", "pk_delta", "sv",
        "from", "f0", "inv", "unrec", "not", "and"};
    for (auto kw : kReserved)
      if (kw == id) return true;
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Result<NodeRef, ParseError> parse_formula(std::string_view text) {
  return FormulaParser(text).parse();
}

}  // namespace cloudauth::svo
