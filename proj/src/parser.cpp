#include <cctype>
#include <string_view>

#include "lfikit/syntax.hpp"

// Recursive-descent parser for the ASCII formula grammar:
//
//   formula := or ('->' formula)?            right-associative
//   or      := and ('|' and)*                left-associative
//   and     := unary ('&' unary)*            left-associative
//   unary   := '~' unary | '*' unary | quantified | primary
//   quantified := ('forall'|'exists') IDENT '.' formula   (extends maximally
//                                                          to the right)
//   primary := '(' formula ')' | NAME '(' term,... ')' | NAME | term '=' term
//
// Names starting with '@' followed by digits are domain constants.

namespace lfikit {

namespace {

struct Token {
  enum class Kind {
    Ident, DomainConst, LParen, RParen, Comma, Dot, Tilde, Star, Amp, Bar,
    Arrow, Equals, Forall, Exists, End
  };
  Kind kind;
  std::string text;
  std::size_t offset;
  std::size_t number = 0;  // DomainConst
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      current_.text = "";
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': current_ = {Token::Kind::LParen, "(", pos_++}; return;
      case ')': current_ = {Token::Kind::RParen, ")", pos_++}; return;
      case ',': current_ = {Token::Kind::Comma, ",", pos_++}; return;
      case '.': current_ = {Token::Kind::Dot, ".", pos_++}; return;
      case '~': current_ = {Token::Kind::Tilde, "~", pos_++}; return;
      case '*': current_ = {Token::Kind::Star, "*", pos_++}; return;
      case '&': current_ = {Token::Kind::Amp, "&", pos_++}; return;
      case '|': current_ = {Token::Kind::Bar, "|", pos_++}; return;
      case '=': current_ = {Token::Kind::Equals, "=", pos_++}; return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          current_ = {Token::Kind::Arrow, "->", pos_};
          pos_ += 2;
          return;
        }
        throw ParseError("unexpected character '-'", pos_);
      case '@': {
        std::size_t start = pos_++;
        std::size_t begin = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
        if (pos_ == begin) throw ParseError("expected digits after '@'", pos_);
        current_.kind = Token::Kind::DomainConst;
        current_.text = std::string(text_.substr(start, pos_ - start));
        current_.offset = start;
        current_.number = std::stoull(std::string(text_.substr(begin, pos_ - begin)));
        return;
      }
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word == "forall")
        current_ = {Token::Kind::Forall, word, start};
      else if (word == "exists")
        current_ = {Token::Kind::Exists, word, start};
      else
        current_ = {Token::Kind::Ident, word, start};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

class Parser {
public:
  Parser(std::string_view text, const Signature& sig, ParseOptions opts)
      : lex_(text), sig_(sig), opts_(opts) {}

  Formula parse() {
    Formula f = parse_imp();
    expect_end();
    return f;
  }

  Term parse_single_term() {
    Term t = parse_term_expr();
    expect_end();
    return t;
  }

private:
  void expect_end() {
    if (lex_.peek().kind != Token::Kind::End)
      throw ParseError("unexpected trailing input", lex_.peek().offset);
  }

  Token expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k)
      throw ParseError("expected " + what, lex_.peek().offset);
    return lex_.take();
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (lex_.peek().kind == Token::Kind::Arrow) {
      lex_.take();
      return Formula::imp(std::move(lhs), parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().kind == Token::Kind::Bar) {
      lex_.take();
      f = Formula::disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex_.peek().kind == Token::Kind::Amp) {
      lex_.take();
      f = Formula::conj(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (lex_.peek().kind) {
      case Token::Kind::Tilde:
        lex_.take();
        return Formula::neg(parse_unary());
      case Token::Kind::Star:
        lex_.take();
        return Formula::cons(parse_unary());
      case Token::Kind::Forall:
      case Token::Kind::Exists: {
        Token q = lex_.take();
        Token v = expect(Token::Kind::Ident, "variable after quantifier");
        if (!std::islower(static_cast<unsigned char>(v.text[0])))
          throw ParseError("variables must start lowercase", v.offset);
        if (sig_.is_constant(v.text) || sig_.function_arity(v.text) ||
            sig_.predicate_arity(v.text))
          throw ParseError("'" + v.text + "' is a declared symbol, not a variable",
                           v.offset);
        expect(Token::Kind::Dot, "'.' after quantified variable");
        Formula body = parse_imp();  // quantifier scope extends maximally right
        return q.kind == Token::Kind::Forall
                   ? Formula::forall(v.text, std::move(body))
                   : Formula::exists(v.text, std::move(body));
      }
      default:
        return parse_primary();
    }
  }

  Formula parse_primary() {
    const Token& tok = lex_.peek();
    if (tok.kind == Token::Kind::LParen) {
      lex_.take();
      Formula f = parse_imp();
      expect(Token::Kind::RParen, "')'");
      return f;
    }
    if (tok.kind == Token::Kind::Ident || tok.kind == Token::Kind::DomainConst) {
      // Could be an atom or the left operand of an equality; parse a generic
      // name application first and decide on '='.
      std::size_t start = tok.offset;
      auto [name, args, is_domain, domain_idx] = parse_name_application();
      if (lex_.peek().kind == Token::Kind::Equals) {
        lex_.take();
        Term lhs = finish_term(name, std::move(args), is_domain, domain_idx, start);
        Term rhs = parse_term_expr();
        if (!sig_.has_equality())
          throw ParseError("equality is not enabled in this signature", start);
        return Formula::eq(std::move(lhs), std::move(rhs));
      }
      if (is_domain)
        throw ParseError("domain constant cannot stand as a formula", start);
      auto arity = sig_.predicate_arity(name);
      if (!arity) {
        if (opts_.auto_declare_predicates && !sig_.is_constant(name) &&
            !sig_.function_arity(name)) {
          sig_.add_predicate(name, static_cast<unsigned>(args.size()));
          arity = static_cast<unsigned>(args.size());
        } else {
          throw ParseError("undeclared predicate '" + name + "'", start);
        }
      }
      if (*arity != args.size())
        throw ParseError("predicate '" + name + "' expects " +
                             std::to_string(*arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         start);
      return Formula::atom(name, std::move(args));
    }
    throw ParseError("expected formula", tok.offset);
  }

  struct NameApp {
    std::string name;
    std::vector<Term> args;
    bool is_domain = false;
    std::size_t domain_idx = 0;
  };

  NameApp parse_name_application() {
    const Token tok = lex_.take();
    if (tok.kind == Token::Kind::DomainConst)
      return {tok.text, {}, true, tok.number};
    NameApp out;
    out.name = tok.text;
    if (lex_.peek().kind == Token::Kind::LParen) {
      lex_.take();
      out.args.push_back(parse_term_expr());
      while (lex_.peek().kind == Token::Kind::Comma) {
        lex_.take();
        out.args.push_back(parse_term_expr());
      }
      expect(Token::Kind::RParen, "')'");
    }
    return out;
  }

  Term finish_term(const std::string& name, std::vector<Term> args,
                   bool is_domain, std::size_t domain_idx, std::size_t offset) {
    if (is_domain) return Term::domain_const(domain_idx);
    if (!args.empty()) {
      auto ar = sig_.function_arity(name);
      if (!ar)
        throw ParseError("undeclared function '" + name + "'", offset);
      if (*ar != args.size())
        throw ParseError("function '" + name + "' expects " +
                             std::to_string(*ar) + " argument(s)",
                         offset);
      return Term::app(name, std::move(args));
    }
    if (sig_.is_constant(name)) return Term::constant(name);
    if (sig_.predicate_arity(name))
      throw ParseError("predicate '" + name + "' used as a term", offset);
    if (sig_.function_arity(name))
      throw ParseError("function '" + name + "' needs arguments", offset);
    if (!std::islower(static_cast<unsigned char>(name[0])))
      throw ParseError("undeclared symbol '" + name + "'", offset);
    return Term::var(name);
  }

  Term parse_term_expr() {
    const Token& tok = lex_.peek();
    if (tok.kind == Token::Kind::Ident || tok.kind == Token::Kind::DomainConst) {
      std::size_t start = tok.offset;
      auto [name, args, is_domain, idx] = parse_name_application();
      return finish_term(name, std::move(args), is_domain, idx, start);
    }
    throw ParseError("expected term", tok.offset);
  }

  Lexer lex_;
  Signature sig_;  // local copy; auto-declared predicates land here
  ParseOptions opts_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig,
                      ParseOptions opts) {
  Parser p(text, sig, opts);
  return p.parse();
}

Term parse_term(std::string_view text, const Signature& sig) {
  Parser p(text, sig, {});
  return p.parse_single_term();
}

// ---- Printer ----
//
// The printed form reparses to the same AST. Quantified subformulas are
// always parenthesized when they occur under a connective, since their scope
// would otherwise swallow everything to the right.

namespace {

int level_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Imp: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
    case Formula::Kind::Eq: return 4;
    case Formula::Kind::Atom: return 5;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return 0;
  }
  return 0;
}

void print_formula(const Formula& f, std::string& out);

void print_child(const Formula& f, int min_level, std::string& out) {
  bool parens = f.is_quantifier() || level_of(f) < min_level;
  if (parens) out += "(";
  print_formula(f, out);
  if (parens) out += ")";
}

void print_unary_operand(const Formula& f, std::string& out) {
  bool parens = !(f.kind() == Formula::Kind::Atom || f.is_unary());
  if (parens) out += "(";
  print_formula(f, out);
  if (parens) out += ")";
}

void print_formula(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.pred();
      if (!f.terms().empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ",";
          out += to_string(f.terms()[i]);
        }
        out += ")";
      }
      break;
    case Formula::Kind::Eq:
      out += to_string(f.terms()[0]);
      out += " = ";
      out += to_string(f.terms()[1]);
      break;
    case Formula::Kind::Neg:
      out += "~";
      print_unary_operand(f.child(), out);
      break;
    case Formula::Kind::Cons:
      out += "*";
      print_unary_operand(f.child(), out);
      break;
    case Formula::Kind::And:
      print_child(f.lhs(), 3, out);
      out += " & ";
      print_child(f.rhs(), 4, out);
      break;
    case Formula::Kind::Or:
      print_child(f.lhs(), 2, out);
      out += " | ";
      print_child(f.rhs(), 3, out);
      break;
    case Formula::Kind::Imp:
      print_child(f.lhs(), 2, out);
      out += " -> ";
      print_child(f.rhs(), 1, out);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f.kind() == Formula::Kind::Forall ? "forall " : "exists ";
      out += f.bound_var();
      out += ". ";
      print_formula(f.body(), out);
      break;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t.name();
    case Term::Kind::DomainConst: return "@" + std::to_string(t.domain_index());
    case Term::Kind::App: {
      std::string out = t.name() + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        out += to_string(t.args()[i]);
      }
      out += ")";
      return out;
    }
  }
  return "";
}

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

}  // namespace lfikit
