#pragma once

// Parser for the bracketed problem format:
//
//   [[var g = (13 * 67)]]
//   [[var 22 = 2 * a + 2 * 3]]
//   [[question h = ["x", "y"]]]
//
// Text outside `[[ ... ]]` blocks is ignored. A fraction literal is a single
// token `N/D` without whitespace; otherwise `/` (or `÷`) is division.

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mathcamps/dsl/ast.hpp"
#include "mathcamps/error.hpp"

namespace mathcamps {

namespace detail {

struct Block {
  std::string content;
  std::size_t line;
};

// Splits text into `[[...]]` blocks. Single brackets inside a block (the
// question list) nest; the block ends at the first `]]` seen at depth 0.
inline std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (text.compare(i, 2, "[[") != 0) {
      ++i;
      continue;
    }
    std::size_t start_line = line;
    i += 2;
    int depth = 0;
    std::string content;
    bool closed = false;
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') ++line;
      if (c == '[') {
        ++depth;
      } else if (c == ']') {
        if (depth > 0) {
          --depth;
        } else if (i + 1 < text.size() && text[i + 1] == ']') {
          i += 2;
          closed = true;
          break;
        }
      }
      content.push_back(c);
      ++i;
    }
    if (!closed)
      throw ParseError(ParseErrorKind::malformed_statement, start_line, "unterminated '[[' block");
    blocks.push_back({std::move(content), start_line});
  }
  return blocks;
}

enum class TokKind { number, ident, op, lparen, rparen, lbracket, rbracket, comma, equals, quoted, end };

struct Token {
  TokKind kind;
  std::string text;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::size_t line) : src_(src), line_(line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({TokKind::number, read_number()});
      } else if (c == '-' && operand_expected(out) && pos_ + 1 < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        ++pos_;
        out.push_back({TokKind::number, "-" + read_number()});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({TokKind::ident, std::string(src_.substr(start, pos_ - start))});
      } else if (c == '"' || c == '\'') {
        std::size_t end = src_.find(c, pos_ + 1);
        if (end == std::string_view::npos) fail("unterminated quote");
        out.push_back({TokKind::quoted, std::string(src_.substr(pos_ + 1, end - pos_ - 1))});
        pos_ = end + 1;
      } else if (c == '*' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        out.push_back({TokKind::op, "^"});
        pos_ += 2;
      } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
        out.push_back({TokKind::op, std::string(1, c)});
        ++pos_;
      } else if (src_.compare(pos_, 2, "\xC3\x97") == 0) {  // ×
        out.push_back({TokKind::op, "*"});
        pos_ += 2;
      } else if (src_.compare(pos_, 2, "\xC3\xB7") == 0) {  // ÷
        out.push_back({TokKind::op, "/"});
        pos_ += 2;
      } else if (src_.compare(pos_, 3, "\xE2\x88\x92") == 0) {  // − (U+2212)
        out.push_back({TokKind::op, "-"});
        pos_ += 3;
      } else if (c == '(') {
        out.push_back({TokKind::lparen, "("});
        ++pos_;
      } else if (c == ')') {
        out.push_back({TokKind::rparen, ")"});
        ++pos_;
      } else if (c == '[') {
        out.push_back({TokKind::lbracket, "["});
        ++pos_;
      } else if (c == ']') {
        out.push_back({TokKind::rbracket, "]"});
        ++pos_;
      } else if (c == ',') {
        out.push_back({TokKind::comma, ","});
        ++pos_;
      } else if (c == '=') {
        out.push_back({TokKind::equals, "="});
        ++pos_;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({TokKind::end, ""});
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseErrorKind::malformed_statement, line_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  static bool operand_expected(const std::vector<Token>& toks) {
    if (toks.empty()) return true;
    switch (toks.back().kind) {
      case TokKind::op:
      case TokKind::lparen:
      case TokKind::equals:
      case TokKind::comma:
      case TokKind::lbracket: return true;
      default: return false;
    }
  }

  // digits, optional `.digits` or `/digits` directly attached.
  std::string read_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      digits();
    } else if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
               std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string_view src_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, std::size_t line) : toks_(std::move(toks)), line_(line) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool at_end() const { return peek().kind == TokKind::end; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseErrorKind::malformed_statement, line_, msg);
  }

  void expect(TokKind kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }

  VarName var_name(const std::string& ident) const {
    if (ident.size() != 1 || !is_valid_var_name(ident[0]))
      throw ParseError(ParseErrorKind::invalid_variable_name, line_,
                       "variable names must be one lowercase letter, got '" + ident + "'");
    return ident[0];
  }

  // additive := multiplicative (('+'|'-') multiplicative)*
  ExprPtr parse_expr() {
    auto left = parse_term();
    while (peek().kind == TokKind::op && (peek().text == "+" || peek().text == "-")) {
      auto op = next().text == "+" ? BinaryOp::add : BinaryOp::sub;
      left = make_binop(op, left, parse_term());
    }
    return left;
  }

 private:
  ExprPtr parse_term() {
    auto left = parse_power();
    while (peek().kind == TokKind::op && (peek().text == "*" || peek().text == "/")) {
      auto op = next().text == "*" ? BinaryOp::mul : BinaryOp::div;
      left = make_binop(op, left, parse_power());
    }
    return left;
  }

  // power := atom ('^' exponent)?   (right-associative, exponent a whole constant)
  ExprPtr parse_power() {
    auto base = parse_atom();
    if (peek().kind == TokKind::op && peek().text == "^") {
      next();
      auto exponent = parse_power();
      auto* c = std::get_if<Const>(&exponent->node);
      if (!c || !c->value.is_integer() || c->value.is_negative())
        fail("exponent must be a nonnegative whole-number constant");
      return make_binop(BinaryOp::pow, base, exponent);
    }
    return base;
  }

  ExprPtr parse_atom() {
    const Token tok = next();
    switch (tok.kind) {
      case TokKind::number: {
        auto n = ExactNumber::parse(tok.text);
        if (!n) fail("bad number literal '" + tok.text + "'");
        return make_const(*n);
      }
      case TokKind::ident: {
        if ((tok.text == "sqrt" || tok.text == "cbrt") && peek().kind == TokKind::lparen) {
          next();
          auto inner = parse_expr();
          expect(TokKind::rparen, "')'");
          return make_root(tok.text == "sqrt" ? 2 : 3, inner);
        }
        return make_var(var_name(tok.text));
      }
      case TokKind::lparen: {
        auto inner = parse_expr();
        expect(TokKind::rparen, "')'");
        return inner;
      }
      default: fail("expected a number, variable or '('");
    }
  }

  std::vector<Token> toks_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline Question parse_question(const std::string& body, std::size_t line) {
  ExprParser p(Lexer(body, line).run(), line);
  auto alias_tok = p.next();
  if (alias_tok.kind != TokKind::ident) p.fail("question needs an alias");
  Question q;
  q.target_alias = p.var_name(alias_tok.text);
  p.expect(TokKind::equals, "'='");
  auto read_target = [&]() -> VarName {
    auto t = p.next();
    if (t.kind != TokKind::ident && t.kind != TokKind::quoted) p.fail("expected a target variable");
    return p.var_name(t.text);
  };
  if (p.peek().kind == TokKind::lbracket) {
    p.next();
    q.targets.push_back(read_target());
    while (p.peek().kind == TokKind::comma) {
      p.next();
      q.targets.push_back(read_target());
    }
    p.expect(TokKind::rbracket, "']'");
  } else {
    q.targets.push_back(read_target());
  }
  if (!p.at_end()) p.fail("trailing tokens after question");
  return q;
}

inline bool starts_with_keyword(std::string_view s, std::string_view kw) {
  return s.size() > kw.size() && s.substr(0, kw.size()) == kw &&
         std::isspace(static_cast<unsigned char>(s[kw.size()]));
}

}  // namespace detail

/// Parses the bracketed text format into a problem.
inline SymbolicProblem parse_problem(std::string_view text) {
  SymbolicProblem problem;
  bool have_question = false;
  std::size_t question_line = 0;
  std::set<VarName> defined;
  std::set<VarName> seen;

  for (const auto& block : detail::split_blocks(text)) {
    std::string body = block.content;
    auto first = body.find_first_not_of(" \t\r\n");
    body = first == std::string::npos ? std::string() : body.substr(first);

    if (detail::starts_with_keyword(body, "question")) {
      if (have_question)
        throw ParseError(ParseErrorKind::malformed_statement, block.line, "more than one question");
      problem.question = detail::parse_question(body.substr(8), block.line);
      have_question = true;
      question_line = block.line;
      continue;
    }
    if (!detail::starts_with_keyword(body, "var"))
      throw ParseError(ParseErrorKind::malformed_statement, block.line,
                       "block must start with 'var' or 'question'");
    if (have_question)
      throw ParseError(ParseErrorKind::malformed_statement, block.line, "statement after the question");

    detail::ExprParser p(detail::Lexer(body.substr(3), block.line).run(), block.line);
    Statement st;
    st.lhs = p.parse_expr();
    p.expect(detail::TokKind::equals, "'='");
    st.rhs = p.parse_expr();
    if (!p.at_end()) p.fail("trailing tokens in statement");

    if (auto* v = std::get_if<VarRef>(&st.lhs->node)) {
      if (defined.count(v->name))
        throw ParseError(ParseErrorKind::duplicate_definition, block.line,
                         std::string("variable '") + v->name + "' is defined twice");
      if (!seen.count(v->name) && count_var_refs(st.rhs, v->name) == 0) defined.insert(v->name);
    }
    auto vars = statement_vars(st);
    seen.insert(vars.begin(), vars.end());
    problem.statements.push_back(std::move(st));
  }

  if (!have_question) throw ParseError(ParseErrorKind::no_question, 0, "missing question line");
  if (problem.question.targets.empty())
    throw ParseError(ParseErrorKind::no_question, question_line, "empty question");
  for (VarName t : problem.question.targets)
    if (!seen.count(t))
      throw ParseError(ParseErrorKind::malformed_statement, question_line,
                       std::string("question target '") + t + "' appears in no statement");
  return problem;
}

}  // namespace mathcamps
