// Copyright 2026 The ZigZag Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zz/lang.h"

#include <cctype>
#include <functional>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "zz/common.h"

namespace zz {

namespace {

constexpr const char* kKeywords[] = {"func", "var",   "if",    "else",
                                     "while", "for", "return"};

struct Lexed {
  std::vector<Token> tokens;
  std::set<int> vuln_lines;
};

Lexed Lex(std::string_view src) {
  Lexed out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = src.size();
      std::string_view comment = src.substr(i, end - i);
      if (comment.rfind("//@vuln", 0) == 0) out.vuln_lines.insert(line);
      advance(end - i);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = IsKeyword(tok.text) ? Token::Kind::kKeyword
                                     : Token::Kind::kIdentifier;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        ++j;
      }
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = Token::Kind::kIntLiteral;
      advance(j - i);
    } else if (c == '"') {
      size_t j = i + 1;
      while (j < src.size() && src[j] != '"') {
        if (src[j] == '\n') break;
        if (src[j] == '\\') ++j;
        ++j;
      }
      if (j >= src.size() || src[j] != '"') {
        throw SyntaxError(line, col, "unterminated string literal");
      }
      tok.text = std::string(src.substr(i, j + 1 - i));
      tok.kind = Token::Kind::kStrLiteral;
      advance(j + 1 - i);
    } else {
      static const char* kTwoChar[] = {"<=", ">=", "==", "!=", "&&", "||"};
      std::string two(src.substr(i, 2));
      bool matched = false;
      for (const char* op : kTwoChar) {
        if (two == op) {
          tok.text = two;
          tok.kind = Token::Kind::kOperator;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("+-*/%<>=!").find(c) != std::string_view::npos) {
          tok.kind = Token::Kind::kOperator;
        } else if (std::string_view("(){}[],;").find(c) !=
                   std::string_view::npos) {
          tok.kind = Token::Kind::kPunct;
        } else {
          throw SyntaxError(line, col,
                            std::string("unexpected character '") + c + "'");
        }
        tok.text = std::string(1, c);
      }
      advance(tok.text.size());
    }
    out.tokens.push_back(std::move(tok));
  }
  return out;
}

std::string Unescape(const Token& tok) {
  std::string out;
  const std::string& t = tok.text;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] != '\\') {
      out.push_back(t[i]);
      continue;
    }
    ++i;
    switch (t[i]) {
      case 'n':
        out.push_back('\n');
        break;
      case 't':
        out.push_back('\t');
        break;
      case '\\':
        out.push_back('\\');
        break;
      case '"':
        out.push_back('"');
        break;
      default:
        throw SyntaxError(tok.line, tok.column, "unknown escape sequence");
    }
  }
  return out;
}

std::string Escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '"':
        out += "\\\"";
        break;
      default:
        out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

int Precedence(BinOp op) {
  switch (op) {
    case BinOp::kOr:
      return 1;
    case BinOp::kAnd:
      return 2;
    case BinOp::kEq:
    case BinOp::kNe:
      return 3;
    case BinOp::kLt:
    case BinOp::kLe:
    case BinOp::kGt:
    case BinOp::kGe:
      return 4;
    case BinOp::kAdd:
    case BinOp::kSub:
      return 5;
    case BinOp::kMul:
    case BinOp::kDiv:
    case BinOp::kMod:
      return 6;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 7;

bool BinOpFromText(const std::string& text, BinOp* op) {
  static const std::map<std::string, BinOp> kOps = {
      {"+", BinOp::kAdd}, {"-", BinOp::kSub},  {"*", BinOp::kMul},
      {"/", BinOp::kDiv}, {"%", BinOp::kMod},  {"<", BinOp::kLt},
      {"<=", BinOp::kLe}, {">", BinOp::kGt},   {">=", BinOp::kGe},
      {"==", BinOp::kEq}, {"!=", BinOp::kNe},  {"&&", BinOp::kAnd},
      {"||", BinOp::kOr}};
  auto it = kOps.find(text);
  if (it == kOps.end()) return false;
  *op = it->second;
  return true;
}

struct PendingCall {
  std::string callee;
  size_t argc;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(Lexed lexed) : lexed_(std::move(lexed)) {}

  Ast ParseProgram() {
    Ast ast;
    std::set<std::string> names;
    while (!AtEnd()) {
      const Token& start = Peek();
      FunctionDef fn = ParseFunction();
      if (IsBuiltin(fn.name)) {
        throw SyntaxError(start.line, start.column,
                          "function name shadows builtin '" + fn.name + "'");
      }
      if (!names.insert(fn.name).second) {
        throw SyntaxError(start.line, start.column,
                          "duplicate function '" + fn.name + "'");
      }
      ast.functions.push_back(std::move(fn));
    }
    for (const auto& call : calls_) {
      int arity = BuiltinArity(call.callee);
      if (arity < 0) {
        const FunctionDef* fn = ast.Find(call.callee);
        if (fn == nullptr) {
          throw SyntaxError(call.line, call.column,
                            "call to undeclared function '" + call.callee + "'",
                            ErrorCode::kUndeclared);
        }
        arity = static_cast<int>(fn->params.size());
      }
      if (static_cast<size_t>(arity) != call.argc) {
        throw SyntaxError(call.line, call.column,
                          "wrong number of arguments to '" + call.callee + "'");
      }
    }
    return ast;
  }

 private:
  bool AtEnd() const { return pos_ >= lexed_.tokens.size(); }

  const Token& Peek(size_t ahead = 0) const {
    static const Token kEnd{Token::Kind::kPunct, "<eof>", 0, 0};
    if (pos_ + ahead >= lexed_.tokens.size()) {
      if (lexed_.tokens.empty()) return kEnd;
      end_token_ = lexed_.tokens.back();
      end_token_.text = "<eof>";
      return end_token_;
    }
    return lexed_.tokens[pos_ + ahead];
  }

  bool Check(std::string_view text) const {
    return !AtEnd() && Peek().text == text &&
           Peek().kind != Token::Kind::kStrLiteral;
  }

  [[noreturn]] void Fail(const std::string& message) const {
    const Token& t = Peek();
    throw SyntaxError(t.line, t.column, message + " near '" + t.text + "'");
  }

  Token Expect(std::string_view text) {
    if (!Check(text)) Fail("expected '" + std::string(text) + "'");
    return lexed_.tokens[pos_++];
  }

  Token ExpectIdent() {
    if (AtEnd() || Peek().kind != Token::Kind::kIdentifier) {
      Fail("expected identifier");
    }
    return lexed_.tokens[pos_++];
  }

  void Declare(const Token& tok) {
    if (!function_names_.insert(tok.text).second) {
      throw SyntaxError(tok.line, tok.column,
                        "duplicate declaration of '" + tok.text + "'");
    }
    scopes_.back().insert(tok.text);
  }

  void RequireDeclared(const Token& tok) const {
    for (const auto& scope : scopes_) {
      if (scope.count(tok.text)) return;
    }
    throw SyntaxError(tok.line, tok.column,
                      "use of undeclared identifier '" + tok.text + "'",
                      ErrorCode::kUndeclared);
  }

  FunctionDef ParseFunction() {
    Expect("func");
    FunctionDef fn;
    fn.name = ExpectIdent().text;
    function_names_.clear();
    scopes_.assign(1, {});
    Expect("(");
    if (!Check(")")) {
      while (true) {
        Token param = ExpectIdent();
        Declare(param);
        fn.params.push_back(param.text);
        if (!Check(",")) break;
        Expect(",");
      }
    }
    Expect(")");
    depth_ = 0;
    fn.body = ParseBlock(/*new_scope=*/false);
    return fn;
  }

  std::vector<Stmt> ParseBlock(bool new_scope) {
    Expect("{");
    if (new_scope) scopes_.emplace_back();
    ++depth_;
    std::vector<Stmt> stmts;
    while (!Check("}")) {
      if (AtEnd()) Fail("unterminated block");
      stmts.push_back(ParseStatement());
    }
    --depth_;
    if (new_scope) scopes_.pop_back();
    Expect("}");
    return stmts;
  }

  LineId NextLine() { return ++next_line_; }

  bool MarkedVuln(const Token& start) const {
    return lexed_.vuln_lines.count(start.line) > 0;
  }

  Stmt ParseStatement() {
    const Token start = Peek();
    if (Check("if")) return ParseIf();
    if (Check("while")) {
      Stmt s;
      s.kind = Stmt::Kind::kWhile;
      s.line = NextLine();
      s.vuln = MarkedVuln(start);
      Expect("while");
      Expect("(");
      s.exprs.push_back(ParseExpr());
      Expect(")");
      s.body = ParseBlock(true);
      return s;
    }
    if (Check("for")) {
      Stmt s;
      s.kind = Stmt::Kind::kFor;
      s.line = NextLine();
      s.vuln = MarkedVuln(start);
      Expect("for");
      Expect("(");
      scopes_.emplace_back();
      s.header.push_back(ParseSimple(/*in_header=*/true));
      Expect(";");
      s.exprs.push_back(ParseExpr());
      Expect(";");
      s.header.push_back(ParseSimple(/*in_header=*/true));
      Expect(")");
      s.body = ParseBlock(true);
      scopes_.pop_back();
      return s;
    }
    if (Check("return")) {
      Stmt s;
      s.kind = Stmt::Kind::kReturn;
      s.line = NextLine();
      s.vuln = MarkedVuln(start);
      Expect("return");
      if (!Check(";")) s.exprs.push_back(ParseExpr());
      Expect(";");
      return s;
    }
    Stmt s = ParseSimple(/*in_header=*/false);
    Expect(";");
    return s;
  }

  Stmt ParseIf() {
    const Token start = Peek();
    Stmt s;
    s.kind = Stmt::Kind::kIf;
    s.line = NextLine();
    s.vuln = MarkedVuln(start);
    Expect("if");
    Expect("(");
    s.exprs.push_back(ParseExpr());
    Expect(")");
    s.body = ParseBlock(true);
    if (Check("else")) {
      Expect("else");
      if (Check("if")) {
        s.else_body.push_back(ParseIf());
      } else {
        s.else_body = ParseBlock(true);
      }
    }
    return s;
  }

  // Declarations, assignments and call statements, without the trailing
  // semicolon. Header statements of for-loops never carry a vuln flag.
  Stmt ParseSimple(bool in_header) {
    const Token start = Peek();
    Stmt s;
    s.line = NextLine();
    s.vuln = !in_header && MarkedVuln(start);
    if (Check("var")) {
      Expect("var");
      Token name = ExpectIdent();
      s.name = name.text;
      if (Check("[")) {
        Expect("[");
        if (in_header || depth_ != 1) {
          throw SyntaxError(name.line, name.column,
                            "array declarations must be at function top level");
        }
        if (AtEnd() || Peek().kind != Token::Kind::kIntLiteral) {
          Fail("expected array length");
        }
        s.kind = Stmt::Kind::kArrayDecl;
        s.array_size = ParseIntLiteral(lexed_.tokens[pos_++]);
        if (s.array_size <= 0) Fail("array length must be positive");
        Expect("]");
        Declare(name);
        return s;
      }
      s.kind = Stmt::Kind::kVarDecl;
      Expect("=");
      s.exprs.push_back(ParseExpr());
      Declare(name);
      return s;
    }
    Token name = ExpectIdent();
    if (Check("(")) {
      s.kind = Stmt::Kind::kCall;
      s.exprs.push_back(ParseCallRest(name));
      return s;
    }
    RequireDeclared(name);
    s.name = name.text;
    if (Check("[")) {
      Expect("[");
      s.kind = Stmt::Kind::kIndexAssign;
      s.exprs.push_back(ParseExpr());
      Expect("]");
      Expect("=");
      s.exprs.push_back(ParseExpr());
      return s;
    }
    s.kind = Stmt::Kind::kAssign;
    Expect("=");
    s.exprs.push_back(ParseExpr());
    return s;
  }

  int64_t ParseIntLiteral(const Token& tok) {
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(),
                                     tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
      throw SyntaxError(tok.line, tok.column, "integer literal out of range");
    }
    return value;
  }

  Expr ParseCallRest(const Token& name) {
    Expect("(");
    std::vector<Expr> args;
    if (!Check(")")) {
      while (true) {
        args.push_back(ParseExpr());
        if (!Check(",")) break;
        Expect(",");
      }
    }
    Expect(")");
    calls_.push_back({name.text, args.size(), name.line, name.column});
    return Expr::Call(name.text, std::move(args));
  }

  Expr ParseExpr(int min_prec = 1) {
    Expr lhs = ParseUnary();
    while (!AtEnd() && Peek().kind == Token::Kind::kOperator) {
      BinOp op;
      if (!BinOpFromText(Peek().text, &op)) break;
      const int prec = Precedence(op);
      if (prec < min_prec) break;
      ++pos_;
      Expr rhs = ParseExpr(prec + 1);
      lhs = Expr::Binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr ParseUnary() {
    if (Check("-")) {
      ++pos_;
      return Expr::Unary(UnOp::kNeg, ParseUnary());
    }
    if (Check("!")) {
      ++pos_;
      return Expr::Unary(UnOp::kNot, ParseUnary());
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    if (AtEnd()) Fail("unexpected end of input");
    const Token tok = Peek();
    switch (tok.kind) {
      case Token::Kind::kIntLiteral:
        ++pos_;
        return Expr::Int(ParseIntLiteral(tok));
      case Token::Kind::kStrLiteral:
        ++pos_;
        return Expr::Str(Unescape(tok));
      case Token::Kind::kIdentifier: {
        ++pos_;
        if (Check("(")) return ParseCallRest(tok);
        RequireDeclared(tok);
        if (Check("[")) {
          Expect("[");
          Expr index = ParseExpr();
          Expect("]");
          return Expr::Index(tok.text, std::move(index));
        }
        return Expr::Var(tok.text);
      }
      default:
        break;
    }
    if (Check("(")) {
      Expect("(");
      Expr inner = ParseExpr();
      Expect(")");
      return inner;
    }
    Fail("expected expression");
  }

  Lexed lexed_;
  size_t pos_ = 0;
  mutable Token end_token_;
  LineId next_line_ = 0;
  int depth_ = 0;
  std::vector<std::set<std::string>> scopes_;
  std::set<std::string> function_names_;
  std::vector<PendingCall> calls_;
};

void PrintExprTo(const Expr& e, int min_prec, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::kInt:
      out += std::to_string(e.int_value);
      return;
    case Expr::Kind::kStr:
      out += Escape(e.text);
      return;
    case Expr::Kind::kVar:
      out += e.text;
      return;
    case Expr::Kind::kIndex:
      out += e.text;
      out += "[";
      PrintExprTo(e.args[0], 1, out);
      out += "]";
      return;
    case Expr::Kind::kCall:
      out += e.text;
      out += "(";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        PrintExprTo(e.args[i], 1, out);
      }
      out += ")";
      return;
    case Expr::Kind::kUnary: {
      const bool paren = kUnaryPrecedence < min_prec;
      if (paren) out += "(";
      out += UnOpText(e.un_op);
      PrintExprTo(e.args[0], kUnaryPrecedence, out);
      if (paren) out += ")";
      return;
    }
    case Expr::Kind::kBinary: {
      const int prec = Precedence(e.bin_op);
      const bool paren = prec < min_prec;
      if (paren) out += "(";
      PrintExprTo(e.args[0], prec, out);
      out += " ";
      out += BinOpText(e.bin_op);
      out += " ";
      PrintExprTo(e.args[1], prec + 1, out);
      if (paren) out += ")";
      return;
    }
  }
}

std::string SimpleText(const Stmt& s) {
  std::string out;
  switch (s.kind) {
    case Stmt::Kind::kVarDecl:
      out = "var " + s.name + " = " + PrintExpr(s.exprs[0]);
      break;
    case Stmt::Kind::kArrayDecl:
      out = "var " + s.name + "[" + std::to_string(s.array_size) + "]";
      break;
    case Stmt::Kind::kAssign:
      out = s.name + " = " + PrintExpr(s.exprs[0]);
      break;
    case Stmt::Kind::kIndexAssign:
      out = s.name + "[" + PrintExpr(s.exprs[0]) + "] = " +
            PrintExpr(s.exprs[1]);
      break;
    case Stmt::Kind::kCall:
      out = PrintExpr(s.exprs[0]);
      break;
    default:
      break;
  }
  return out;
}

void PrintStmts(const std::vector<Stmt>& stmts, int indent, std::string& out);

void PrintStmt(const Stmt& s, int indent, std::string& out) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const char* marker = s.vuln ? " //@vuln" : "";
  out += pad;
  out += PrintStmtHeader(s);
  switch (s.kind) {
    case Stmt::Kind::kIf:
    case Stmt::Kind::kWhile:
    case Stmt::Kind::kFor:
      out += " {";
      out += marker;
      out += "\n";
      PrintStmts(s.body, indent + 1, out);
      out += pad + "}";
      if (s.kind == Stmt::Kind::kIf && !s.else_body.empty()) {
        out += " else {\n";
        PrintStmts(s.else_body, indent + 1, out);
        out += pad + "}";
      }
      out += "\n";
      return;
    default:
      out += ";";
      out += marker;
      out += "\n";
      return;
  }
}

void PrintStmts(const std::vector<Stmt>& stmts, int indent, std::string& out) {
  for (const auto& s : stmts) PrintStmt(s, indent, out);
}

}  // namespace

const char* TokenKindName(Token::Kind kind) {
  switch (kind) {
    case Token::Kind::kKeyword:
      return "keyword";
    case Token::Kind::kIdentifier:
      return "identifier";
    case Token::Kind::kIntLiteral:
    case Token::Kind::kStrLiteral:
      return "literal";
    case Token::Kind::kOperator:
      return "operator";
    case Token::Kind::kPunct:
      return "punctuation";
  }
  return "?";
}

bool IsKeyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

std::vector<Token> Tokenize(std::string_view source) {
  return Lex(source).tokens;
}

std::vector<Token> Tokenize(const Ast& ast) { return Tokenize(PrettyPrint(ast)); }

std::vector<Token> Tokenize(const FunctionDef& fn) {
  return Tokenize(PrettyPrint(fn));
}

std::string JoinTokens(const std::vector<Token>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].text;
  }
  return out;
}

Ast Parse(std::string_view source) {
  Parser parser(Lex(source));
  return parser.ParseProgram();
}

std::string PrintExpr(const Expr& expr) {
  std::string out;
  PrintExprTo(expr, 1, out);
  return out;
}

std::string PrintStmtHeader(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::kIf:
      return "if (" + PrintExpr(s.exprs[0]) + ")";
    case Stmt::Kind::kWhile:
      return "while (" + PrintExpr(s.exprs[0]) + ")";
    case Stmt::Kind::kFor:
      return "for (" + SimpleText(s.header[0]) + "; " + PrintExpr(s.exprs[0]) +
             "; " + SimpleText(s.header[1]) + ")";
    case Stmt::Kind::kReturn:
      return s.exprs.empty() ? "return" : "return " + PrintExpr(s.exprs[0]);
    default:
      return SimpleText(s);
  }
}

std::string PrettyPrint(const FunctionDef& fn) {
  std::string out = "func " + fn.name + "(";
  for (size_t i = 0; i < fn.params.size(); ++i) {
    if (i) out += ", ";
    out += fn.params[i];
  }
  out += ") {\n";
  PrintStmts(fn.body, 1, out);
  out += "}\n";
  return out;
}

std::string PrettyPrint(const Ast& ast) {
  std::string out;
  for (size_t i = 0; i < ast.functions.size(); ++i) {
    if (i) out += "\n";
    out += PrettyPrint(ast.functions[i]);
  }
  return out;
}

std::string DumpAst(const Ast& ast) {
  static const char* kKindNames[] = {"var",   "array", "assign",
                                     "store", "if",    "while",
                                     "for",   "call",  "return"};
  std::string out;
  for (const auto& fn : ast.functions) {
    out += "func " + fn.name + "/" + std::to_string(fn.params.size()) + "\n";
    std::function<void(const std::vector<Stmt>&, int)> walk =
        [&](const std::vector<Stmt>& stmts, int depth) {
          for (const auto& s : stmts) {
            out += std::string(static_cast<size_t>(depth) * 2, ' ');
            out += "[" + std::to_string(s.line) + "] ";
            out += kKindNames[static_cast<int>(s.kind)];
            out += s.vuln ? " vuln " : " - ";
            out += PrintStmtHeader(s) + "\n";
            walk(s.header, depth + 1);
            walk(s.body, depth + 1);
            if (!s.else_body.empty()) {
              out += std::string(static_cast<size_t>(depth) * 2, ' ') + "else\n";
              walk(s.else_body, depth + 1);
            }
          }
        };
    walk(fn.body, 1);
  }
  return out;
}

LineMap Renumber(Ast& ast) {
  LineMap map;
  LineId next = 0;
  for (auto& fn : ast.functions) {
    ForEachStmt(fn.body, [&](Stmt& s) {
      const LineId fresh = ++next;
      if (s.line != kNoLine) map[s.line].insert(fresh);
      s.line = fresh;
    });
  }
  return map;
}

void Validate(const Ast& ast) { Parse(PrettyPrint(ast)); }

}  // namespace zz
