#include "lexer.hpp"

#include <array>
#include <cctype>
#include <cstring>

namespace tyfix::syntax::detail {
namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

// Longest first.
constexpr std::array<std::string_view, 49> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "==", "!=", "<=", ">=", "**", "//",
    "<<", ">>", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "+", "-",
    "*", "/", "%", "@", "<", ">", "=", ".", ",", ":", ";", "(", ")", "[", "]",
    "{", "}", "&", "|", "^", "~", "!", "`"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (handle_indentation()) continue;
      }
      char c = src_[pos_];
      if (c == '\n' || c == '\r') {
        consume_newline_char();
        if (depth_ == 0 && !at_line_start_) {
          emit(TokenKind::Newline, "", cur(), cur());
        }
        at_line_start_ = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\f') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') advance();
        continue;
      }
      if (c == '\\') {
        Position p = cur();
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '\n' || src_[pos_] == '\r')) {
          consume_newline_char();
          continue;
        }
        throw SyntaxError("unexpected character after line continuation", p.line, p.col);
      }
      at_line_start_ = false;
      lex_token();
    }
    Position p = cur();
    if (depth_ > 0) throw SyntaxError("unexpected EOF: unclosed bracket", p.line, p.col);
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline &&
        tokens_.back().kind != TokenKind::Dedent) {
      emit(TokenKind::Newline, "", p, p);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::Dedent, "", p, p);
    }
    emit(TokenKind::End, "", p, p);
    return std::move(tokens_);
  }

 private:
  Position cur() const { return {line_, col_}; }

  void advance() {
    ++pos_;
    ++col_;
  }

  void consume_newline_char() {
    if (src_[pos_] == '\r' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++pos_;
    ++pos_;
    ++line_;
    col_ = 0;
  }

  void emit(TokenKind kind, std::string text, Position start, Position end) {
    tokens_.push_back(Token{kind, std::move(text), start, end});
  }

  // Returns true when the line was blank/comment-only and consumed.
  bool handle_indentation() {
    int width = 0;
    std::size_t p = pos_;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\f')) {
      if (src_[p] == '\t') {
        width = (width / 8 + 1) * 8;
      } else if (src_[p] == ' ') {
        ++width;
      } else {
        width = 0;
      }
      ++p;
    }
    if (p >= src_.size() || src_[p] == '#' || src_[p] == '\n' || src_[p] == '\r') {
      while (p < src_.size() && src_[p] != '\n' && src_[p] != '\r') ++p;
      col_ += static_cast<int>(p - pos_);
      pos_ = p;
      if (pos_ < src_.size()) consume_newline_char();
      return true;
    }
    col_ += static_cast<int>(p - pos_);
    pos_ = p;
    at_line_start_ = false;
    Position here = cur();
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(TokenKind::Indent, "", here, here);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(TokenKind::Dedent, "", here, here);
      }
      if (width != indents_.back()) {
        throw SyntaxError("unindent does not match any outer indentation level", here.line,
                          here.col);
      }
    }
    return false;
  }

  void lex_token() {
    Position start = cur();
    unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (is_ident_start(c)) {
      std::size_t b = pos_;
      while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) advance();
      std::string_view word = src_.substr(b, pos_ - b);
      if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"') && is_string_prefix(word)) {
        lex_string(b, start);
        return;
      }
      emit(TokenKind::Name, std::string(word), start, cur());
      return;
    }
    if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      lex_number(start);
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(pos_, start);
      return;
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        if (op == "!" || op == "`") break;
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        if (op == "(" || op == "[" || op == "{") ++depth_;
        if (op == ")" || op == "]" || op == "}") {
          if (depth_ == 0) throw SyntaxError("unmatched '" + std::string(op) + "'", start.line, start.col);
          --depth_;
        }
        emit(TokenKind::Op, std::string(op), start, cur());
        return;
      }
    }
    throw SyntaxError(std::string("invalid character '") + static_cast<char>(c) + "'", start.line,
                      start.col);
  }

  static bool is_string_prefix(std::string_view w) {
    if (w.size() > 2) return false;
    for (char ch : w) {
      char l = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
    }
    return true;
  }

  void lex_number(Position start) {
    std::size_t b = pos_;
    auto digits = [&](auto pred) {
      while (pos_ < src_.size() && (pred(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
    };
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() && std::strchr("xXoObB", src_[pos_ + 1])) {
      advance();
      advance();
      digits([](unsigned char ch) { return std::isxdigit(ch) != 0; });
    } else {
      digits([](unsigned char ch) { return std::isdigit(ch) != 0; });
      if (pos_ < src_.size() && src_[pos_] == '.') {
        advance();
        digits([](unsigned char ch) { return std::isdigit(ch) != 0; });
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        int save_col = col_;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits([](unsigned char ch) { return std::isdigit(ch) != 0; });
        } else {
          pos_ = save;
          col_ = save_col;
        }
      }
      if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) advance();
    }
    if (pos_ < src_.size() && is_ident_start(static_cast<unsigned char>(src_[pos_]))) {
      throw SyntaxError("invalid number literal", start.line, start.col);
    }
    emit(TokenKind::Number, std::string(src_.substr(b, pos_ - b)), start, cur());
  }

  void lex_string(std::size_t begin, Position start) {
    char quote = src_[pos_];
    bool triple = src_.substr(pos_, 3) == std::string(3, quote);
    std::size_t qlen = triple ? 3 : 1;
    for (std::size_t i = 0; i < qlen; ++i) advance();
    for (;;) {
      if (pos_ >= src_.size()) throw SyntaxError("unterminated string literal", start.line, start.col);
      char ch = src_[pos_];
      if (ch == '\\') {
        advance();
        if (pos_ >= src_.size()) continue;
        if (src_[pos_] == '\n' || src_[pos_] == '\r') {
          consume_newline_char();
        } else {
          advance();
        }
        continue;
      }
      if (ch == '\n' || ch == '\r') {
        if (!triple) throw SyntaxError("unterminated string literal", start.line, start.col);
        consume_newline_char();
        continue;
      }
      if (ch == quote && (!triple || src_.substr(pos_, 3) == std::string(3, quote))) {
        for (std::size_t i = 0; i < qlen; ++i) advance();
        break;
      }
      advance();
    }
    emit(TokenKind::String, std::string(src_.substr(begin, pos_ - begin)), start, cur());
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 0;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace tyfix::syntax::detail
