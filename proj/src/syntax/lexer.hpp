#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tyfix/syntax.hpp"

namespace tyfix::syntax::detail {

enum class TokenKind { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
  TokenKind kind;
  std::string text;
  Position start;
  Position end;
};

/// Tokenizes Python source, producing NEWLINE/INDENT/DEDENT tokens with
/// implicit line joining inside brackets. Throws SyntaxError.
std::vector<Token> tokenize(std::string_view source);

}  // namespace tyfix::syntax::detail
