#include "vidsearch/query_language.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "vidsearch/error.hpp"
#include "vidsearch/text.hpp"

namespace vidsearch {

namespace {

enum class TokenKind { kFlag, kArrow, kComma, kWord, kQuoted, kThreshold };

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string text;  // flag name, word, quoted content or threshold content
};

[[noreturn]] void fail(std::size_t offset, const std::string& message) {
  throw Error(ErrorCode::kParseError, message + " at offset " + std::to_string(offset), offset);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_delimiter(char c) { return is_space(c) || c == ',' || c == '(' || c == ')' || c == '"'; }

std::vector<Token> lex(std::string_view q) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < q.size()) {
    const char c = q[i];
    if (is_space(c)) {
      ++i;
    } else if (q.substr(i, 3) == "-->") {
      tokens.push_back({TokenKind::kArrow, i, "-->"});
      i += 3;
    } else if (c == '-') {
      const std::size_t start = i;
      while (i < q.size() && !is_delimiter(q[i])) ++i;
      tokens.push_back({TokenKind::kFlag, start, std::string(q.substr(start, i - start))});
    } else if (c == ',') {
      tokens.push_back({TokenKind::kComma, i, ","});
      ++i;
    } else if (c == '"') {
      const std::size_t start = i++;
      std::string content;
      bool closed = false;
      while (i < q.size()) {
        if (q[i] == '\\' && i + 1 < q.size()) {
          content.push_back(q[i + 1]);
          i += 2;
        } else if (q[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          content.push_back(q[i++]);
        }
      }
      if (!closed) fail(start, "unterminated quote");
      tokens.push_back({TokenKind::kQuoted, start, std::move(content)});
    } else if (c == '(') {
      const std::size_t start = i;
      const std::size_t close = q.find(')', i);
      if (close == std::string_view::npos) fail(start, "unterminated parenthesis");
      tokens.push_back({TokenKind::kThreshold, start, std::string(q.substr(i + 1, close - i - 1))});
      i = close + 1;
    } else if (c == ')') {
      fail(i, "unexpected ')'");
    } else {
      const std::size_t start = i;
      while (i < q.size() && !is_delimiter(q[i])) ++i;
      tokens.push_back({TokenKind::kWord, start, std::string(q.substr(start, i - start))});
    }
  }
  return tokens;
}

std::optional<Category> flag_category(std::string_view flag) {
  if (flag == "--concepts" || flag == "-c") return Category::kConcepts;
  if (flag == "--objects" || flag == "-o") return Category::kObjects;
  if (flag == "--events" || flag == "-e") return Category::kEvents;
  if (flag == "--places" || flag == "-p") return Category::kPlaces;
  if (flag == "--ocr") return Category::kOcr;
  if (flag == "--stt") return Category::kStt;
  if (flag == "--all") return Category::kAll;
  return std::nullopt;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<double> parse_real(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string quote(std::string_view label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

bool is_bare_label(std::string_view label) {
  if (label.empty() || label.front() == '-') return false;
  for (char c : label) {
    if (is_delimiter(c) || c == '\\') return false;
  }
  return true;
}

QueryAst parse_query(std::string_view query) {
  const std::vector<Token> tokens = lex(query);
  if (tokens.empty()) fail(0, "empty query");

  QueryAst ast;
  ast.segments.emplace_back();
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Token& tok = tokens[i];
    switch (tok.kind) {
      case TokenKind::kArrow:
        if (ast.segments.back().empty()) fail(tok.offset, "empty segment before '-->'");
        ast.segments.emplace_back();
        ++i;
        break;
      case TokenKind::kFlag: {
        if (tok.text == "--window") {
          if (ast.window_s) fail(tok.offset, "duplicate --window");
          if (i + 1 >= tokens.size() || tokens[i + 1].kind != TokenKind::kWord) {
            fail(tok.offset, "--window expects a positive number of seconds");
          }
          auto value = parse_real(tokens[i + 1].text);
          if (!value || !(*value > 0.0)) fail(tokens[i + 1].offset, "--window expects a positive number of seconds");
          ast.window_s = *value;
          i += 2;
          break;
        }
        auto category = flag_category(tok.text);
        if (!category) fail(tok.offset, "unknown flag '" + tok.text + "'");
        ++i;
        bool expect_term = true;
        bool any_term = false;
        while (expect_term) {
          if (i >= tokens.size() || (tokens[i].kind != TokenKind::kWord && tokens[i].kind != TokenKind::kQuoted)) {
            if (!any_term) fail(tok.offset, "flag '" + tok.text + "' has no terms");
            fail(i < tokens.size() ? tokens[i].offset : query.size(), "expected a term after ','");
          }
          const Token& word = tokens[i++];
          Term term;
          term.category = *category;
          term.label = to_lower(word.kind == TokenKind::kQuoted ? trim(word.text) : word.text);
          if (term.label.empty()) fail(word.offset, "empty label");
          if (i < tokens.size() && tokens[i].kind == TokenKind::kThreshold) {
            auto value = parse_real(tokens[i].text);
            if (!value) fail(tokens[i].offset, "invalid threshold '(" + tokens[i].text + ")'");
            if (*value < 0.0 || *value > 1.0) {
              fail(tokens[i].offset, "threshold " + trim(tokens[i].text) + " outside [0,1]");
            }
            term.threshold = *value;
            ++i;
          }
          ast.segments.back().push_back(std::move(term));
          any_term = true;
          expect_term = i < tokens.size() && tokens[i].kind == TokenKind::kComma;
          if (expect_term) ++i;
        }
        break;
      }
      case TokenKind::kWord:
      case TokenKind::kQuoted:
        fail(tok.offset, "expected a flag before term '" + tok.text + "'");
      case TokenKind::kComma:
        fail(tok.offset, "unexpected ','");
      case TokenKind::kThreshold:
        fail(tok.offset, "threshold without a preceding term");
    }
  }
  if (ast.segments.back().empty()) {
    if (ast.segments.size() == 1) fail(0, "empty query");
    fail(query.size(), "empty segment after '-->'");
  }
  return ast;
}

std::string canonicalize(const Term& term) {
  std::string out = is_bare_label(term.label) ? term.label : quote(term.label);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", term.threshold);
  if (std::string_view(buf) != "0.00") {
    out += " (";
    out += buf;
    out += ')';
  }
  return out;
}

std::string canonicalize(const QueryAst& ast) {
  std::string out;
  for (std::size_t s = 0; s < ast.segments.size(); ++s) {
    if (s > 0) out += " --> ";
    const Segment& segment = ast.segments[s];
    for (std::size_t t = 0; t < segment.size(); ++t) {
      const Term& term = segment[t];
      if (t == 0 || segment[t - 1].category != term.category) {
        if (t > 0) out += ' ';
        out += "--";
        out += to_string(term.category);
        out += ' ';
      } else {
        out += ", ";
      }
      out += canonicalize(term);
    }
  }
  if (ast.window_s) out += " --window " + format_shortest(*ast.window_s);
  return out;
}

}  // namespace vidsearch
