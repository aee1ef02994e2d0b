#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "essential/term.hpp"

namespace essential {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

namespace {

constexpr std::string_view kLambdaUtf8 = "\xCE\xBB";

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term run() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_lambda() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, kLambdaUtf8.size()) == kLambdaUtf8;
  }

  bool at_ident() {
    skip_ws();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  bool at_open() {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == '(';
  }

  std::string ident() {
    skip_ws();
    if (!at_ident()) {
      if (pos_ >= text_.size()) fail("expected identifier, found end of input");
      fail("expected identifier");
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '\'')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "', found end of input");
    if (text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term term() {
    if (at_lambda()) return lam();
    return app();
  }

  Term lam() {
    if (text_[pos_] == '\\') {
      ++pos_;
    } else {
      pos_ += kLambdaUtf8.size();
    }
    std::string name = ident();
    expect('.');
    scope_.push_back(name);
    Term body = term();
    scope_.pop_back();
    return Term::lam(std::move(name), std::move(body));
  }

  Term app() {
    std::optional<Term> acc;
    while (at_ident() || at_open()) {
      Term a = atom();
      acc = acc ? Term::app(std::move(*acc), std::move(a)) : std::move(a);
    }
    if (!acc) {
      if (pos_ >= text_.size()) fail("expected a term, found end of input");
      fail("expected a term");
    }
    if (at_lambda()) acc = Term::app(std::move(*acc), lam());
    return *acc;
  }

  Term atom() {
    if (at_open()) {
      ++pos_;
      Term t = term();
      expect(')');
      return t;
    }
    std::string name = ident();
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i] == name) return Term::bound(static_cast<std::uint32_t>(scope_.size() - 1 - i));
    }
    return Term::free(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

class Printer {
 public:
  std::string term(const Term& t) {
    std::string out;
    render(t, out);
    return out;
  }

 private:
  void render(const Term& t, std::string& out) {
    if (t.is_lam()) {
      std::string name = binder_name(t);
      out += '\\';
      out += name;
      out += '.';
      ctx_.push_back(std::move(name));
      render(t.body(), out);
      ctx_.pop_back();
      return;
    }
    if (t.is_app()) {
      render_app(t, out);
      return;
    }
    render_var(t, out);
  }

  void render_app(const Term& t, std::string& out) {
    const Term& f = t.fun();
    if (f.is_app()) {
      render_app(f, out);
    } else if (f.is_lam()) {
      out += '(';
      render(f, out);
      out += ')';
    } else {
      render_var(f, out);
    }
    out += ' ';
    const Term& a = t.arg();
    if (a.is_var()) {
      render_var(a, out);
    } else {
      out += '(';
      render(a, out);
      out += ')';
    }
  }

  void render_var(const Term& t, std::string& out) {
    if (t.kind() == Term::Kind::Free) {
      out += t.name();
      return;
    }
    if (t.index() < ctx_.size()) {
      out += ctx_[ctx_.size() - 1 - t.index()];
    } else {
      // Loose index of an open de Bruijn fragment.
      out += "#" + std::to_string(t.index() - ctx_.size());
    }
  }

  // Names the body refers to other than through this binder.
  void used_names(const Term& t, std::uint32_t depth, std::set<std::string>& used) const {
    switch (t.kind()) {
      case Term::Kind::Free:
        used.insert(t.name());
        break;
      case Term::Kind::Bound:
        if (t.index() > depth) {
          std::size_t outer = t.index() - depth - 1;
          if (outer < ctx_.size()) used.insert(ctx_[ctx_.size() - 1 - outer]);
        }
        break;
      case Term::Kind::Lam:
        used_names(t.body(), depth + 1, used);
        break;
      case Term::Kind::App:
        used_names(t.fun(), depth, used);
        used_names(t.arg(), depth, used);
        break;
    }
  }

  std::string binder_name(const Term& lam) const {
    std::string name = lam.name().empty() ? "x" : lam.name();
    std::set<std::string> used;
    used_names(lam.body(), 0, used);
    while (used.count(name)) name += '\'';
    return name;
  }

  std::vector<std::string> ctx_;
};

}  // namespace

Term parse(std::string_view text) { return Parser(text).run(); }

std::string print(const Term& t) { return Printer().term(t); }

}  // namespace essential
