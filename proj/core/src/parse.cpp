#include "superode/parse.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace superode {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx, std::size_t budget)
      : text_(text), ctx_(ctx), budget_(budget) {}

  NCPolynomial parse() {
    NCPolynomial p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("cannot parse '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NCPolynomial scalar(const Rational& q) const { return NCPolynomial::scalar(ctx_.policy, budget_, q); }

  NCPolynomial expr() {
    NCPolynomial acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  NCPolynomial term() {
    NCPolynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        NCPolynomial d = unary();
        if (d.degree() != 0 || d.terms().size() != 1 || d.terms().begin()->second.terms().size() != 1 ||
            !d.terms().begin()->second.terms().begin()->first.empty())
          fail("division by a non-number");
        acc *= Rational(1) / d.terms().begin()->second.body();
      } else {
        return acc;
      }
    }
  }

  NCPolynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  NCPolynomial power() {
    NCPolynomial base = atom();
    if (!accept('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
    NCPolynomial out = scalar(Rational(1));
    for (unsigned long i = 0; i < e; ++i) out = out * base;
    return out;
  }

  NCPolynomial atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NCPolynomial p = expr();
      if (!accept(')')) fail("missing ')'");
      return p;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
      try {
        return scalar(parse_rational(text_.substr(start, pos_ - start)));
      } catch (const std::invalid_argument&) {
        fail("bad number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      for (const auto& v : ctx_.variables)
        if (v.name == name) return NCPolynomial::variable(ctx_.policy, budget_, v);
      if (ctx_.constants)
        if (const GrassmannElement* g = ctx_.constants->find(name)) return NCPolynomial::constant(ctx_.policy, *g);
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const ParseContext& ctx_;
  std::size_t budget_;
  std::size_t pos_ = 0;
};

}  // namespace

NCPolynomial parse_polynomial(std::string_view text, const ParseContext& ctx) {
  const std::size_t budget = ctx.constants ? ctx.constants->budget() : 0;
  return Parser(text, ctx, budget).parse();
}

GrassmannElement parse_constant(std::string_view text, const ConstantRegistry& constants) {
  ParseContext ctx;
  ctx.constants = &constants;
  NCPolynomial p = parse_polynomial(text, ctx);
  if (p.is_zero()) return GrassmannElement(constants.budget());
  return p.coefficient(Word{});
}

std::string format_constant(const GrassmannElement& c, const ConstantRegistry& constants) {
  if (c.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, q] : c.terms()) {
    std::vector<std::uint32_t> left = idx.generators();
    std::vector<std::string> factors;
    GrassmannElement product = GrassmannElement::scalar(c.budget(), Rational(1));
    for (const auto& name : constants.names()) {
      const auto& gens = constants.generators_of(name);
      if (gens.empty()) continue;
      if (!std::all_of(gens.begin(), gens.end(),
                       [&](std::uint32_t g) { return std::find(left.begin(), left.end(), g) != left.end(); }))
        continue;
      for (auto g : gens) left.erase(std::find(left.begin(), left.end(), g));
      factors.push_back(name);
      product = product * *constants.find(name);
    }
    for (auto g : left) {
      factors.push_back("b" + std::to_string(g));
      product = product * GrassmannElement::generator(c.budget(), g);
    }
    Rational coeff = q / product.coefficient(idx);
    const bool negative = sgn(coeff) < 0;
    coeff = abs(coeff);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    bool need_star = false;
    if (coeff != 1 || factors.empty()) {
      os << coeff.get_str();
      need_star = true;
    }
    for (const auto& f : factors) {
      if (need_star) os << '*';
      os << f;
      need_star = true;
    }
  }
  return os.str();
}

}  // namespace superode
