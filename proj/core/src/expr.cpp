#include "peakon/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace peakon {

struct Expr::Node {
  Kind kind = Kind::Literal;
  double value = 0.0;
  std::string name;
  Func func = Func::Exp;
  std::vector<std::shared_ptr<const Node>> args;
  std::shared_ptr<const UserFunction> user;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct BuiltinInfo {
  std::string_view name;
  Expr::Func func;
  int arity;
};

constexpr std::array<BuiltinInfo, 9> kBuiltins{{
    {"exp", Expr::Func::Exp, 1},
    {"log", Expr::Func::Log, 1},
    {"sin", Expr::Func::Sin, 1},
    {"cos", Expr::Func::Cos, 1},
    {"tan", Expr::Func::Tan, 1},
    {"sqrt", Expr::Func::Sqrt, 1},
    {"abs", Expr::Func::Abs, 1},
    {"sign", Expr::Func::Sign, 1},
    {"pow", Expr::Func::Pow, 2},
}};

std::string_view func_name(const Expr::Node& n) {
  if (n.func == Expr::Func::User) return n.user->name;
  for (const auto& b : kBuiltins)
    if (b.func == n.func) return b.name;
  return "?";
}

double checked_pow(double base, double exponent) {
  if (base == 0.0 && exponent < 0.0) throw EvalError("division by zero in power (0^" + std::to_string(exponent) + ")");
  const double r = std::pow(base, exponent);
  if (std::isnan(r) && !std::isnan(base) && !std::isnan(exponent))
    throw EvalError("non-real power (" + std::to_string(base) + ")^" + std::to_string(exponent));
  return r;
}

double eval_node(const Expr::Node& n, double u, double ux, const ParamMap& params) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Literal:
      return n.value;
    case K::VarU:
      return u;
    case K::VarUx:
      return ux;
    case K::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) throw EvalError("unbound parameter '" + n.name + "'");
      return it->second;
    }
    case K::Neg:
      return -eval_node(*n.args[0], u, ux, params);
    case K::Add:
      return eval_node(*n.args[0], u, ux, params) + eval_node(*n.args[1], u, ux, params);
    case K::Sub:
      return eval_node(*n.args[0], u, ux, params) - eval_node(*n.args[1], u, ux, params);
    case K::Mul:
      return eval_node(*n.args[0], u, ux, params) * eval_node(*n.args[1], u, ux, params);
    case K::Div: {
      const double num = eval_node(*n.args[0], u, ux, params);
      const double den = eval_node(*n.args[1], u, ux, params);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case K::Pow:
      return checked_pow(eval_node(*n.args[0], u, ux, params), eval_node(*n.args[1], u, ux, params));
    case K::Call:
      break;
  }
  const double x = eval_node(*n.args[0], u, ux, params);
  using F = Expr::Func;
  switch (n.func) {
    case F::Exp:
      return std::exp(x);
    case F::Log:
      if (x <= 0.0) throw EvalError("log of non-positive value " + std::to_string(x));
      return std::log(x);
    case F::Sin:
      return std::sin(x);
    case F::Cos:
      return std::cos(x);
    case F::Tan:
      return std::tan(x);
    case F::Sqrt:
      if (x < 0.0) throw EvalError("sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
    case F::Abs:
      return std::fabs(x);
    case F::Sign:
      return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case F::Pow:
      return checked_pow(x, eval_node(*n.args[1], u, ux, params));
    case F::User: {
      const double r = n.user->fn(x);
      if (std::isnan(r)) throw EvalError("user function '" + n.user->name + "' undefined at " + std::to_string(x));
      return r;
    }
  }
  return 0.0;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep the token parseable: the grammar has no signed literals and no inf.
  if (v < 0) return "(-" + s.substr(1) + ")";
  return s;
}

void print_node(const Expr::Node& n, std::string& out) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Literal:
      out += format_number(n.value);
      return;
    case K::VarU:
      out += "u";
      return;
    case K::VarUx:
      out += "ux";
      return;
    case K::Param:
      out += n.name;
      return;
    case K::Neg:
      out += "(-";
      print_node(*n.args[0], out);
      out += ")";
      return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div:
    case K::Pow: {
      static constexpr std::string_view ops = "+-*/^";
      out += "(";
      print_node(*n.args[0], out);
      out += ops[static_cast<int>(n.kind) - static_cast<int>(K::Add)];
      print_node(*n.args[1], out);
      out += ")";
      return;
    }
    case K::Call:
      out += func_name(n);
      out += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*n.args[i], out);
      }
      out += ")";
      return;
  }
}

template <typename Pred>
bool any_node(const Expr::Node& n, Pred&& pred) {
  if (pred(n)) return true;
  for (const auto& a : n.args)
    if (any_node(*a, pred)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

class Parser {
 public:
  Parser(std::string_view text, const FunctionTable& functions) : text_(text), functions_(functions) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_here(const std::string& what) {
    if (pos_ >= text_.size()) throw ParseError(what + ", got end of input", pos_);
    throw ParseError(what + ", got '" + text_[pos_] + "'", pos_);
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(Expr::Kind::Add, lhs, parse_product());
      else if (accept('-'))
        lhs = Expr::binary(Expr::Kind::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(Expr::Kind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = Expr::binary(Expr::Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Expr::Kind::Neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Expr::Kind::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail_here("expected operand");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (accept('(')) {
      Expr inner = parse_sum();
      if (!accept(')')) fail_here("expected ')'");
      return inner;
    }
    fail_here("expected operand");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ - start == 1 && text_[start] == '.') throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
        pos_ = p;
      } else {
        throw ParseError("malformed exponent", pos_);
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    return Expr::literal(std::strtod(token.c_str(), nullptr));
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      return parse_call(name, start);
    }
    if (name == "u") return Expr::var_u();
    if (name == "ux") return Expr::var_ux();
    return Expr::param(name);
  }

  Expr parse_call(const std::string& name, std::size_t name_offset) {
    std::vector<Expr> args;
    if (!accept(')')) {
      args.push_back(parse_sum());
      while (accept(',')) args.push_back(parse_sum());
      if (!accept(')')) fail_here("expected ')' or ','");
    }
    for (const auto& b : kBuiltins) {
      if (b.name != name) continue;
      if (static_cast<int>(args.size()) != b.arity)
        throw ParseError("function '" + name + "' takes " + std::to_string(b.arity) + " argument(s)", name_offset);
      return Expr::call(b.func, std::move(args));
    }
    if (auto it = functions_.find(name); it != functions_.end()) {
      if (args.size() != 1) throw ParseError("function '" + name + "' takes 1 argument(s)", name_offset);
      return Expr::call_user(it->second, std::move(args[0]));
    }
    throw ParseError("unknown function '" + name + "'", name_offset);
  }

  std::string_view text_;
  const FunctionTable& functions_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

Expr::Expr() : Expr(literal(0.0)) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::var_u() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::VarU;
  return Expr(std::move(n));
}

Expr Expr::var_ux() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::VarUx;
  return Expr(std::move(n));
}

Expr Expr::param(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Param;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {std::move(arg.node_)};
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {std::move(lhs.node_), std::move(rhs.node_)};
  return Expr(std::move(n));
}

Expr Expr::call(Func func, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = func;
  for (auto& a : args) n->args.push_back(std::move(a.node_));
  return Expr(std::move(n));
}

Expr Expr::call_user(std::shared_ptr<const UserFunction> fn, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = Func::User;
  n->user = std::move(fn);
  n->args = {std::move(arg.node_)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }

double Expr::eval(double u, double ux, const ParamMap& params) const { return eval_node(*node_, u, ux, params); }

std::string Expr::to_string() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

std::set<std::string> Expr::parameters() const {
  std::set<std::string> names;
  any_node(*node_, [&](const Node& n) {
    if (n.kind == Kind::Param) names.insert(n.name);
    return false;
  });
  return names;
}

std::set<std::string> Expr::user_functions() const {
  std::set<std::string> names;
  any_node(*node_, [&](const Node& n) {
    if (n.kind == Kind::Call && n.func == Func::User) names.insert(n.user->name);
    return false;
  });
  return names;
}

Expr Expr::bind(const ParamMap& params) const {
  std::function<NodePtr(const NodePtr&)> rec = [&](const NodePtr& n) -> NodePtr {
    if (n->kind == Kind::Param) {
      auto it = params.find(n->name);
      if (it == params.end()) throw EvalError("unbound parameter '" + n->name + "'");
      return literal(it->second).node_;
    }
    if (n->args.empty()) return n;
    auto copy = std::make_shared<Node>(*n);
    for (auto& a : copy->args) a = rec(a);
    return copy;
  };
  return Expr(rec(node_));
}

bool Expr::depends_on_u() const {
  return any_node(*node_, [](const Node& n) { return n.kind == Kind::VarU; });
}

bool Expr::depends_on_ux() const {
  return any_node(*node_, [](const Node& n) { return n.kind == Kind::VarUx; });
}

bool Expr::has_nonsmooth() const {
  return any_node(*node_, [](const Node& n) {
    return n.kind == Kind::Call && (n.func == Func::Abs || n.func == Func::Sign || n.func == Func::User);
  });
}

namespace {

bool is_zero(const Expr& e) {
  // Literal zero check without exposing the node type.
  return e.kind() == Expr::Kind::Literal && e.eval(0, 0) == 0.0;
}

Expr add(Expr a, Expr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return Expr::binary(Expr::Kind::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return Expr::unary(Expr::Kind::Neg, std::move(b));
  return Expr::binary(Expr::Kind::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
  if (is_zero(a) || is_zero(b)) return Expr::literal(0.0);
  return Expr::binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

Expr divide(Expr a, Expr b) {
  if (is_zero(a)) return Expr::literal(0.0);
  return Expr::binary(Expr::Kind::Div, std::move(a), std::move(b));
}

}  // namespace

Expr Expr::derivative_u() const {
  const Node& n = *node_;
  auto arg = [&](std::size_t i) { return Expr(n.args[i]); };
  auto d = [&](std::size_t i) { return Expr(n.args[i]).derivative_u(); };
  switch (n.kind) {
    case Kind::Literal:
    case Kind::VarUx:
    case Kind::Param:
      return literal(0.0);
    case Kind::VarU:
      return literal(1.0);
    case Kind::Neg: {
      Expr da = d(0);
      return is_zero(da) ? da : unary(Kind::Neg, da);
    }
    case Kind::Add:
      return add(d(0), d(1));
    case Kind::Sub:
      return sub(d(0), d(1));
    case Kind::Mul:
      return add(mul(d(0), arg(1)), mul(arg(0), d(1)));
    case Kind::Div:
      return divide(sub(mul(d(0), arg(1)), mul(arg(0), d(1))), binary(Kind::Pow, arg(1), literal(2.0)));
    case Kind::Pow:
      break;
    case Kind::Call:
      switch (n.func) {
        case Func::Exp:
          return mul(*this, d(0));
        case Func::Log:
          return divide(d(0), arg(0));
        case Func::Sin:
          return mul(call(Func::Cos, {arg(0)}), d(0));
        case Func::Cos:
          return mul(unary(Kind::Neg, call(Func::Sin, {arg(0)})), d(0));
        case Func::Tan:
          return divide(d(0), binary(Kind::Pow, call(Func::Cos, {arg(0)}), literal(2.0)));
        case Func::Sqrt:
          return divide(d(0), mul(literal(2.0), *this));
        case Func::Abs:
          return mul(call(Func::Sign, {arg(0)}), d(0));
        case Func::Sign:
          return literal(0.0);
        case Func::Pow:
          break;
        case Func::User:
          throw EvalError("cannot differentiate user function '" + n.user->name + "'");
      }
      break;
  }
  // base^exponent, either as operator or pow(base, exponent).
  Expr base = arg(0);
  Expr expo = arg(1);
  Expr dbase = d(0);
  if (!expo.depends_on_u()) {
    if (is_zero(dbase)) return literal(0.0);
    return mul(mul(expo, binary(Kind::Pow, base, sub(expo, literal(1.0)))), dbase);
  }
  Expr dexpo = d(1);
  return mul(*this, add(mul(dexpo, call(Func::Log, {base})), divide(mul(expo, dbase), base)));
}

Expr parse_expr(std::string_view text, const FunctionTable& functions) {
  return Parser(text, functions).parse();
}

ParseOutcome try_parse_expr(std::string_view text, const FunctionTable& functions) noexcept {
  ParseOutcome out;
  try {
    out.expr = parse_expr(text, functions);
  } catch (const ParseError& e) {
    out.message = e.what();
    out.offset = e.offset();
  } catch (const std::exception& e) {
    out.message = e.what();
  }
  return out;
}

EvenOdd even_odd_at(const Expr& expr, double u, double ux, const ParamMap& params) {
  const double plus = expr.eval(u, ux, params);
  const double minus = expr.eval(u, -ux, params);
  return {0.5 * (plus + minus), 0.5 * (plus - minus)};
}

void NonlinearitySpec::validate() const {
  for (const Expr* e : {&f, &g})
    for (const auto& name : e->parameters())
      if (!params.count(name)) throw EvalError("unbound parameter '" + name + "'");
}

NonlinearitySpec make_spec(std::string_view f, std::string_view g, ParamMap params, const FunctionTable& functions) {
  NonlinearitySpec spec{parse_expr(f, functions), parse_expr(g, functions), std::move(params), std::string(f),
                        std::string(g)};
  spec.validate();
  return spec;
}

}  // namespace peakon
