#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "peakon/error.hpp"

namespace peakon {

using ParamMap = std::map<std::string, double>;

/// A named scalar function of one real argument that expressions may call
/// like a builtin. Used for nonlinearities that have no closed form in the
/// expression language (tabulated rate functions of designed equations).
struct UserFunction {
  std::string name;
  std::function<double(double)> fn;
};

using FunctionTable = std::map<std::string, std::shared_ptr<const UserFunction>>;

/// Immutable expression tree over the reserved variables `u`, `ux` and named
/// parameters. Copies share nodes, so passing by value is cheap and
/// evaluation is safe from any number of threads.
class Expr {
 public:
  enum class Kind { Literal, VarU, VarUx, Param, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Exp, Log, Sin, Cos, Tan, Sqrt, Abs, Sign, Pow, User };

  struct Node;

  Expr();  // literal 0
  static Expr literal(double v);
  static Expr var_u();
  static Expr var_ux();
  static Expr param(std::string name);
  static Expr unary(Kind kind, Expr arg);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr call(Func func, std::vector<Expr> args);
  static Expr call_user(std::shared_ptr<const UserFunction> fn, Expr arg);

  Kind kind() const;

  /// Evaluates in IEEE double precision. Domain violations throw EvalError
  /// instead of producing NaN.
  double eval(double u, double ux, const ParamMap& params = {}) const;

  /// Fully parenthesised text that parses back to an equivalent tree.
  std::string to_string() const;

  /// Free parameter names.
  std::set<std::string> parameters() const;

  /// Names of user functions referenced by the tree.
  std::set<std::string> user_functions() const;

  /// Replaces every parameter by its value. Throws EvalError on unbound names.
  Expr bind(const ParamMap& params) const;

  bool depends_on_u() const;
  bool depends_on_ux() const;

  /// True when abs, sign or a user function occurs anywhere in the tree.
  bool has_nonsmooth() const;

  /// Symbolic derivative with respect to u. Throws EvalError when the tree
  /// contains a user function; abs/sign are differentiated piecewise.
  Expr derivative_u() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Parses the nonlinearity grammar: `+ -` < `* /` < unary `-` < `^`
/// (right-associative), parentheses, and calls `name(arg[, arg])`.
/// `u` and `ux` are the reserved variables; other identifiers are parameters.
/// Throws ParseError carrying the byte offset of the offending token.
Expr parse_expr(std::string_view text, const FunctionTable& functions = {});

struct ParseOutcome {
  std::optional<Expr> expr;
  std::string message;
  std::size_t offset = 0;
  explicit operator bool() const { return expr.has_value(); }
};

/// Non-throwing variant for batch callers.
ParseOutcome try_parse_expr(std::string_view text, const FunctionTable& functions = {}) noexcept;

struct EvenOdd {
  double even;
  double odd;
};

/// Even and odd parts of h(u, ux) under the reflection ux -> -ux.
EvenOdd even_odd_at(const Expr& expr, double u, double ux, const ParamMap& params = {});

/// The pair (f, g) of a wave equation m_t + f m + (g m)_x = 0 with its
/// parameter values.
struct NonlinearitySpec {
  Expr f;
  Expr g;
  ParamMap params;
  std::string f_text;
  std::string g_text;

  /// Throws EvalError if either tree has an unbound parameter.
  void validate() const;
};

NonlinearitySpec make_spec(std::string_view f, std::string_view g, ParamMap params = {},
                           const FunctionTable& functions = {});

}  // namespace peakon
