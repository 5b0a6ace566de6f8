#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbe {

using Params = std::map<std::string, double>;

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Payoff expression over the two strategy variables s1 and s2.
//
// Nodes live in a flat arena; children are referenced by index. Parameters
// are substituted at parse time and constant subtrees are folded, so a parsed
// tree only ever contains constants, the two variables and operators.
class Expr {
public:
  enum class Op : unsigned char {
    Const, Var1, Var2, Neg, Add, Sub, Mul, Div, Pow, Min, Max, Sqrt, Piecewise
  };
  enum class Cmp : unsigned char { Lt, Le, Gt, Ge };

  struct Node {
    Op op = Op::Const;
    double value = 0.0;
    int a = -1;
    int b = -1;
  };
  // One arm of a piecewise block: "var cmp threshold: body".
  struct Branch {
    int var = 1;
    Cmp cmp = Cmp::Lt;
    double threshold = 0.0;
    int body = -1;
  };

  Expr();
  static Expr constant(double v);

  double operator()(double s1, double s2) const { return eval(root_, s1, s2); }
  std::string print() const;
  bool isConstant() const { return nodes_[root_].op == Op::Const; }
  bool dependsOn(int var) const;

  // Returns g with g(.., u, ..) = f(.., scale*u + shift, ..) in variable `var`.
  Expr affineSubstitute(int var, double scale, double shift) const;

  friend bool operator==(const Expr& x, const Expr& y);

private:
  friend class Parser;
  double eval(int n, double s1, double s2) const;
  void printNode(int n, std::string& out) const;
  bool equalNode(int n, const Expr& other, int m) const;
  bool dependsOnNode(int n, int var) const;
  int copyNode(const Expr& src, int n, int var, double scale, double shift);

  std::vector<Node> nodes_;
  // Piecewise node: a = first branch index, b = branch count.
  std::vector<Branch> branches_;
  int root_ = 0;
};

// Parses the payoff DSL. Identifiers other than s1, s2 and the function names
// min, max, sqrt are looked up in `params`.
Expr parseExpr(const std::string& src, const Params& params = {});

double evalExpr(const Expr& e, double s1, double s2);

std::string formatNumber(double v);

}  // namespace bbe
