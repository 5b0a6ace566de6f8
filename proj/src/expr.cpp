#include "bbe/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace bbe {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

std::string formatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
    if (std::strtod(tmp, nullptr) == v) return tmp;
  }
  return buf;
}

namespace {

bool cmpHolds(Expr::Cmp c, double x, double t) {
  switch (c) {
    case Expr::Cmp::Lt: return x < t;
    case Expr::Cmp::Le: return x <= t;
    case Expr::Cmp::Gt: return x > t;
    case Expr::Cmp::Ge: return x >= t;
  }
  return false;
}

const char* cmpText(Expr::Cmp c) {
  switch (c) {
    case Expr::Cmp::Lt: return "<";
    case Expr::Cmp::Le: return "<=";
    case Expr::Cmp::Gt: return ">";
    case Expr::Cmp::Ge: return ">=";
  }
  return "?";
}

double applyPow(double base, double ex) {
  if (base < 0.0 && ex != std::floor(ex)) throw EvalError("fractional power of a negative number");
  if (base == 0.0 && ex < 0.0) throw EvalError("division by zero");
  return std::pow(base, ex);
}

}  // namespace

Expr::Expr() { nodes_.push_back(Node{}); }

Expr Expr::constant(double v) {
  Expr e;
  e.nodes_[0].value = v;
  return e;
}

double Expr::eval(int n, double s1, double s2) const {
  const Node& nd = nodes_[n];
  switch (nd.op) {
    case Op::Const: return nd.value;
    case Op::Var1: return s1;
    case Op::Var2: return s2;
    case Op::Neg: return -eval(nd.a, s1, s2);
    case Op::Add: return eval(nd.a, s1, s2) + eval(nd.b, s1, s2);
    case Op::Sub: return eval(nd.a, s1, s2) - eval(nd.b, s1, s2);
    case Op::Mul: return eval(nd.a, s1, s2) * eval(nd.b, s1, s2);
    case Op::Div: {
      double den = eval(nd.b, s1, s2);
      if (den == 0.0) throw EvalError("division by zero");
      return eval(nd.a, s1, s2) / den;
    }
    case Op::Pow: return applyPow(eval(nd.a, s1, s2), eval(nd.b, s1, s2));
    case Op::Min: return std::min(eval(nd.a, s1, s2), eval(nd.b, s1, s2));
    case Op::Max: return std::max(eval(nd.a, s1, s2), eval(nd.b, s1, s2));
    case Op::Sqrt: {
      double v = eval(nd.a, s1, s2);
      if (v < 0.0) throw EvalError("square root of a negative number");
      return std::sqrt(v);
    }
    case Op::Piecewise:
      for (int k = nd.a; k < nd.a + nd.b; ++k) {
        const Branch& br = branches_[k];
        if (cmpHolds(br.cmp, br.var == 1 ? s1 : s2, br.threshold)) return eval(br.body, s1, s2);
      }
      throw EvalError("no piecewise branch matches");
  }
  return 0.0;
}

void Expr::printNode(int n, std::string& out) const {
  const Node& nd = nodes_[n];
  auto binary = [&](const char* op) {
    out += '(';
    printNode(nd.a, out);
    out += op;
    printNode(nd.b, out);
    out += ')';
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += '(';
    printNode(nd.a, out);
    if (nd.b >= 0) {
      out += ", ";
      printNode(nd.b, out);
    }
    out += ')';
  };
  switch (nd.op) {
    case Op::Const:
      if (nd.value < 0.0 || (nd.value == 0.0 && std::signbit(nd.value)))
        out += "(-" + formatNumber(-nd.value) + ")";
      else
        out += formatNumber(nd.value);
      return;
    case Op::Var1: out += "s1"; return;
    case Op::Var2: out += "s2"; return;
    case Op::Neg:
      out += "(-";
      printNode(nd.a, out);
      out += ')';
      return;
    case Op::Add: binary(" + "); return;
    case Op::Sub: binary(" - "); return;
    case Op::Mul: binary("*"); return;
    case Op::Div: binary("/"); return;
    case Op::Pow: binary("^"); return;
    case Op::Min: call("min"); return;
    case Op::Max: call("max"); return;
    case Op::Sqrt: call("sqrt"); return;
    case Op::Piecewise:
      out += "piecewise{";
      for (int k = nd.a; k < nd.a + nd.b; ++k) {
        const Branch& br = branches_[k];
        if (k > nd.a) out += ", ";
        out += br.var == 1 ? "s1 " : "s2 ";
        out += cmpText(br.cmp);
        out += ' ';
        if (br.threshold < 0.0)
          out += "(-" + formatNumber(-br.threshold) + ")";
        else
          out += formatNumber(br.threshold);
        out += ": ";
        printNode(br.body, out);
      }
      out += '}';
      return;
  }
}

std::string Expr::print() const {
  std::string out;
  printNode(root_, out);
  return out;
}

bool Expr::equalNode(int n, const Expr& other, int m) const {
  const Node& x = nodes_[n];
  const Node& y = other.nodes_[m];
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Const: return x.value == y.value || (std::isnan(x.value) && std::isnan(y.value));
    case Op::Var1:
    case Op::Var2: return true;
    case Op::Neg:
    case Op::Sqrt: return equalNode(x.a, other, y.a);
    case Op::Piecewise:
      if (x.b != y.b) return false;
      for (int k = 0; k < x.b; ++k) {
        const Branch& p = branches_[x.a + k];
        const Branch& q = other.branches_[y.a + k];
        if (p.var != q.var || p.cmp != q.cmp || p.threshold != q.threshold) return false;
        if (!equalNode(p.body, other, q.body)) return false;
      }
      return true;
    default: return equalNode(x.a, other, y.a) && equalNode(x.b, other, y.b);
  }
}

bool operator==(const Expr& x, const Expr& y) { return x.equalNode(x.root_, y, y.root_); }

bool Expr::dependsOnNode(int n, int var) const {
  const Node& nd = nodes_[n];
  switch (nd.op) {
    case Op::Const: return false;
    case Op::Var1: return var == 1;
    case Op::Var2: return var == 2;
    case Op::Neg:
    case Op::Sqrt: return dependsOnNode(nd.a, var);
    case Op::Piecewise:
      for (int k = nd.a; k < nd.a + nd.b; ++k)
        if (branches_[k].var == var || dependsOnNode(branches_[k].body, var)) return true;
      return false;
    default: return dependsOnNode(nd.a, var) || dependsOnNode(nd.b, var);
  }
}

bool Expr::dependsOn(int var) const { return dependsOnNode(root_, var); }

int Expr::copyNode(const Expr& src, int n, int var, double scale, double shift) {
  const Node& nd = src.nodes_[n];
  Node out = nd;
  bool isVar = (nd.op == Op::Var1 && var == 1) || (nd.op == Op::Var2 && var == 2);
  if (isVar) {
    // scale*var + shift
    Node v{nd.op, 0.0, -1, -1};
    nodes_.push_back(v);
    int vi = static_cast<int>(nodes_.size()) - 1;
    nodes_.push_back(Node{Op::Const, scale, -1, -1});
    int si = static_cast<int>(nodes_.size()) - 1;
    nodes_.push_back(Node{Op::Mul, 0.0, si, vi});
    int mi = static_cast<int>(nodes_.size()) - 1;
    nodes_.push_back(Node{Op::Const, shift, -1, -1});
    int ci = static_cast<int>(nodes_.size()) - 1;
    nodes_.push_back(Node{Op::Add, 0.0, mi, ci});
    return static_cast<int>(nodes_.size()) - 1;
  }
  switch (nd.op) {
    case Op::Const:
    case Op::Var1:
    case Op::Var2: break;
    case Op::Neg:
    case Op::Sqrt: out.a = copyNode(src, nd.a, var, scale, shift); break;
    case Op::Piecewise: {
      std::vector<Branch> arms;
      for (int k = nd.a; k < nd.a + nd.b; ++k) {
        Branch br = src.branches_[k];
        br.body = copyNode(src, br.body, var, scale, shift);
        if (br.var == var) {
          // scale*u + shift cmp t  <=>  u cmp' (t - shift)/scale
          br.threshold = (br.threshold - shift) / scale;
          if (scale < 0.0) {
            switch (br.cmp) {
              case Cmp::Lt: br.cmp = Cmp::Gt; break;
              case Cmp::Le: br.cmp = Cmp::Ge; break;
              case Cmp::Gt: br.cmp = Cmp::Lt; break;
              case Cmp::Ge: br.cmp = Cmp::Le; break;
            }
          }
        }
        arms.push_back(br);
      }
      out.a = static_cast<int>(branches_.size());
      out.b = static_cast<int>(arms.size());
      branches_.insert(branches_.end(), arms.begin(), arms.end());
      break;
    }
    default:
      out.a = copyNode(src, nd.a, var, scale, shift);
      out.b = copyNode(src, nd.b, var, scale, shift);
  }
  nodes_.push_back(out);
  return static_cast<int>(nodes_.size()) - 1;
}

Expr Expr::affineSubstitute(int var, double scale, double shift) const {
  Expr out;
  out.nodes_.clear();
  out.root_ = out.copyNode(*this, root_, var, scale, shift);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  Parser(const std::string& src, const Params& params) : src_(src), params_(params) {}

  Expr run() {
    skipSpace();
    if (pos_ >= src_.size()) fail("empty expression");
    int root = parseAdditive();
    skipSpace();
    if (pos_ < src_.size()) fail(std::string("unexpected character '") + src_[pos_] + "'");
    out_.root_ = root;
    return std::move(out_);
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { failAt(msg, pos_); }

  [[noreturn]] void failAt(const std::string& msg, size_t at) const {
    int line = 1, col = 1;
    for (size_t k = 0; k < at && k < src_.size(); ++k) {
      if (src_[k] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src_[k]) & 0xC0) != 0x80) {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skipSpace() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skipSpace();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static bool identStart(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
  static bool identChar(unsigned char c) { return identStart(c) || std::isdigit(c); }

  int add(Expr::Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  bool isConst(int n) const { return out_.nodes_[n].op == Expr::Op::Const; }
  double constVal(int n) const { return out_.nodes_[n].value; }

  // Builds an operator node, folding it to a constant when all children are.
  int make(Expr::Op op, int a, int b, size_t at) {
    Expr::Node n{op, 0.0, a, b};
    bool foldable = isConst(a) && (b < 0 || isConst(b));
    if (!foldable) return add(n);
    double x = constVal(a), y = b >= 0 ? constVal(b) : 0.0, v = 0.0;
    try {
      switch (op) {
        case Expr::Op::Neg: v = -x; break;
        case Expr::Op::Add: v = x + y; break;
        case Expr::Op::Sub: v = x - y; break;
        case Expr::Op::Mul: v = x * y; break;
        case Expr::Op::Div:
          if (y == 0.0) throw EvalError("division by zero");
          v = x / y;
          break;
        case Expr::Op::Pow: v = applyPow(x, y); break;
        case Expr::Op::Min: v = std::min(x, y); break;
        case Expr::Op::Max: v = std::max(x, y); break;
        case Expr::Op::Sqrt:
          if (x < 0.0) throw EvalError("square root of a negative number");
          v = std::sqrt(x);
          break;
        default: return add(n);
      }
    } catch (const EvalError& e) {
      failAt(e.what(), at);
    }
    return add(Expr::Node{Expr::Op::Const, v, -1, -1});
  }

  int parseAdditive() {
    int lhs = parseMultiplicative();
    for (;;) {
      size_t at = pos_;
      if (accept('+'))
        lhs = make(Expr::Op::Add, lhs, parseMultiplicative(), at);
      else if (accept('-'))
        lhs = make(Expr::Op::Sub, lhs, parseMultiplicative(), at);
      else
        return lhs;
    }
  }

  int parseMultiplicative() {
    int lhs = parseUnary();
    for (;;) {
      size_t at = pos_;
      if (accept('*'))
        lhs = make(Expr::Op::Mul, lhs, parseUnary(), at);
      else if (accept('/'))
        lhs = make(Expr::Op::Div, lhs, parseUnary(), at);
      else
        return lhs;
    }
  }

  int parseUnary() {
    size_t at = pos_;
    if (accept('-')) return make(Expr::Op::Neg, parseUnary(), -1, at);
    if (accept('+')) return parseUnary();
    return parsePower();
  }

  int parsePower() {
    int base = parsePrimary();
    size_t at = pos_;
    if (accept('^')) return make(Expr::Op::Pow, base, parseUnary(), at);
    return base;
  }

  int parseNumber() {
    size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string text = src_.substr(start, pos_ - start);
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') failAt("malformed number '" + text + "'", start);
    return add(Expr::Node{Expr::Op::Const, v, -1, -1});
  }

  std::string parseIdent() {
    size_t start = pos_;
    while (pos_ < src_.size() && identChar(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return src_.substr(start, pos_ - start);
  }

  int parsePrimary() {
    skipSpace();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (std::isdigit(c) || c == '.') return parseNumber();
    if (accept('(')) {
      int inner = parseAdditive();
      expect(')');
      return inner;
    }
    if (!identStart(c)) fail(std::string("unexpected character '") + src_[pos_] + "'");
    size_t at = pos_;
    std::string name = parseIdent();
    if (name == "s1") return add(Expr::Node{Expr::Op::Var1, 0.0, -1, -1});
    if (name == "s2") return add(Expr::Node{Expr::Op::Var2, 0.0, -1, -1});
    if (name == "piecewise") return parsePiecewise(at);
    if (name == "min" || name == "max" || name == "sqrt") {
      expect('(');
      int a = parseAdditive();
      int b = -1;
      if (name != "sqrt") {
        expect(',');
        b = parseAdditive();
      }
      expect(')');
      Expr::Op op = name == "min" ? Expr::Op::Min : name == "max" ? Expr::Op::Max : Expr::Op::Sqrt;
      return make(op, a, b, at);
    }
    auto it = params_.find(name);
    if (it == params_.end()) failAt("unknown identifier '" + name + "'", at);
    return add(Expr::Node{Expr::Op::Const, it->second, -1, -1});
  }

  int parsePiecewise(size_t at) {
    expect('{');
    std::vector<Expr::Branch> arms;
    int var = 0;
    do {
      if (peek('}')) break;
      skipSpace();
      size_t condAt = pos_;
      std::string v = identStart(static_cast<unsigned char>(pos_ < src_.size() ? src_[pos_] : ' ')) ? parseIdent() : "";
      if (v != "s1" && v != "s2") failAt("piecewise condition must start with s1 or s2", condAt);
      int thisVar = v == "s1" ? 1 : 2;
      if (var == 0) var = thisVar;
      if (thisVar != var) failAt("all conditions of a piecewise block must test the same variable", condAt);
      Expr::Cmp cmp;
      if (accept('<'))
        cmp = accept('=') ? Expr::Cmp::Le : Expr::Cmp::Lt;
      else if (accept('>'))
        cmp = accept('=') ? Expr::Cmp::Ge : Expr::Cmp::Gt;
      else
        fail("expected comparison operator");
      size_t thrAt = pos_;
      int thr = parseAdditive();
      if (!isConst(thr)) failAt("piecewise threshold must be a constant", thrAt);
      expect(':');
      int body = parseAdditive();
      arms.push_back(Expr::Branch{thisVar, cmp, constVal(thr), body});
    } while (accept(','));
    expect('}');
    if (arms.empty()) failAt("empty piecewise block", at);
    checkPartition(arms, at);
    Expr::Node n{Expr::Op::Piecewise, 0.0, static_cast<int>(out_.branches_.size()), static_cast<int>(arms.size())};
    out_.branches_.insert(out_.branches_.end(), arms.begin(), arms.end());
    return add(n);
  }

  // Half-line conditions partition the real line iff exactly one matches at
  // every threshold and inside every gap between consecutive thresholds.
  void checkPartition(const std::vector<Expr::Branch>& arms, size_t at) const {
    std::vector<double> probes;
    std::vector<double> ts;
    for (const auto& a : arms) ts.push_back(a.threshold);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    probes.push_back(ts.front() - 1.0);
    probes.push_back(ts.back() + 1.0);
    for (size_t k = 0; k < ts.size(); ++k) {
      probes.push_back(ts[k]);
      if (k + 1 < ts.size()) probes.push_back(0.5 * (ts[k] + ts[k + 1]));
    }
    for (double x : probes) {
      int hits = 0;
      for (const auto& a : arms) hits += cmpHolds(a.cmp, x, a.threshold) ? 1 : 0;
      if (hits == 0) failAt("non-exhaustive piecewise: no branch covers " + formatNumber(x), at);
      if (hits > 1) failAt("overlapping piecewise branches at " + formatNumber(x), at);
    }
  }

  const std::string& src_;
  const Params& params_;
  size_t pos_ = 0;
  Expr out_;
};

Expr parseExpr(const std::string& src, const Params& params) {
  Parser p(src, params);
  return p.run();
}

double evalExpr(const Expr& e, double s1, double s2) { return e(s1, s2); }

}  // namespace bbe
