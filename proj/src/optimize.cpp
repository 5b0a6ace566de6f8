#include "bbe/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bbe {

namespace {

constexpr int kCoarse = 32;
constexpr double kInvPhi = 0.6180339887498949;

// Edge of a predicate between `in` (holds) and `out` (fails); returns the
// last point known to satisfy it.
double bisectEdge(const std::function<bool(double)>& pred, double in, double out) {
  for (int it = 0; it < 64; ++it) {
    double m = 0.5 * (in + out);
    if (m == in || m == out) break;
    if (pred(m))
      in = m;
    else
      out = m;
  }
  return in;
}

// Value comparisons cannot place a smooth peak closer than about the square
// root of the rounding error. Bisecting on the sign of a central difference
// gets several more digits; the bracket must show the slope changing sign.
double polishPeak(const Fn1& f, double x, double lo, double hi, double w) {
  const double h = 1e-6 * w, r = 3e-8 * w;
  auto slope = [&](double t) { return f(t + h) - f(t - h); };
  double a = x - r, b = x + r;
  if (a - h < lo || b + h > hi) return x;
  if (!(slope(a) > 0.0 && slope(b) < 0.0)) return x;
  for (int it = 0; it < 16; ++it) {
    const double m = 0.5 * (a + b);
    const double d = slope(m);
    if (d > 0.0)
      a = m;
    else if (d < 0.0)
      b = m;
    else
      return m;
  }
  return 0.5 * (a + b);
}

}  // namespace

double goldenMax(const Fn1& f, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

ArgmaxResult argmaxConcave(const Fn1& f, double lo, double hi) {
  if (!(hi > lo)) return {{lo, lo}, f(lo)};
  const double w = hi - lo;
  std::array<double, kCoarse + 1> xs{}, vs{};
  for (int k = 0; k <= kCoarse; ++k) {
    xs[k] = k == kCoarse ? hi : lo + w * k / kCoarse;
    vs[k] = f(xs[k]);
  }
  int best = static_cast<int>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  const double m = vs[best];
  const double tau = 1e-13 * std::max(1.0, std::abs(m));
  int kmin = 0, kmax = kCoarse;
  while (vs[kmin] < m - tau) ++kmin;
  while (vs[kmax] < m - tau) --kmax;

  double x = xs[best], v = m;
  // A corner maximiser whose neighbourhood already falls needs no polish;
  // this is the common case for payoffs linear in the own strategy.
  const double nudge = 1e-9 * w;
  const bool corner = (best == 0 && f(lo + nudge) <= m) || (best == kCoarse && f(hi - nudge) <= m);
  if (!corner) {
    const int ia = std::max(kmin - 1, 0), ib = std::min(kmax + 1, kCoarse);
    double g = polishPeak(f, goldenMax(f, xs[ia], xs[ib], 1e-8 * w), lo, hi, w);
    double fg = f(g);
    if (fg > v) {
      x = g;
      v = fg;
    }
  }
  // Snap onto a boundary maximiser so that corner replies are exact.
  if (kmin == 0 && vs[0] >= v) {
    x = lo;
    v = vs[0];
  }
  if (kmax == kCoarse && vs[kCoarse] > v) {
    x = hi;
    v = vs[kCoarse];
  }

  const double tauv = 1e-13 * std::max(1.0, std::abs(v));
  const double probe = 1e-6 * w;
  const double xl = std::max(lo, x - probe), xr = std::min(hi, x + probe);
  const bool flatL = xl < x && f(xl) >= v - tauv;
  const bool flatR = xr > x && f(xr) >= v - tauv;
  if (!flatL && !flatR) return {{x, x}, v};

  auto onTop = [&](double t) { return f(t) >= v - tauv; };
  double a = x, b = x;
  if (flatL) a = onTop(lo) ? lo : bisectEdge(onTop, xl, lo);
  if (flatR) b = onTop(hi) ? hi : bisectEdge(onTop, xr, hi);
  if (b - a < 1e-6 * w) return {{x, x}, v};
  return {{a, b}, v};
}

double bisectRoot(const Fn1& f, double a, double b, double fa, int iters) {
  for (int it = 0; it < iters; ++it) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<Interval> zeroSet(const Fn1& f, double lo, double hi, int n) {
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int k = 0; k <= n; ++k) {
    xs[k] = k == n ? hi : lo + (hi - lo) * k / n;
    fs[k] = f(xs[k]);
  }
  auto isZero = [&](double t) { return f(t) == 0.0; };
  std::vector<Interval> out;
  for (int k = 0; k <= n; ++k) {
    if (fs[k] == 0.0) {
      int m = k;
      while (m + 1 <= n && fs[m + 1] == 0.0) ++m;
      double a = k == 0 ? xs[0] : bisectEdge(isZero, xs[k], xs[k - 1]);
      double b = m == n ? xs[n] : bisectEdge(isZero, xs[m], xs[m + 1]);
      out.push_back({a, b});
      k = m;
      continue;
    }
    if (k < n && fs[k + 1] != 0.0 && (fs[k] < 0) != (fs[k + 1] < 0)) {
      // Bisect; landing on an exact zero means a zero run inside the cell.
      double a = xs[k], b = xs[k + 1], fa = fs[k];
      bool hit = false;
      double z = 0.0;
      for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        double fm = f(mid);
        if (fm == 0.0) {
          hit = true;
          z = mid;
          break;
        }
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      if (hit)
        out.push_back({bisectEdge(isZero, z, a), bisectEdge(isZero, z, b)});
      else
        out.push_back({0.5 * (a + b), 0.5 * (a + b)});
    }
  }
  return mergeIntervals(std::move(out), 0.0);
}

std::vector<Interval> mergeIntervals(std::vector<Interval> v, double gap) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi + gap)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace bbe
