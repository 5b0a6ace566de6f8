#pragma once

#include <functional>
#include <vector>

namespace bbe {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool singleton() const { return lo == hi; }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  double mid() const { return 0.5 * (lo + hi); }
};

using Fn1 = std::function<double(double)>;

// Full argmax set of a concave function on [lo, hi]. A coarse scan locates
// the peak, golden-section polishes it, and a flatness probe decides whether
// the maximum is attained on a plateau, in which case the plateau edges are
// found by bisection. Plateaus narrower than 1e-6 of the width collapse to a
// point.
struct ArgmaxResult {
  Interval arg;
  double value = 0.0;
};
ArgmaxResult argmaxConcave(const Fn1& f, double lo, double hi);

// Golden-section maximisation of a unimodal function; returns the abscissa.
double goldenMax(const Fn1& f, double a, double b, double tol);

// Bisection for a sign change of f between a and b (f(a) and f(b) given).
double bisectRoot(const Fn1& f, double a, double b, double fa, int iters = 60);

// Signed distance from v to [iv.lo, iv.hi]: negative below, positive above,
// zero inside.
inline double signedDistance(double v, const Interval& iv) {
  return v < iv.lo ? v - iv.lo : (v > iv.hi ? v - iv.hi : 0.0);
}

// Zero set of a continuous-ish scalar function on [lo, hi] from n+1 samples.
// Isolated roots come back as degenerate intervals refined by bisection;
// runs of exact zeros come back as intervals with bisected edges.
std::vector<Interval> zeroSet(const Fn1& f, double lo, double hi, int n);

// Merges overlapping intervals and those separated by at most `gap`.
std::vector<Interval> mergeIntervals(std::vector<Interval> v, double gap);

}  // namespace bbe
