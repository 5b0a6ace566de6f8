#include "bbe/taxonomy.hpp"

#include <cmath>
#include <sstream>

namespace bbe {

const char* toString(Externalities e) {
  switch (e) {
    case Externalities::Positive: return "positive";
    case Externalities::Negative: return "negative";
    case Externalities::Mixed: return "mixed";
    case Externalities::None: return "none";
  }
  return "?";
}

const char* toString(Differences d) {
  switch (d) {
    case Differences::Complements: return "complements";
    case Differences::Substitutes: return "substitutes";
    case Differences::Opposites: return "opposites";
    case Differences::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::string GameClass::summary() const {
  std::ostringstream os;
  os << toString(externalities) << " externalities, " << toString(differences);
  if (differences == Differences::Opposites) os << " (player " << complementPlayer + 1 << " complements)";
  return os.str();
}

namespace {

// Overall sign of a sample grid: +1 or -1 when every informative sample
// agrees and ambiguity stays under 5%, 0 otherwise. `allFlat` reports that
// no sample carried information.
int verdict(const Eigen::MatrixXi& m, int* ambiguous, bool* allFlat) {
  int pos = 0, neg = 0, amb = 0, flat = 0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      int v = m(r, c);
      if (v == 1) ++pos;
      else if (v == -1) ++neg;
      else if (v == 0) ++amb;
      else ++flat;
    }
  if (ambiguous) *ambiguous = amb;
  if (allFlat) *allFlat = pos + neg + amb == 0;
  const int informative = pos + neg + amb;
  if (informative == 0 || (pos > 0 && neg > 0)) return 0;
  if (amb > 0.05 * informative) return 0;
  return pos > 0 ? 1 : (neg > 0 ? -1 : 0);
}

}  // namespace

GameClass classify(const IntervalGame& g, Exec exec) {
  GameClass gc;
  const int L = gc.lattice;
  auto coord = [&](int p, int k) { return g.lo[p] + g.width(p) * (k + 1) / (L + 1); };

  for (int i = 0; i < 2; ++i) {
    const int j = other(i);
    double mn = INFINITY, mx = -INFINITY;
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) {
        double v = g.u(i, coord(i, a), coord(j, b));
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    const double range = std::max(mx - mn, 1e-300);
    gc.tolerance[i] = 1e-7 * range;
    const double tolD = gc.tolerance[i] / g.width(j);
    const double tolX = gc.tolerance[i] / (g.width(i) * g.width(j));
    const double hd = 1e-5 * g.width(j);
    const double hi = 1e-3 * g.width(i), hj = 1e-3 * g.width(j);
    gc.externalitySign[i] = Eigen::MatrixXi::Zero(L, L);
    gc.crossSign[i] = Eigen::MatrixXi::Zero(L, L);
    forEachIndex(L, exec, [&](int a) {
      const double x = coord(i, a);
      for (int b = 0; b < L; ++b) {
        const double y = coord(j, b);
        const double d = (g.u(i, x, y + hd) - g.u(i, x, y - hd)) / (2 * hd);
        const double c = (g.u(i, x + hi, y + hj) - g.u(i, x + hi, y - hj) - g.u(i, x - hi, y + hj) +
                          g.u(i, x - hi, y - hj)) /
                         (4 * hi * hj);
        const int sd = d > tolD ? 1 : (d < -tolD ? -1 : 0);
        const int sc = c > tolX ? 1 : (c < -tolX ? -1 : 0);
        if (sd == 0 && sc == 0) {
          gc.externalitySign[i](a, b) = 2;
          gc.crossSign[i](a, b) = 2;
        } else {
          gc.externalitySign[i](a, b) = sd;
          gc.crossSign[i](a, b) = sc;
        }
      }
    });
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b)
        if (gc.externalitySign[i](a, b) == 2) ++gc.flat[i];
  }

  std::array<int, 2> ext{}, cross{};
  bool flatAll[2] = {false, false};
  int ambE[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    ext[i] = verdict(gc.externalitySign[i], &ambE[i], &flatAll[i]);
    cross[i] = verdict(gc.crossSign[i], &gc.ambiguous[i], nullptr);
  }
  if (flatAll[0] && flatAll[1])
    gc.externalities = Externalities::None;
  else if (ext[0] == 1 && ext[1] == 1)
    gc.externalities = Externalities::Positive;
  else if (ext[0] == -1 && ext[1] == -1)
    gc.externalities = Externalities::Negative;
  else
    gc.externalities = Externalities::Mixed;

  if (cross[0] == 1 && cross[1] == 1) {
    gc.differences = Differences::Complements;
  } else if (cross[0] == -1 && cross[1] == -1) {
    gc.differences = Differences::Substitutes;
  } else if (cross[0] != 0 && cross[1] != 0) {
    gc.differences = Differences::Opposites;
    gc.complementPlayer = cross[0] == 1 ? 0 : 1;
  }
  return gc;
}

Profile lowestNash(const IntervalGame& g, int grid) {
  const GameClass gc = classify(g);
  if (gc.differences != Differences::Complements)
    throw UnsupportedError("lowest equilibrium needs strategic complements; game is " + gc.summary());
  Game game = g;
  const auto eqs = nashEquilibria(game, grid);
  if (eqs.profiles.empty()) throw std::runtime_error("no equilibrium found");
  Profile best = eqs.profiles.front();
  for (const auto& p : eqs.profiles)
    if (p[0].x + p[1].x < best[0].x + best[1].x) best = p;
  const double tol = 1e-6 * std::max(g.width(0), g.width(1));
  for (const auto& p : eqs.profiles)
    if (p[0].x < best[0].x - tol || p[1].x < best[1].x - tol)
      throw std::logic_error("equilibria of a complements game are not ordered: (" + describe(p[0]) + ", " +
                             describe(p[1]) + ") vs (" + describe(best[0]) + ", " + describe(best[1]) + ")");
  return best;
}

IntervalGame relabel(const IntervalGame& g, int player) {
  IntervalGame out = g;
  const int var = player + 1;
  for (int i = 0; i < 2; ++i) {
    out.payoff[i] = g.payoff[i].affineSubstitute(var, -1.0, g.lo[player] + g.hi[player]);
    out.source[i] = out.payoff[i].print();
  }
  out.name = g.name + " (player " + std::to_string(player + 1) + " relabelled)";
  return out;
}

}  // namespace bbe
