#include "muskat/diagnostics.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

namespace muskat {

namespace {

constexpr int kBrentBits = 52;

/// Minimum of f on [a, b] seeded by a node value; never worse than the seed.
template <class F>
std::pair<double, double> refine_min(F f, double a, double b, double seed_x, double seed_f) {
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, a, b, kBrentBits);
  if (fx < seed_f) return {x, fx};
  return {seed_x, seed_f};
}

int sign_with_tol(double v, double tol) {
  if (std::abs(v) <= tol) return 0;
  return v > 0.0 ? 1 : -1;
}

/// Root in [0, 1] of the cubic through (-1, y0), (0, y1), (1, y2), (2, y3),
/// given y1 and y2 of opposite sign.
double cubic_root(double y0, double y1, double y2, double y3) {
  auto p = [&](double s) {
    const double l0 = -s * (s - 1) * (s - 2) / 6.0;
    const double l1 = (s + 1) * (s - 1) * (s - 2) / 2.0;
    const double l2 = -(s + 1) * s * (s - 2) / 2.0;
    const double l3 = (s + 1) * s * (s - 1) / 6.0;
    return l0 * y0 + l1 * y1 + l2 * y2 + l3 * y3;
  };
  double lo = 0.0, hi = 1.0;
  const bool lo_neg = y1 < 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((p(mid) < 0.0) == lo_neg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Stable:
      return "STABLE";
    case Regime::Critical:
      return "CRITICAL";
    case Regime::Unstable:
      return "UNSTABLE";
  }
  return "UNKNOWN";
}

Regime classify(double min_slope, double slope_tol) {
  if (std::abs(min_slope) <= slope_tol) return Regime::Critical;
  return min_slope > 0.0 ? Regime::Stable : Regime::Unstable;
}

TurningReport turning_report(const SampledCurve& curve, const TurningOptions& options) {
  const std::size_t n = curve.size();
  const Grid& grid = curve.grid();
  const double h = grid.spacing();
  const auto d = curve.dz1(options.filter);
  const TrigInterpolant slope(d);
  const TrigInterpolant p1(curve.p1());
  const TrigInterpolant z2(curve.z2());

  auto sample = [&](double a) {
    return CurveSample{a, a + p1(a), z2(a), slope(a)};
  };
  auto local_min = [&](std::size_t i) {
    const double a = grid.node(i);
    return refine_min([&](double x) { return slope(x); }, a - h, a + h, a, d[i]);
  };
  auto prev = [n](std::size_t i) { return (i + n - 1) % n; };
  auto next = [n](std::size_t i) { return (i + 1) % n; };

  TurningReport report;
  const auto imin = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
  std::tie(report.argmin, report.min_slope) = local_min(imin);
  report.regime = classify(report.min_slope, options.slope_tol);

  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] <= d[prev(i)] && d[i] < d[next(i)]) {
      const auto [a, v] = local_min(i);
      if (v <= options.near_critical_tol) report.slope_minima.push_back(sample(a));
    }
  }

  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = sign_with_tol(d[i], options.slope_tol);

  const bool all_zero = std::all_of(s.begin(), s.end(), [](int v) { return v == 0; });
  if (!all_zero) {
    // Start just after a nonzero node so every zero run is seen whole.
    std::size_t start = 0;
    while (s[start] == 0) ++start;
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t i = (start + step) % n;
      const std::size_t j = next(i);
      if (s[i] != 0 && s[j] != 0 && s[i] != s[j]) {
        // Strict crossing between nodes i and i+1.
        const double ai = grid.node(i);
        const double t = cubic_root(d[prev(i)], d[i], d[j], d[next(j)]);
        double a = ai + t * h;
        for (int it = 0; it < 8; ++it) {
          const double ds = slope.derivative(a, 1);
          if (ds == 0.0) break;
          const double cand = a - slope(a) / ds;
          if (cand < ai || cand > ai + h || std::abs(slope(cand)) >= std::abs(slope(a))) break;
          a = cand;
        }
        report.tangent_points.push_back(sample(a));
      } else if (s[i] != 0 && s[j] == 0) {
        // Zero run j..k-1 bounded by nonzero i and k: one tangent either way.
        std::size_t k = j;
        std::size_t best = j;
        while (s[k] == 0) {
          if (std::abs(d[k]) < std::abs(d[best])) best = k;
          k = next(k);
        }
        report.tangent_points.push_back(sample(grid.node(best)));
      }
    }
  } else {
    report.tangent_points.push_back(sample(report.argmin));
  }

  auto by_alpha = [](const CurveSample& a, const CurveSample& b) { return a.alpha < b.alpha; };
  std::sort(report.tangent_points.begin(), report.tangent_points.end(), by_alpha);
  std::sort(report.slope_minima.begin(), report.slope_minima.end(), by_alpha);
  return report;
}

NormSeries norm_series(const Trajectory& trajectory, const FilterSpec& filter) {
  NormSeries out;
  out.times = trajectory.times;
  for (const auto& curve : trajectory.snapshots) {
    const Grid& grid = curve.grid();
    const double h = grid.spacing();
    const auto z2v = curve.z2();
    const TrigInterpolant z2(z2v);

    std::size_t imax = 0;
    for (std::size_t i = 1; i < z2v.size(); ++i) {
      if (std::abs(z2v[i]) > std::abs(z2v[imax])) imax = i;
    }
    const double a = grid.node(imax);
    const auto [xf, neg_f] = refine_min([&](double x) { return -std::abs(z2(x)); }, a - h,
                                        a + h, a, -std::abs(z2v[imax]));
    out.sup_f.push_back(-neg_f);

    const auto d1 = curve.dz1(filter);
    if (*std::min_element(d1.begin(), d1.end()) <= 0.0) {
      out.sup_slope.emplace_back();
      continue;
    }
    const auto d2 = curve.dz2(filter);
    const TrigInterpolant D1(d1);
    const TrigInterpolant D2(d2);
    std::size_t jmax = 0;
    for (std::size_t i = 1; i < d1.size(); ++i) {
      if (std::abs(d2[i] / d1[i]) > std::abs(d2[jmax] / d1[jmax])) jmax = i;
    }
    const double b = grid.node(jmax);
    auto neg_ratio = [&](double x) {
      const double den = D1(x);
      return den > 0.0 ? -std::abs(D2(x) / den) : 0.0;
    };
    const auto [xs, neg_s] =
        refine_min(neg_ratio, b - h, b + h, b, -std::abs(d2[jmax] / d1[jmax]));
    out.sup_slope.emplace_back(-neg_s);
  }
  return out;
}

std::vector<RegimeInterval> regime_timeline(const Trajectory& trajectory,
                                            double slope_tol) {
  return regime_timeline(trajectory, detect_event_times(trajectory), slope_tol);
}

std::vector<RegimeInterval> regime_timeline(const Trajectory& trajectory,
                                            const std::vector<Event>& events,
                                            double slope_tol) {
  struct Mark {
    double t;
    Regime r;
  };
  std::vector<Mark> marks;
  const FilterSpec& filter = trajectory.recipe.rhs.filter;
  for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
    marks.push_back(
        {trajectory.times[k], classify(min_dz1(trajectory.snapshots[k], filter).value, slope_tol)});
  }
  for (const auto& e : events) {
    if (e.kind == EventKind::EnterStable) marks.push_back({e.time, Regime::Stable});
    if (e.kind == EventKind::EnterUnstable) marks.push_back({e.time, Regime::Unstable});
  }
  if (marks.empty()) return {};
  // Each mark holds from its time onward in the integration direction; a
  // snapshot stays ahead of an event at the same instant.
  const double dir = trajectory.direction();
  std::stable_sort(marks.begin(), marks.end(),
                   [dir](const Mark& a, const Mark& b) { return dir * a.t < dir * b.t; });

  // A CRITICAL stretch ends at its last critical mark (an isolated critical
  // snapshot is a single instant); other regimes hold until the next mark.
  std::vector<RegimeInterval> out;
  out.push_back({marks.front().t, marks.front().t, marks.front().r});
  for (std::size_t k = 1; k < marks.size(); ++k) {
    if (marks[k].r == out.back().regime) {
      out.back().t_end = marks[k].t;
      continue;
    }
    if (out.back().regime != Regime::Critical) out.back().t_end = marks[k].t;
    const double t = out.back().t_end;
    out.push_back({t, marks[k].t, marks[k].r});
  }
  if (dir < 0) {
    std::reverse(out.begin(), out.end());
    for (auto& iv : out) std::swap(iv.t_begin, iv.t_end);
  }
  return out;
}

std::string pattern(const std::vector<RegimeInterval>& timeline) {
  std::string s;
  for (const auto& iv : timeline) {
    if (!s.empty()) s += "->";
    s += to_string(iv.regime);
  }
  return s;
}

}  // namespace muskat
