#include "scaling/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace scaling {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double safe_eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> fx;

  void sort() {
    std::vector<std::size_t> idx(fx.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> x2;
    std::vector<double> f2;
    x2.reserve(idx.size());
    f2.reserve(idx.size());
    for (auto i : idx) {
      x2.push_back(std::move(x[i]));
      f2.push_back(fx[i]);
    }
    x = std::move(x2);
    fx = std::move(f2);
  }
};

Simplex build_simplex(const Objective& f, const std::vector<double>& x0, double f0,
                      const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  Simplex s;
  s.x.push_back(x0);
  s.fx.push_back(f0);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = x0;
    v[i] = v[i] != 0.0 ? v[i] * (1.0 + opt.step_rel) : opt.step_abs;
    s.fx.push_back(safe_eval(f, v));
    s.x.push_back(std::move(v));
  }
  return s;
}

bool has_converged(const Simplex& s, const NelderMeadOptions& opt) {
  const double fbest = s.fx.front();
  const double fworst = s.fx.back();
  if (std::isfinite(fworst) && fworst - fbest <= opt.ftol * std::abs(fbest) + opt.fatol) {
    return true;
  }
  double xspread = 0.0;
  const auto& best = s.x.front();
  for (std::size_t j = 1; j < s.x.size(); ++j) {
    for (std::size_t i = 0; i < best.size(); ++i) {
      xspread = std::max(xspread, std::abs(s.x[j][i] - best[i]) / (1.0 + std::abs(best[i])));
    }
  }
  return xspread <= opt.xtol;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  NelderMeadResult result;
  result.f = safe_eval(f, x0);
  result.x = x0;
  if (n == 0) {
    result.converged = true;
    return result;
  }

  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto blend = [n](const std::vector<double>& a, const std::vector<double>& b, double t,
                   std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
  };

  while (result.iterations < opt.max_iters) {
    Simplex s = build_simplex(f, result.x, result.f, opt);
    s.sort();
    bool converged = false;
    while (result.iterations < opt.max_iters) {
      if (has_converged(s, opt)) {
        converged = true;
        break;
      }
      ++result.iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s.x[j][i];
      }
      for (auto& c : centroid) c /= static_cast<double>(n);

      auto& worst = s.x[n];
      blend(centroid, worst, -kReflect, xr);
      const double fr = safe_eval(f, xr);

      if (fr < s.fx[0]) {
        blend(centroid, xr, kExpand, xe);
        const double fe = safe_eval(f, xe);
        if (fe < fr) {
          worst = xe;
          s.fx[n] = fe;
        } else {
          worst = xr;
          s.fx[n] = fr;
        }
      } else if (fr < s.fx[n - 1]) {
        worst = xr;
        s.fx[n] = fr;
      } else {
        const bool outside = fr < s.fx[n];
        blend(centroid, outside ? xr : worst, kContract, xc);
        const double fc = safe_eval(f, xc);
        if (fc < (outside ? fr : s.fx[n])) {
          worst = xc;
          s.fx[n] = fc;
        } else {
          for (std::size_t j = 1; j <= n; ++j) {
            blend(s.x[0], s.x[j], kShrink, xc);
            s.x[j] = xc;
            s.fx[j] = safe_eval(f, s.x[j]);
          }
        }
      }
      s.sort();
    }

    const double improvement = result.f - s.fx[0];
    const bool improved = s.fx[0] < result.f;
    if (improved) {
      result.x = s.x[0];
      result.f = s.fx[0];
    }
    result.converged = converged;
    if (!converged) break;
    if (!improved || improvement <= opt.ftol * std::abs(result.f) + opt.fatol) break;
    ++result.restarts;
  }
  return result;
}

}  // namespace scaling
