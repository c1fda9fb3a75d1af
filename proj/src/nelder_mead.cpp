#include "fuzzyadapt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fuzzyadapt {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Target: return "target";
    case StopReason::Converged: return "converged";
    case StopReason::MaxIterations: return "max-iterations";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

struct Vertex {
  Point u;  // normalised coordinates
  double f;
};

class BoxedSearch {
 public:
  BoxedSearch(const Objective& f, std::span<const double> lower, std::span<const double> upper)
      : f_(f), lower_(lower.begin(), lower.end()), upper_(upper.begin(), upper.end()) {}

  std::size_t dims() const { return lower_.size(); }

  Point to_box(const Point& u) const {
    Point x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = lower_[i] + u[i] * (upper_[i] - lower_[i]);
    return x;
  }

  Point to_unit(const Point& x) const {
    Point u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = upper_[i] - lower_[i];
      u[i] = w > 0.0 ? std::clamp((x[i] - lower_[i]) / w, 0.0, 1.0) : 0.0;
    }
    return u;
  }

  Vertex eval(Point u) {
    for (auto& v : u) v = std::clamp(v, 0.0, 1.0);
    const Point x = to_box(u);
    double y = f_(std::span<const double>(x));
    if (std::isnan(y)) y = kInf;
    ++evaluations;
    return {std::move(u), y};
  }

  int evaluations = 0;

 private:
  const Objective& f_;
  Point lower_;
  Point upper_;
};

Point affine(const Point& base, const Point& dir_from, const Point& dir_to, double t) {
  // base + t * (dir_to - dir_from)
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (dir_to[i] - dir_from[i]);
  return out;
}

double diameter(const std::vector<Vertex>& s) {
  double d = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k)
    for (std::size_t i = 0; i < s[0].u.size(); ++i) d = std::max(d, std::abs(s[k].u[i] - s[0].u[i]));
  return d;
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& f, std::vector<double> x0, std::span<const double> lower,
                                      std::span<const double> upper, const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0 || lower.size() != n || upper.size() != n)
    throw std::invalid_argument("nelder_mead_minimize: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("nelder_mead_minimize: inverted bounds");
  if (!(opt.initial_scale > 0.0) || opt.max_iterations < 0)
    throw std::invalid_argument("nelder_mead_minimize: invalid options");

  BoxedSearch box(f, lower, upper);
  NelderMeadResult result;

  Vertex best = box.eval(box.to_unit(x0));
  auto reached = [&](const Vertex& v) {
    if (opt.target && v.f <= *opt.target) return true;
    if (!opt.accept || !std::isfinite(v.f)) return false;
    const Point x = box.to_box(v.u);
    return opt.accept(std::span<const double>(x), v.f);
  };
  auto finish = [&](StopReason reason) {
    result.x = box.to_box(best.u);
    result.value = best.f;
    result.evaluations = box.evaluations;
    result.reason = reason;
    return result;
  };
  if (reached(best)) return finish(StopReason::Target);

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  for (int round = 0; round <= opt.restarts; ++round) {
    // Fresh simplex around the incumbent; step inward when the edge would leave the box.
    std::vector<Vertex> s{best};
    for (std::size_t i = 0; i < n; ++i) {
      Point u = best.u;
      u[i] += (u[i] + opt.initial_scale <= 1.0) ? opt.initial_scale : -opt.initial_scale;
      s.push_back(box.eval(std::move(u)));
    }

    bool converged = false;
    while (result.iterations < opt.max_iterations) {
      std::stable_sort(s.begin(), s.end(), by_value);
      if (s[0].f < best.f) {
        best = s[0];
        if (reached(best)) return finish(StopReason::Target);
      }
      if (diameter(s) < opt.tolerance) {
        converged = true;
        break;
      }
      ++result.iterations;

      Point centroid(n, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s[k].u[i] / static_cast<double>(n);
      const Vertex& worst = s[n];

      Vertex r = box.eval(affine(centroid, worst.u, centroid, opt.reflection));
      if (r.f < s[0].f) {
        Vertex e = box.eval(affine(centroid, centroid, r.u, opt.expansion));
        s[n] = e.f < r.f ? std::move(e) : std::move(r);
        continue;
      }
      if (r.f < s[n - 1].f) {
        s[n] = std::move(r);
        continue;
      }
      if (r.f < worst.f) {
        Vertex c = box.eval(affine(centroid, centroid, r.u, opt.contraction));
        if (c.f <= r.f) {
          s[n] = std::move(c);
          continue;
        }
      } else {
        Vertex c = box.eval(affine(centroid, centroid, worst.u, opt.contraction));
        if (c.f < worst.f) {
          s[n] = std::move(c);
          continue;
        }
      }
      for (std::size_t k = 1; k <= n; ++k) s[k] = box.eval(affine(s[0].u, s[0].u, s[k].u, opt.shrink));
    }

    std::stable_sort(s.begin(), s.end(), by_value);
    if (s[0].f < best.f) best = s[0];
    if (reached(best)) return finish(StopReason::Target);
    if (!converged) return finish(StopReason::MaxIterations);
  }
  return finish(StopReason::Converged);
}

}  // namespace fuzzyadapt
