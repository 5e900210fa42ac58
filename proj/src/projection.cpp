#include "treespace/projection.hpp"

#include <algorithm>
#include <cmath>

#include "treespace/parallel.hpp"

namespace treespace {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio

double euclidean_dist_to(std::span<const SplitLen> x,
                         const std::vector<SplitLen>& y) {
  double d2 = 0.0;
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    double d;
    if (j == y.size() || (i < x.size() && x[i].mask < y[j].mask))
      d = x[i++].len;
    else if (i == x.size() || y[j].mask < x[i].mask)
      d = y[j++].len;
    else
      d = x[i++].len - y[j++].len;
    d2 += d * d;
  }
  return std::sqrt(d2);
}

struct EuclideanGuess {
  double s = 0.0;
  double dist = 0.0;
};

// Euclidean projection of x onto the embedded piecewise-linear image of the
// line, one affine segment per interval, restricted to |s| <= clip.
EuclideanGuess euclidean_guess(std::span<const SplitLen> x,
                               const SimpleLine& line, double clip,
                               std::vector<SplitLen>& buf) {
  static thread_local std::vector<SplitLen> nudged;
  const int k = line.num_pairs();
  const double speed2 = line.speed() * line.speed();
  EuclideanGuess best;
  bool have = false;
  for (int j = 0; j <= k; ++j) {
    double a = std::max(line.interval_lower(j), -clip);
    double b = std::min(line.interval_upper(j), clip);
    if (a > b) continue;
    double s;
    if (a == b) {
      s = a;
    } else {
      // the image is affine on [a,b]: d^2(s) is a parabola with curvature
      // speed^2, minimized at mid + <x - image(mid), slope>/speed^2
      double mid = 0.5 * (a + b);
      double h = (b - a) / 8.0;
      line.evaluate_into(mid, buf);
      line.evaluate_into(mid + h, nudged);
      double dot = 0.0;
      size_t ii = 0, l0 = 0, l1 = 0;
      while (ii < x.size() || l0 < buf.size() || l1 < nudged.size()) {
        uint64_t m = ~uint64_t{0};
        if (ii < x.size()) m = std::min(m, x[ii].mask);
        if (l0 < buf.size()) m = std::min(m, buf[l0].mask);
        if (l1 < nudged.size()) m = std::min(m, nudged[l1].mask);
        double vx = 0.0, v0 = 0.0, v1 = 0.0;
        if (ii < x.size() && x[ii].mask == m) vx = x[ii++].len;
        if (l0 < buf.size() && buf[l0].mask == m) v0 = buf[l0++].len;
        if (l1 < nudged.size() && nudged[l1].mask == m) v1 = nudged[l1++].len;
        dot += (vx - v0) * ((v1 - v0) / h);
      }
      s = speed2 > 0.0 ? std::clamp(mid + dot / speed2, a, b) : mid;
    }
    line.evaluate_into(s, buf);
    double dist = euclidean_dist_to(x, buf);
    if (!have || dist < best.dist) {
      best = {s, dist};
      have = true;
    }
  }
  return best;
}

}  // namespace

Projection project_with_scratch(std::span<const SplitLen> x,
                                const SimpleLine& line,
                                const ProjectOptions& opts,
                                GeodesicScratch& scratch) {
  static thread_local std::vector<SplitLen> buf;
  const double speed = line.speed();
  if (line.num_pairs() == 0 || speed == 0.0) {
    line.evaluate_into(0.0, buf);
    double d = geodesic_distance_kernel(x, buf, scratch, false);
    return {0.0, d, 0.0};
  }

  double clip = opts.clip_radius;
  if (clip <= 0.0) {
    // |s*|*speed <= 2*d(x0,x) <= 2*sqrt(2)*d2(x0,x)
    line.evaluate_into(0.0, buf);
    clip = 2.0 * std::sqrt(2.0) * euclidean_dist_to(x, buf) / speed + 1.0;
  }

  EuclideanGuess guess = euclidean_guess(x, line, clip, buf);
  const double s0 = guess.s;

  scratch.reset_hint();
  auto dist_at = [&](double s) {
    line.evaluate_into(s, buf);
    return geodesic_distance_kernel(x, buf, scratch, true);
  };

  // Bracket: the geodesic distance exceeds the Euclidean one by at most
  // sqrt(2), so the optimum lies within sqrt(2)*eps of arc length from the
  // Euclidean guess; s -> d(x,y(s)) is convex, so the bracket can be
  // verified against an interior probe and widened when too tight.
  double half = std::sqrt(2.0) * guess.dist / speed;
  const double floor_width = 1e-12 * std::max(1.0, std::abs(s0));
  if (half < floor_width) half = floor_width;
  double a = s0 - half, b = s0 + half;
  double fa = dist_at(a), fb = dist_at(b);
  double fm = dist_at(0.5 * (a + b));
  for (int grow = 0; grow < 64 && (fa < fm || fb < fm); ++grow) {
    double width = b - a;
    if (fa < fm) {
      a -= width;
      fa = dist_at(a);
    }
    if (fb < fm) {
      b += width;
      fb = dist_at(b);
    }
    fm = dist_at(0.5 * (a + b));
  }

  const double tol = opts.golden_tol * std::max(1.0, std::abs(s0));
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = dist_at(c), fd = dist_at(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = dist_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = dist_at(d);
    }
  }
  double s_star = fc < fd ? c : d;
  double d_perp = fc < fd ? fc : fd;
  return {s_star, d_perp, std::abs(s_star) * speed};
}

Projection project(const Tree& x, const SimpleLine& line,
                   const ProjectOptions& opts) {
  require_same_taxa(*x.taxa(), *line.midpoint().taxa());
  GeodesicScratch scratch;
  return project_with_scratch(x.entries(), line, opts, scratch);
}

namespace {

GeodesicScratch& tls_scratch() {
  static thread_local GeodesicScratch scratch;
  return scratch;
}

std::vector<Projection> project_all_impl(std::span<const Tree> data,
                                         const SimpleLine& line,
                                         const ProjectOptions& opts,
                                         bool parallel) {
  for (const Tree& t : data)
    require_same_taxa(*t.taxa(), *line.midpoint().taxa());
  std::vector<Projection> out(data.size());
  const int n = static_cast<int>(data.size());
  parallel_for(n, parallel, [&](int i) {
    out[i] = project_with_scratch(data[i].entries(), line, opts, tls_scratch());
  });
  return out;
}

double total_sq_impl(const Tree& x0, std::span<const Tree> data, bool parallel) {
  std::vector<double> d(data.size());
  parallel_for(static_cast<int>(data.size()), parallel, [&](int i) {
    d[i] = geodesic_distance_kernel(x0.entries(), data[i].entries(),
                                    tls_scratch(), false);
  });
  double total = 0.0;
  for (double v : d) total += v * v;
  return total;
}

}  // namespace

std::vector<Projection> project_all(std::span<const Tree> data,
                                    const SimpleLine& line,
                                    const ProjectOptions& opts) {
  return project_all_impl(data, line, opts, true);
}

std::vector<Projection> project_all_serial(std::span<const Tree> data,
                                           const SimpleLine& line,
                                           const ProjectOptions& opts) {
  return project_all_impl(data, line, opts, false);
}

SquaredSums sums_of_squares(const SimpleLine& line, std::span<const Tree> data,
                            const ProjectOptions& opts) {
  if (data.empty()) fail(ErrorCategory::degenerate, "empty tree collection");
  std::vector<Projection> proj = project_all(data, line, opts);
  SquaredSums sums;
  for (const Projection& p : proj) {
    sums.d2_par += p.d_par * p.d_par;
    sums.d2_perp += p.d_perp * p.d_perp;
  }
  return sums;
}

double total_squared_distance(const Tree& x0, std::span<const Tree> data) {
  return total_sq_impl(x0, data, true);
}

double total_squared_distance_serial(const Tree& x0, std::span<const Tree> data) {
  return total_sq_impl(x0, data, false);
}

}  // namespace treespace
