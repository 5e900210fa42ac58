#include "treespace/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace treespace {

namespace {

// Subdivide a support pair when its min vertex cover weighs less than
// 1 - kCutTol; compare leg ratios to relative tolerance kRatioTol.
constexpr double kCutTol = 1e-12;
constexpr double kRatioTol = 1e-12;
constexpr double kFlowEps = 1e-15;
// Upper bound stand-in for the uncuttable incompatibility edges; any cut
// containing one costs more than the whole vertex set (weights sum to 2).
constexpr double kInfCap = 4.0;

// Dinic max-flow on a dense residual matrix. The graphs here are tiny
// bipartite covers (a few dozen nodes at most), so dense is the fast and
// simple choice.
struct FlowSolver {
  int n = 0;
  std::vector<double> cap;  // residual, row-major n*n
  std::vector<int> level;
  std::vector<int> iter;
  std::vector<int> queue;

  void init(int nodes) {
    n = nodes;
    cap.assign(static_cast<size_t>(n) * n, 0.0);
    level.assign(n, -1);
    iter.assign(n, 0);
    queue.resize(n);
  }

  double& at(int u, int v) { return cap[static_cast<size_t>(u) * n + v]; }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    int head = 0, tail = 0;
    queue[tail++] = s;
    level[s] = 0;
    while (head < tail) {
      int u = queue[head++];
      const double* row = &cap[static_cast<size_t>(u) * n];
      for (int v = 0; v < n; ++v) {
        if (row[v] > kFlowEps && level[v] < 0) {
          level[v] = level[u] + 1;
          queue[tail++] = v;
        }
      }
    }
    return level[t] >= 0;
  }

  double dfs(int u, int t, double f) {
    if (u == t) return f;
    for (int& v = iter[u]; v < n; ++v) {
      if (at(u, v) > kFlowEps && level[v] == level[u] + 1) {
        double pushed = dfs(v, t, std::min(f, at(u, v)));
        if (pushed > 0.0) {
          at(u, v) -= pushed;
          at(v, u) += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  }

  double max_flow(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      double pushed;
      while ((pushed = dfs(s, t, kInfCap)) > 0.0) flow += pushed;
    }
    return flow;
  }

  // Source side of the min cut in the final residual graph.
  void reachable(int s, std::vector<char>& vis) {
    vis.assign(n, 0);
    int head = 0, tail = 0;
    queue[tail++] = s;
    vis[s] = 1;
    while (head < tail) {
      int u = queue[head++];
      const double* row = &cap[static_cast<size_t>(u) * n];
      for (int v = 0; v < n; ++v)
        if (row[v] > kFlowEps && !vis[v]) {
          vis[v] = 1;
          queue[tail++] = v;
        }
    }
  }
};

struct Leg {
  std::vector<int> a;  // indices into ax
  std::vector<int> b;  // indices into by
  double na2 = 0.0;    // squared norm of the a-side lengths
  double nb2 = 0.0;
};

}  // namespace

struct GeodesicScratch::Impl {
  std::vector<SplitLen> ax, by;    // x-only / y-only splits, sorted by mask
  std::vector<double> common_sq;   // squared length differences of shared splits
  std::vector<uint64_t> incompat;  // per ax index: bitmask over by indices
  std::vector<Leg> legs;
  FlowSolver flow;
  std::vector<char> vis;
  std::vector<double> sumbuf;
  // warm start: previous disjoint split sets and leg assignment
  bool has_hint = false;
  std::vector<uint64_t> hint_ax, hint_by;
  std::vector<int> hint_leg_a, hint_leg_b;
  int hint_nlegs = 0;
};

GeodesicScratch::GeodesicScratch() : impl_(new Impl) {}
GeodesicScratch::~GeodesicScratch() { delete impl_; }
void GeodesicScratch::reset_hint() { impl_->has_hint = false; }

namespace {

using Impl = GeodesicScratch::Impl;

void split_sets(std::span<const SplitLen> x, std::span<const SplitLen> y,
                Impl& im) {
  im.ax.clear();
  im.by.clear();
  im.common_sq.clear();
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].mask < y[j].mask)) {
      im.ax.push_back(x[i++]);
    } else if (i == x.size() || y[j].mask < x[i].mask) {
      im.by.push_back(y[j++]);
    } else {
      double d = x[i++].len - y[j++].len;
      if (d != 0.0) im.common_sq.push_back(d * d);
    }
  }
}

void build_incompat(Impl& im, uint64_t full) {
  im.incompat.assign(im.ax.size(), 0);
  for (size_t i = 0; i < im.ax.size(); ++i) {
    uint64_t a = im.ax[i].mask;
    uint64_t row = 0;
    for (size_t j = 0; j < im.by.size(); ++j) {
      uint64_t b = im.by[j].mask;
      bool comp = (a & b) == 0 || (a & ~b) == 0 || (~a & b) == 0 ||
                  ((a | b) & full) == full;
      if (!comp) row |= uint64_t{1} << j;
    }
    im.incompat[i] = row;
  }
}

// Value-sorted summation everywhere a norm is formed keeps distances exactly
// symmetric and invariant under taxon relabeling.
double sorted_norm2(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

void recompute_norms(Leg& leg, const Impl& im) {
  std::vector<double> sq;
  sq.reserve(std::max(leg.a.size(), leg.b.size()));
  for (int i : leg.a) sq.push_back(im.ax[i].len * im.ax[i].len);
  leg.na2 = sorted_norm2(sq);
  sq.clear();
  for (int j : leg.b) sq.push_back(im.by[j].len * im.by[j].len);
  leg.nb2 = sorted_norm2(sq);
}

// ratio(u) <= ratio(v) with tolerance, comparing na/nb by cross products.
bool ratio_leq(const Leg& u, const Leg& v) {
  double lhs = std::sqrt(u.na2) * std::sqrt(v.nb2);
  double rhs = std::sqrt(v.na2) * std::sqrt(u.nb2);
  return lhs <= rhs + kRatioTol * (lhs + rhs);
}

// One refinement step: min-weight vertex cover of the incompatibility graph
// between leg.a and leg.b, weights (len/norm)^2. Returns true and the two
// sub-legs when the cover weighs less than 1.
bool try_subdivide(const Leg& leg, Impl& im, Leg& first, Leg& second) {
  if (leg.a.empty() || leg.b.empty()) return false;
  const int na = static_cast<int>(leg.a.size());
  const int nb = static_cast<int>(leg.b.size());

  bool any_edge = false;
  for (int ia = 0; ia < na && !any_edge; ++ia)
    for (int jb = 0; jb < nb; ++jb)
      if (im.incompat[leg.a[ia]] >> leg.b[jb] & 1) {
        any_edge = true;
        break;
      }

  std::vector<char>& vis = im.vis;
  if (!any_edge) {
    vis.assign(na + nb + 2, 0);
    // cover is empty: everything on the source side except the sink
    for (int ia = 0; ia < na; ++ia) vis[1 + ia] = 1;
    vis[0] = 1;
  } else {
    FlowSolver& fs = im.flow;
    fs.init(na + nb + 2);
    const int source = 0, sink = na + nb + 1;
    for (int ia = 0; ia < na; ++ia) {
      double w = im.ax[leg.a[ia]].len;
      fs.at(source, 1 + ia) = w * w / leg.na2;
    }
    for (int jb = 0; jb < nb; ++jb) {
      double w = im.by[leg.b[jb]].len;
      fs.at(1 + na + jb, sink) = w * w / leg.nb2;
    }
    for (int ia = 0; ia < na; ++ia) {
      uint64_t row = im.incompat[leg.a[ia]];
      for (int jb = 0; jb < nb; ++jb)
        if (row >> leg.b[jb] & 1) fs.at(1 + ia, 1 + na + jb) = kInfCap;
    }
    double cover = fs.max_flow(source, sink);
    if (!(cover < 1.0 - kCutTol)) return false;
    fs.reachable(source, vis);
  }

  // C1 = unreachable a's (in the cover), D2 = reachable b's (in the cover);
  // new pairs (C1, D1) then (C2, D2), which cannot both be empty-sided.
  first = Leg{};
  second = Leg{};
  for (int ia = 0; ia < na; ++ia)
    (vis[1 + ia] ? second.a : first.a).push_back(leg.a[ia]);
  for (int jb = 0; jb < nb; ++jb)
    (vis[1 + na + jb] ? second.b : first.b).push_back(leg.b[jb]);
  if (first.a.size() == leg.a.size() && second.b.size() == leg.b.size())
    return false;  // degenerate: nothing split off
  recompute_norms(first, im);
  recompute_norms(second, im);
  return true;
}

// Refine the current legs until no pair subdivides, then repair any ratio
// ordering violations by merging and re-refining. Cold starts (single cone
// pair) terminate without merges; merges can fire after a warm start.
void refine_support(Impl& im) {
  const int guard =
      64 * (static_cast<int>(im.ax.size() + im.by.size()) + 2) + 64;
  int steps = 0;
  for (;;) {
    // subdivision pass
    size_t idx = 0;
    while (idx < im.legs.size()) {
      if (++steps > guard)
        fail(ErrorCategory::validation, "geodesic support refinement did not converge");
      Leg first, second;
      if (try_subdivide(im.legs[idx], im, first, second)) {
        im.legs[idx] = std::move(first);
        im.legs.insert(im.legs.begin() + idx + 1, std::move(second));
        // a subdivided pair can itself subdivide further
      } else {
        ++idx;
      }
    }
    // ordering pass
    bool merged = false;
    for (size_t i = 0; i + 1 < im.legs.size(); ++i) {
      if (!ratio_leq(im.legs[i], im.legs[i + 1])) {
        Leg joined;
        joined.a = im.legs[i].a;
        joined.a.insert(joined.a.end(), im.legs[i + 1].a.begin(),
                        im.legs[i + 1].a.end());
        joined.b = im.legs[i].b;
        joined.b.insert(joined.b.end(), im.legs[i + 1].b.begin(),
                        im.legs[i + 1].b.end());
        std::sort(joined.a.begin(), joined.a.end());
        std::sort(joined.b.begin(), joined.b.end());
        recompute_norms(joined, im);
        im.legs[i] = std::move(joined);
        im.legs.erase(im.legs.begin() + i + 1);
        merged = true;
        break;
      }
    }
    if (!merged) return;
  }
}

void cone_start(Impl& im) {
  im.legs.clear();
  if (im.ax.empty() && im.by.empty()) return;
  Leg all;
  all.a.resize(im.ax.size());
  all.b.resize(im.by.size());
  for (size_t i = 0; i < im.ax.size(); ++i) all.a[i] = static_cast<int>(i);
  for (size_t j = 0; j < im.by.size(); ++j) all.b[j] = static_cast<int>(j);
  recompute_norms(all, im);
  im.legs.push_back(std::move(all));
}

bool hint_applies(const Impl& im) {
  if (!im.has_hint) return false;
  if (im.hint_ax.size() != im.ax.size() || im.hint_by.size() != im.by.size())
    return false;
  for (size_t i = 0; i < im.ax.size(); ++i)
    if (im.hint_ax[i] != im.ax[i].mask) return false;
  for (size_t j = 0; j < im.by.size(); ++j)
    if (im.hint_by[j] != im.by[j].mask) return false;
  return true;
}

void legs_from_hint(Impl& im) {
  im.legs.assign(im.hint_nlegs, Leg{});
  for (size_t i = 0; i < im.ax.size(); ++i)
    im.legs[im.hint_leg_a[i]].a.push_back(static_cast<int>(i));
  for (size_t j = 0; j < im.by.size(); ++j)
    im.legs[im.hint_leg_b[j]].b.push_back(static_cast<int>(j));
  im.legs.erase(std::remove_if(im.legs.begin(), im.legs.end(),
                               [](const Leg& l) {
                                 return l.a.empty() && l.b.empty();
                               }),
                im.legs.end());
  for (Leg& l : im.legs) recompute_norms(l, im);
  if (im.legs.empty()) cone_start(im);
}

void store_hint(Impl& im) {
  im.hint_ax.resize(im.ax.size());
  im.hint_by.resize(im.by.size());
  for (size_t i = 0; i < im.ax.size(); ++i) im.hint_ax[i] = im.ax[i].mask;
  for (size_t j = 0; j < im.by.size(); ++j) im.hint_by[j] = im.by[j].mask;
  im.hint_leg_a.assign(im.ax.size(), 0);
  im.hint_leg_b.assign(im.by.size(), 0);
  for (size_t k = 0; k < im.legs.size(); ++k) {
    for (int i : im.legs[k].a) im.hint_leg_a[i] = static_cast<int>(k);
    for (int j : im.legs[k].b) im.hint_leg_b[j] = static_cast<int>(k);
  }
  im.hint_nlegs = static_cast<int>(im.legs.size());
  im.has_hint = true;
}

// Sum in value-sorted order: exactly symmetric in x/y and invariant under
// taxon relabeling.
double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

double support_length(Impl& im) {
  std::vector<double>& terms = im.sumbuf;
  terms.clear();
  for (const Leg& leg : im.legs) {
    double s = std::sqrt(leg.na2) + std::sqrt(leg.nb2);
    terms.push_back(s * s);
  }
  terms.insert(terms.end(), im.common_sq.begin(), im.common_sq.end());
  return std::sqrt(sorted_sum(terms));
}

uint64_t full_mask_of(std::span<const SplitLen> x) {
  // Canonical masks exclude taxon 0, and the terminal splits present in
  // every tree cover all other taxa, so the full mask is the union plus
  // bit 0.
  uint64_t full = 0;
  for (const SplitLen& e : x) full |= e.mask;
  return full | 1;
}

}  // namespace

double geodesic_distance_kernel(std::span<const SplitLen> x,
                                std::span<const SplitLen> y,
                                GeodesicScratch& scratch, bool use_hint) {
  Impl& im = *scratch.impl();
  split_sets(x, y, im);
  if (im.ax.empty() && im.by.empty()) {
    std::vector<double>& terms = im.sumbuf;
    terms.assign(im.common_sq.begin(), im.common_sq.end());
    return std::sqrt(sorted_sum(terms));
  }
  build_incompat(im, full_mask_of(x));
  if (use_hint && hint_applies(im))
    legs_from_hint(im);
  else
    cone_start(im);
  refine_support(im);
  if (use_hint) store_hint(im);
  return support_length(im);
}

double distance_with_scratch(const Tree& x, const Tree& y,
                             GeodesicScratch& scratch) {
  require_same_taxa(*x.taxa(), *y.taxa());
  return geodesic_distance_kernel(x.entries(), y.entries(), scratch, false);
}

double distance(const Tree& x, const Tree& y) {
  require_same_taxa(*x.taxa(), *y.taxa());
  GeodesicScratch scratch;
  return geodesic_distance_kernel(x.entries(), y.entries(), scratch, false);
}

double cone_path_distance(const Tree& x, const Tree& y) {
  require_same_taxa(*x.taxa(), *y.taxa());
  GeodesicScratch scratch;
  Impl& im = *scratch.impl();
  split_sets(x.entries(), y.entries(), im);
  std::vector<double> sq;
  for (const SplitLen& e : im.ax) sq.push_back(e.len * e.len);
  double na2 = sorted_norm2(sq);
  sq.clear();
  for (const SplitLen& e : im.by) sq.push_back(e.len * e.len);
  double nb2 = sorted_norm2(sq);
  std::vector<double> terms = im.common_sq;
  double legs = std::sqrt(na2) + std::sqrt(nb2);
  if (legs > 0.0) terms.push_back(legs * legs);
  return std::sqrt(sorted_sum(terms));
}

GeodesicPath::GeodesicPath(Tree x, Tree y, std::vector<CarriedSplit> common,
                           std::vector<SupportLeg> support, double length)
    : x_(std::move(x)),
      y_(std::move(y)),
      common_(std::move(common)),
      support_(std::move(support)),
      length_(length) {}

GeodesicPath geodesic(const Tree& x, const Tree& y) {
  require_same_taxa(*x.taxa(), *y.taxa());
  GeodesicScratch scratch;
  Impl& im = *scratch.impl();
  const uint64_t full = x.full_mask();
  split_sets(x.entries(), y.entries(), im);
  build_incompat(im, full);
  cone_start(im);
  refine_support(im);
  double length = support_length(im);

  std::vector<CarriedSplit> common;
  for (const SplitLen& e : x.entries()) {
    Split p = Split::from_side(e.mask, full);
    double ly = y.length(p);
    if (ly > 0.0) common.push_back({p, e.len, ly});
  }
  std::vector<SupportLeg> support;
  support.reserve(im.legs.size());
  for (const Leg& leg : im.legs) {
    SupportLeg out;
    for (int i : leg.a) out.drop.push_back(Split::from_side(im.ax[i].mask, full));
    for (int j : leg.b) out.gain.push_back(Split::from_side(im.by[j].mask, full));
    out.drop_norm = std::sqrt(leg.na2);
    out.gain_norm = std::sqrt(leg.nb2);
    support.push_back(std::move(out));
  }
  return GeodesicPath(x, y, std::move(common), std::move(support), length);
}

Tree GeodesicPath::point_along(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    fail(ErrorCategory::validation, "path parameter outside [0,1]");
  std::vector<std::pair<Split, double>> lengths;
  for (const CarriedSplit& c : common_)
    lengths.emplace_back(c.split, (1.0 - t) * c.len_x + t * c.len_y);
  for (const SupportLeg& leg : support_) {
    const double a = leg.drop_norm, b = leg.gain_norm;
    const double boundary = (a + b) > 0.0 ? a / (a + b) : 0.0;
    if (t < boundary) {
      // drop splits still positive: lengths scale as ((1-t)a - t b)/a
      const double scale = ((1.0 - t) * a - t * b) / a;
      for (const Split& p : leg.drop)
        lengths.emplace_back(p, x_.length(p) * scale);
    } else if (t > boundary) {
      const double scale = (t * b - (1.0 - t) * a) / b;
      for (const Split& p : leg.gain)
        lengths.emplace_back(p, y_.length(p) * scale);
    }
    // exactly at the boundary both sides sit at zero and are omitted
  }
  std::erase_if(lengths, [](const auto& e) { return !(e.second > 0.0); });
  return Tree(x_.taxa(), std::move(lengths));
}

}  // namespace treespace
