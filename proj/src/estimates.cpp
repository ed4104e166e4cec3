#include "rbmo/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rbmo/rotated_inner.hpp"

namespace rbmo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tol_of(double scale) { return 1e-12 * std::max(1.0, scale); }

RotatedRect rotated(const DyadicRectangle& K, double theta) { return {K.realize(), theta}; }

RotatedRect rotated_max(const LambdaConfig& cfg) { return rotated(cfg.K_max, cfg.theta); }

double scale_of(const LambdaConfig& cfg) {
  const Rect b = rotated_max(cfg).bbox();
  return std::max({std::abs(b.x0), std::abs(b.y0), std::abs(b.x1()), std::abs(b.y1()),
                   std::ldexp(1.0, cfg.r1), std::ldexp(1.0, cfg.r2)});
}

// closed meeting of segment [a,b] with convex polygon P by separating axes
bool sat_segment_polygon(Point a, Point b, const ConvexPolygon& P, double tol) {
  auto separated = [&](Point n) {
    const double len = std::hypot(n.x, n.y);
    if (len == 0.0) return false;
    double smin = std::min(dot(n, a), dot(n, b)), smax = std::max(dot(n, a), dot(n, b));
    double pmin = kInf, pmax = -kInf;
    for (const auto& v : P.v) {
      pmin = std::min(pmin, dot(n, v));
      pmax = std::max(pmax, dot(n, v));
    }
    return smin > pmax + tol * len || pmin > smax + tol * len;
  };
  const Point d = b - a;
  if (separated({-d.y, d.x})) return false;
  const size_t m = P.v.size();
  for (size_t i = 0; i < m; ++i) {
    const Point e = P.v[(i + 1) % m] - P.v[i];
    if (separated({-e.y, e.x})) return false;
  }
  return true;
}

// the half-columns of the R-grid at scale r1 are the scale r1-1 intervals
bool in_open_half_column(const LambdaConfig& cfg) {
  const Rect b = rotated_max(cfg).bbox();
  const DyadicInterval I = interval_at(cfg.grid.beta.sx, cfg.r1 - 1, b.x0);
  const double tol = tol_of(scale_of(cfg));
  return b.x0 > I.lo() + tol && b.x1() < I.hi() - tol;
}

double k_height(const LambdaConfig& cfg) {
  return std::ldexp(1.0, cfg.k2) * std::abs(std::cos(cfg.theta)) +
         std::ldexp(1.0, cfg.k1) * std::abs(std::sin(cfg.theta));
}

double k_width(const LambdaConfig& cfg) {
  return std::ldexp(1.0, cfg.k1) * std::abs(std::cos(cfg.theta)) +
         std::ldexp(1.0, cfg.k2) * std::abs(std::sin(cfg.theta));
}

// columns of the R-grid that a closed set of width w can meet
double columns(const LambdaConfig& cfg, double w) {
  if (in_open_half_column(cfg)) return 1.0;
  return std::floor(w / std::ldexp(1.0, cfg.r1)) + 2.0;
}

Rect grow(const Rect& r, double t) { return Rect(r.x0 - t, r.y0 - t, r.w + 2 * t, r.h + 2 * t); }

bool contains_top(const Rect& R, const SegmentsAndTops& st, double tol) {
  for (const auto& t : st.tops)
    if (R.contains(t, tol)) return true;
  return false;
}

}  // namespace

double LambdaConfig::H() const {
  return K2() * std::abs(std::cos(theta)) + K1() * std::abs(std::sin(theta));
}

GridChoice choose_grid(const DyadicRectangle& K_max, double theta) {
  const auto c = cover_rectangle(rotated(K_max, theta).bbox());
  return {c.R0.grid(), c.R0, c.cx, c.cy};
}

int r1_lower_bound(const DyadicRectangle& K_max, double theta, int k1, int k2, int l,
                   bool with_r1_condition) {
  const auto g = choose_grid(K_max, theta);
  const double Q1 = g.Q.ix.len();
  int r = static_cast<int>(std::ceil(std::log2(2.0 * Q1)));
  r = std::max(r, static_cast<int>(std::ceil(std::log2(4.0 * (std::ldexp(1.0, k1) + std::ldexp(1.0, k2))))));
  if (with_r1_condition) {
    const double c = std::abs(std::cos(theta)), s = std::abs(std::sin(theta));
    const double K1 = K_max.ix.len(), K2 = K_max.iy.len();
    const double m = std::min(c > 0 ? K1 / c : kInf, s > 0 ? K2 / s : kInf);
    r = std::max(r, static_cast<int>(std::ceil(l + std::log2(0.5 * m))));
  }
  return r;
}

std::string admissibility(const LambdaConfig& cfg) {
  const double K1 = cfg.K1(), K2 = cfg.K2();
  if (std::ldexp(1.0, cfg.k1) > K1 || std::ldexp(1.0, cfg.k2) > K2)
    return "K larger than K_max";
  if (std::abs(cfg.k2 - cfg.k1) > cfg.l - 3) return "eccentricity outside [2^{-l+3}, 2^{l-3}]";
  if (cfg.p < 2.0) return "p must be at least 2";
  if (cfg.r1 < r1_lower_bound(cfg.K_max, cfg.theta, cfg.k1, cfg.k2, cfg.l, cfg.require_r1_condition))
    return "r1 below its lower bound";
  if (!(cfg.grid.Q == choose_grid(cfg.K_max, cfg.theta).Q)) return "grid not refreshed";
  return {};
}

std::vector<DyadicRectangle> sub_rectangles(const DyadicRectangle& K_max, int k1, int k2) {
  if (k1 > K_max.ix.k || k2 > K_max.iy.k) return {};
  return enumerate(K_max.realize(), K_max.grid(), k1, k2);
}

std::vector<DyadicRectangle> r_candidates(const LambdaConfig& cfg, const Rect& box) {
  const Rect g = grow(box, tol_of(scale_of(cfg)) * 4);
  return enumerate(g, cfg.grid.beta, cfg.r1, cfg.r2);
}

bool in_lambda(const LambdaConfig& cfg, const Rect& R, const Rect& K) {
  const double tol = tol_of(scale_of(cfg));
  const auto sk = segments_and_tops(RotatedRect{K, cfg.theta});
  bool a = false;
  for (const auto& s : sk.segments)
    if (segment_meets_rect(s, R, tol)) {
      a = true;
      break;
    }
  if (!a) return false;
  const auto P = RotatedRect{K, cfg.theta}.polygon();
  const auto sr = segments_and_tops(RotatedRect{R, 0.0});
  bool b = false;
  for (const auto& s : sr.segments)
    if (segment_meets_polygon(s.a, s.b, P, tol)) {
      b = true;
      break;
    }
  if (!b) return false;
  if (cfg.omega_tilde && cfg.omega_tilde->contains(R)) return false;
  return true;
}

SegmentCounts count_segments(const LambdaConfig& cfg, const DyadicRectangle& K) {
  const RotatedRect RK = rotated(K, cfg.theta);
  const auto st = segments_and_tops(RK);
  const double tol = tol_of(scale_of(cfg));
  SegmentCounts c;
  for (const auto& Rd : r_candidates(cfg, RK.bbox())) {
    const Rect R = Rd.realize();
    if (!in_lambda(cfg, R, RK.base)) continue;
    bool v = false, h = false;
    for (const auto& s : st.segments)
      if (segment_meets_rect(s, R, tol)) (s.kind == SegmentKind::Vertical ? v : h) = true;
    c.Nv += v;
    c.Nh += h;
    c.tops += contains_top(R, st, tol);
  }
  return c;
}

SegmentCounts count_segments_bruteforce(const LambdaConfig& cfg, const DyadicRectangle& K) {
  const RotatedRect RK = rotated(K, cfg.theta);
  const auto st = segments_and_tops(RK);
  const auto PK = RK.polygon();
  const double tol = tol_of(scale_of(cfg));
  SegmentCounts c;
  // every R of the size meeting the bounding box of φ(K_max), not just of φ(K)
  const Rect big = grow(rotated_max(cfg).bbox(), std::ldexp(1.0, std::max(cfg.r1, cfg.r2)));
  for (const auto& Rd : enumerate(big, cfg.grid.beta, cfg.r1, cfg.r2)) {
    const Rect R = Rd.realize();
    const auto PR = ConvexPolygon::from_rect(R);
    bool v = false, h = false;
    for (const auto& s : st.segments)
      if (sat_segment_polygon(s.a, s.b, PR, tol)) (s.kind == SegmentKind::Vertical ? v : h) = true;
    if (!v && !h) continue;
    bool b = false;
    for (const auto& s : segments_and_tops(RotatedRect{R, 0.0}).segments)
      b = b || sat_segment_polygon(s.a, s.b, PK, tol);
    if (!b) continue;
    if (cfg.omega_tilde && cfg.omega_tilde->contains(R)) continue;
    c.Nv += v;
    c.Nh += h;
    for (const auto& t : st.tops)
      if (t.x >= R.x0 - tol && t.x <= R.x1() + tol && t.y >= R.y0 - tol && t.y <= R.y1() + tol) {
        ++c.tops;
        break;
      }
  }
  return c;
}

int count_L(const LambdaConfig& cfg, const DyadicRectangle& Rd) {
  const Rect R = Rd.realize();
  const double tol = tol_of(scale_of(cfg));
  const auto sr = segments_and_tops(RotatedRect{R, 0.0});
  int n = 0;
  for (const auto& Kd : sub_rectangles(cfg.K_max, cfg.k1, cfg.k2)) {
    const RotatedRect RK = rotated(Kd, cfg.theta);
    if (!in_lambda(cfg, R, RK.base)) continue;
    const auto P = RK.polygon();
    for (int i = 3; i < 6; ++i)
      if (segment_meets_polygon(sr.segments[i].a, sr.segments[i].b, P, tol)) {
        ++n;
        break;
      }
  }
  return n;
}

int count_M(const LambdaConfig& cfg) {
  const RotatedRect RM = rotated_max(cfg);
  const auto P = RM.polygon();
  const double tol = tol_of(scale_of(cfg));
  int n = 0;
  for (const auto& Rd : r_candidates(cfg, RM.bbox())) {
    const auto sr = segments_and_tops(RotatedRect{Rd.realize(), 0.0});
    for (int i = 3; i < 6; ++i)
      if (segment_meets_polygon(sr.segments[i].a, sr.segments[i].b, P, tol)) {
        ++n;
        break;
      }
  }
  return n;
}

double nv_bound_printed(const LambdaConfig& c) {
  return 6.0 * std::ldexp(1.0, c.k2) *
             std::max(std::abs(std::cos(c.theta)) / std::ldexp(1.0, c.r2),
                      std::abs(std::sin(c.theta)) / std::ldexp(1.0, c.r1)) +
         2.0;
}

double nh_bound_printed(const LambdaConfig& c) {
  return 6.0 * std::ldexp(1.0, c.k1) *
             std::max(std::abs(std::cos(c.theta)) / std::ldexp(1.0, c.r1),
                      std::abs(std::sin(c.theta)) / std::ldexp(1.0, c.r2)) +
         2.0;
}

double l_bound_printed(const LambdaConfig& c) {
  const double t = std::abs(std::tan(c.theta)), K1 = c.K1(), K2 = c.K2();
  const double a = std::max(K1 / std::ldexp(1.0, c.k1), K1 * t / std::ldexp(1.0, c.k2));
  const double b = std::max(K2 / t / std::ldexp(1.0, c.k1), K2 / std::ldexp(1.0, c.k2));
  const double ratio = K2 / K1;
  if (t == ratio) return std::max(a, b);
  return t < ratio ? a : b;
}

double m_bound_printed(const LambdaConfig& c) {
  return std::max(c.H() / std::ldexp(1.0, c.r2), 1.0);
}

// Closed cells: an interval of length d meets at most d/h + 2 closed grid intervals of length h.
double nv_bound_rigorous(const LambdaConfig& c) {
  const double dy = std::ldexp(1.0, c.k2) * std::abs(std::cos(c.theta));
  return 3.0 * columns(c, k_width(c)) * (dy / std::ldexp(1.0, c.r2) + 2.0);
}

double nh_bound_rigorous(const LambdaConfig& c) {
  const double dy = std::ldexp(1.0, c.k1) * std::abs(std::sin(c.theta));
  return 3.0 * columns(c, k_width(c)) * (dy / std::ldexp(1.0, c.r2) + 2.0);
}

double l_bound_rigorous(const LambdaConfig& c) {
  const double t = std::abs(std::tan(c.theta)), K1 = c.K1(), K2 = c.K2();
  const double dx = std::min(K1, t > 0 ? K2 / t : kInf);
  const double dy = std::min(K2, K1 * t);
  // open-cell crossings give dx/w + dy/h + 3; passing through a lattice vertex adds one more
  return 3.0 * (dx / std::ldexp(1.0, c.k1) + dy / std::ldexp(1.0, c.k2) + 4.0);
}

double m_bound_rigorous(const LambdaConfig& c) {
  const Rect b = rotated_max(c).bbox();
  return columns(c, b.w) * (c.H() / std::ldexp(1.0, c.r2) + 2.0);
}

bool is_sparse(const LambdaConfig& c) { return k_height(c) <= std::ldexp(1.0, c.r2); }

bool is_perfect_cancellation(const LambdaConfig& c) {
  return c.H() <= std::ldexp(1.0, c.r2 - 2);
}

namespace {

struct PairTerm {
  double ip;
  bool top;
};

// nonzero-candidate R's for one K, in enumeration order
std::vector<PairTerm> terms_for(const LambdaConfig& cfg, const DyadicRectangle& Kd,
                                std::int64_t* pairs, std::int64_t* fallback) {
  std::vector<PairTerm> out;
  const RotatedRect RK = rotated(Kd, cfg.theta);
  const auto st = segments_and_tops(RK);
  const double tol = tol_of(scale_of(cfg));
  for (const auto& Rd : r_candidates(cfg, RK.bbox())) {
    const Rect R = Rd.realize();
    if (cfg.omega_tilde && cfg.omega_tilde->contains(R)) continue;
    const WaveletPair pr(R, RK.base, cfg.theta);
    const double ip = inner_product(pr);
    if (pairs) ++*pairs;
    if (fallback && ip != 0.0 && classify(pr) == IntersectionCase::Unclassified) ++*fallback;
    out.push_back({ip, contains_top(R, st, tol)});
  }
  return out;
}

void check_exact_pre(const LambdaConfig& cfg) {
  const auto why = admissibility(cfg);
  if (!why.empty()) throw std::invalid_argument("gamma_exact: inadmissible config: " + why);
}

}  // namespace

GammaExact gamma_exact(const LambdaConfig& cfg) {
  check_exact_pre(cfg);
  const double pp = cfg.p_prime(), q = cfg.q();
  GammaExact g;
  for (const auto& Kd : sub_rectangles(cfg.K_max, cfg.k1, cfg.k2)) {
    double s = 0.0, s0 = 0.0, s1 = 0.0;
    for (const auto& t : terms_for(cfg, Kd, &g.pairs, &g.fallback)) {
      if (t.ip == 0.0) continue;
      ++g.nonzero;
      const double a = std::pow(std::abs(t.ip), pp);
      s += a;
      (t.top ? s1 : s0) += a;
    }
    g.total += std::pow(s, q);
    g.gamma0 += std::pow(s0, q);
    g.gamma1 += std::pow(s1, q);
  }
  return g;
}

double gamma_exact_shuffled(const LambdaConfig& cfg, std::uint64_t seed) {
  check_exact_pre(cfg);
  std::mt19937_64 rng(seed);
  auto Ks = sub_rectangles(cfg.K_max, cfg.k1, cfg.k2);
  std::shuffle(Ks.begin(), Ks.end(), rng);
  std::vector<double> per_k;
  for (const auto& Kd : Ks) {
    auto ts = terms_for(cfg, Kd, nullptr, nullptr);
    std::shuffle(ts.begin(), ts.end(), rng);
    double s = 0.0;
    for (const auto& t : ts) s += std::pow(std::abs(t.ip), cfg.p_prime());
    per_k.push_back(std::pow(s, cfg.q()));
  }
  std::shuffle(per_k.begin(), per_k.end(), rng);
  return std::accumulate(per_k.begin(), per_k.end(), 0.0);
}

std::string table_row(const LambdaConfig& c) {
  const double s = std::abs(std::sin(c.theta)), co = std::abs(std::cos(c.theta));
  const double r2 = std::ldexp(1.0, c.r2);
  if (is_perfect_cancellation(c)) return "perfect-cancellation";
  if (is_sparse(c)) {
    const bool flat = std::abs(std::tan(c.theta)) <= std::ldexp(1.0, c.k2 - c.k1);
    return flat ? "sparse/tan<=2^(k2-k1)" : "sparse/tan>2^(k2-k1)";
  }
  if (c.r2 <= std::min(c.k1, c.k2)) {
    const bool a = std::ldexp(1.0, c.k1) * s >= r2, b = std::ldexp(1.0, c.k2) * co >= r2;
    if (a && b) return "even/both>=2^r2";
    if (a) return "even/k1sin>=2^r2";
    if (b) return "even/k2cos>=2^r2";
    return "even/uncovered";
  }
  return "even/r2>min(k1,k2)";
}

GammaReport gamma_bound(const LambdaConfig& c, const GammaExact* exact) {
  GammaReport rep;
  rep.case_tag = table_row(c);
  GammaExact ex = exact ? *exact : gamma_exact(c);
  rep.exact = ex.total;

  const double q = c.q(), pp = c.p_prime();
  const double Kk = std::ldexp(1.0, c.k1 + c.k2), Rr = std::ldexp(1.0, c.r1 + c.r2);
  const double cK = c.K_max.area() / Kk;
  const double triv2 = std::pow(std::min(Kk, Rr), 2) / (Kk * Rr);
  const double r2 = std::ldexp(1.0, c.r2);
  const bool half = in_open_half_column(c);
  const double t = std::abs(std::tan(c.theta));

  // geometric zero: Q, hence φ(K_max), inside one closed child of every R
  const bool zero = c.grid.Q.ix.len() <= std::ldexp(0.5, c.r1) && c.grid.Q.iy.len() <= 0.5 * r2;
  if (zero) {
    rep.bound = 0.0;
  } else {
    // number of R meeting a closed φ(K)
    const double n = columns(c, k_width(c)) * (k_height(c) / r2 + 2.0);
    double best = cK * std::pow(n, q) * triv2;
    if (half) {
      // vertical lines of R avoid φ(K_max): only the horizontal-only estimate with S = K applies
      const double m1 = std::min(std::ldexp(1.0, 2 * c.k1) * t, std::ldexp(1.0, 2 * c.k2) / t) /
                        std::sqrt(Kk * Rr);
      const double sup2 = std::min(9.0 * m1 * m1, triv2);
      best = std::min(best, cK * std::pow(n, q) * sup2);

      // split by tops: Λ⁰ uses the one-parameter bounds with S = R, Λ¹ the trivial one
      const WaveletPair pr(Rect(0, 0, std::ldexp(1.0, c.r1), r2),
                           Rect(0, 0, std::ldexp(1.0, c.k1), std::ldexp(1.0, c.k2)), c.theta);
      const double V = std::min(vertical_bound(pr), std::sqrt(triv2));
      const double Hb = std::min(horizontal_bound(pr), std::sqrt(triv2));
      const double nv = std::min(nv_bound_rigorous(c), n), nh = std::min(nh_bound_rigorous(c), n);
      const double g0 = cK * std::pow(2.0, (pp - 1.0) * q + q - 1.0) *
                        (V * V * std::pow(nv, q) + Hb * Hb * std::pow(nh, q));
      const double g1 = cK * std::pow(std::min(36.0, n), q) * triv2;
      best = std::min(best, std::pow(2.0, q - 1.0) * (g0 + g1));

      if (is_sparse(c)) {
        const double M = m_bound_rigorous(c), L = l_bound_rigorous(c);
        best = std::min(best, std::pow(std::min(n, 3.0), q) * sup2 * M * L);
      }
    }
    rep.bound = best;
  }
  return rep;
}

std::string error_case(int r1, int r2, int k1, int k2, double theta) {
  const double t = std::abs(std::tan(theta));
  const bool steep = t > std::ldexp(1.0, k2 - k1);
  const double s = std::abs(std::sin(theta)), c = std::abs(std::cos(theta));
  if (r2 <= k1 && k1 <= k2 && k2 <= r1) return "I";
  if (r2 <= k2 && k2 <= k1 && k1 <= r1) return "I";
  if (k1 <= k2 && k2 <= r2 && r2 <= r1) return steep ? "II" : "III";
  if (k2 <= k1 && k1 <= r2 && r2 <= r1) return steep ? "III" : "II";
  if (k1 <= k2 && k2 <= r1 && r1 <= r2) return steep ? "II" : "III";
  if (k2 <= k1 && k1 <= r1 && r1 <= r2) return steep ? "III" : "II";
  if (k1 <= r2 && r2 <= k2 && k2 <= r1) {
    if (steep) return "II";
    return std::ldexp(1.0, k2) * c <= std::ldexp(1.0, r2) ? "III" : "IV";
  }
  if (k2 <= r2 && r2 <= k1 && k1 <= r1) {
    if (!steep) return "III";
    return std::ldexp(1.0, k1) * s <= std::ldexp(1.0, r2) ? "II" : "IV";
  }
  return "uncovered";
}

double scan_mu(const ScanParams& sp) {
  const double delta = std::min(sp.s - 2.0 / sp.p, 1.0 / sp.p);
  if (!(delta > 0.0)) throw std::invalid_argument("error_term_scan: need s > 2/p");
  if (!(std::abs(sp.gamma1) < delta && std::abs(sp.gamma2) < delta))
    throw std::invalid_argument("error_term_scan: gamma1, gamma2 must lie in (-delta, delta)");
  if (!(sp.gamma2 > 0.0)) throw std::invalid_argument("error_term_scan: gamma2 must be positive");
  if (!(sp.gamma1 < 0.0))
    throw std::invalid_argument("error_term_scan: the r1 series diverges unless gamma1 < 0");
  if (!(sp.theta_interp > 0.0 && sp.theta_interp <= 1.0))
    throw std::invalid_argument("error_term_scan: theta_interp must lie in (0, 1]");
  const double mu = 2.0 * sp.gamma2 * sp.theta_interp;
  if (!(mu > 0.0)) throw std::invalid_argument("error_term_scan: mu = 0");
  return mu;
}

std::vector<ScanResult> error_term_sweep(const DyadicRectangle& K_max, double theta,
                                         const std::vector<int>& ls, const ScanParams& sp) {
  const double mu = scan_mu(sp);
  if (near_axis_angle(theta, 1e-9)) throw std::invalid_argument("error_term_scan: axis angle");
  const int lmax = *std::max_element(ls.begin(), ls.end());
  const double K1 = K_max.ix.len(), K2 = K_max.iy.len();
  const int k1max = static_cast<int>(std::floor(std::log2(K1))),
            k2max = static_cast<int>(std::floor(std::log2(K2)));
  const double rho = std::pow(2.0, 2.0 * sp.gamma1);

  std::vector<ScanResult> out(ls.size());
  for (size_t i = 0; i < ls.size(); ++i) {
    out[i].mu = mu;
    out[i].target = std::pow(2.0, -ls[i] * mu) * K_max.area();
  }

  LambdaConfig cfg;
  cfg.K_max = K_max;
  cfg.theta = theta;
  cfg.p = sp.p;
  cfg.require_r1_condition = false;
  cfg.refresh_grid();
  std::int64_t budget = sp.max_configs;

  for (int k1 = sp.kmin; k1 <= k1max; ++k1)
    for (int k2 = sp.kmin; k2 <= k2max; ++k2) {
      if (std::abs(k2 - k1) > lmax - 3) continue;
      cfg.k1 = k1;
      cfg.k2 = k2;
      cfg.l = std::max(3 + std::abs(k2 - k1), 3);
      // reference r1: smallest admissible without the l-dependent condition
      const int rref = r1_lower_bound(K_max, theta, k1, k2, cfg.l, false);
      cfg.r1 = rref;
      const double H = cfg.H();
      const int r2top = static_cast<int>(std::ceil(std::log2(4.0 * H))) + 2;
      for (int r2 = sp.r2min; r2 <= r2top; ++r2) {
        cfg.r2 = r2;
        if (--budget < 0) throw std::length_error("error_term_scan: config budget exhausted");
        const GammaExact ex = gamma_exact(cfg);
        // exact scaling: Γ(r1) = Γ(rref) 2^{rref - r1} while φ(K_max) sits in one half-column
        const double G = ex.total * std::ldexp(1.0, rref);
        // bound: evaluated at the first few r1, then continued with the last value of B(r1)2^{r1}
        std::vector<double> Bs;
        for (int j = 0; j <= sp.r1_terms; ++j) {
          cfg.r1 = rref + j;
          GammaExact ej = ex;
          ej.total = G * std::ldexp(1.0, -cfg.r1);
          Bs.push_back(gamma_bound(cfg, &ej).bound * std::ldexp(1.0, cfg.r1));
        }
        cfg.r1 = rref;
        bool ok = true;
        // absolute slack covers roundoff in zero inner products
        const double slack = 1e-20 * K_max.area() * std::ldexp(1.0, rref);
        for (double b : Bs) ok = ok && G <= b * (1.0 + 1e-9) + slack;
        const double w2 = std::pow(2.0, 2.0 * r2 * (0.5 + sp.gamma2));
        for (size_t i = 0; i < ls.size(); ++i) {
          const int l = ls[i];
          if (std::abs(k2 - k1) > l - 3) continue;
          const int r1min = std::max(rref, r1_lower_bound(K_max, theta, k1, k2, l, true));
          // Σ_{r1 >= r1min} 2^{2 r1 (1/2 + γ1)} 2^{-r1} = 2^{2 γ1 r1min} / (1 - 2^{2 γ1})
          const double tail = std::pow(2.0, 2.0 * sp.gamma1 * r1min) / (1.0 - rho);
          out[i].exact_total += w2 * G * tail;
          double bsum = 0.0;
          const int j0 = r1min - rref;
          for (int j = j0; j <= sp.r1_terms; ++j)
            bsum += Bs[j] * std::pow(2.0, 2.0 * sp.gamma1 * (rref + j));
          const int jl = std::max(j0, sp.r1_terms + 1);
          bsum += Bs.back() * std::pow(2.0, 2.0 * sp.gamma1 * (rref + jl)) / (1.0 - rho);
          out[i].bound_total += w2 * bsum;
          out[i].exact_le_bound = out[i].exact_le_bound && ok;
          out[i].configs += 1;
          for (int r1 = r1min; r1 <= r1min + sp.r1_terms; ++r1)
            if (error_case(r1, r2, k1, k2, theta) == "uncovered") {
              out[i].uncovered += 1;
              break;
            }
        }
      }
    }
  return out;
}

ScanResult error_term_scan(const DyadicRectangle& K_max, double theta, int l, const ScanParams& sp) {
  return error_term_sweep(K_max, theta, {l}, sp).front();
}

namespace {

double sample_theta(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(1e-3, M_PI / 2 - 1e-3);
  return U(rng);
}

}  // namespace

LambdaConfig sample_config(std::mt19937_64& rng, bool sparse_only, int max_k_cells) {
  auto ui = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  for (;;) {
    LambdaConfig c;
    c.theta = sample_theta(rng);
    const int a1 = ui(-3, 3), a2 = ui(-3, 3);
    c.K_max = {{false, a1, ui(-4, 4)}, {false, a2, ui(-4, 4)}};
    c.l = ui(3, 12);
    c.k1 = ui(a1 - 6, a1);
    c.k2 = ui(a2 - 6, a2);
    if (std::abs(c.k2 - c.k1) > c.l - 3) continue;
    if ((a1 - c.k1) + (a2 - c.k2) > static_cast<int>(std::log2(max_k_cells))) continue;
    c.refresh_grid();
    const int r1min = r1_lower_bound(c.K_max, c.theta, c.k1, c.k2, c.l, false);
    c.r1 = r1min + ui(0, 2);
    const int top = static_cast<int>(std::ceil(std::log2(4.0 * c.H())));
    int lo = std::min(c.k1, c.k2) - 4;
    if (sparse_only) lo = static_cast<int>(std::ceil(std::log2(k_height(c))));
    if (lo > top) continue;
    c.r2 = ui(lo, top);
    if (sparse_only && !is_sparse(c)) continue;
    if (!admissible(c)) continue;
    return c;
  }
}

LambdaConfig sample_perfect_cancellation(std::mt19937_64& rng) {
  auto ui = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  for (;;) {
    LambdaConfig c;
    c.theta = sample_theta(rng);
    const int a1 = ui(-3, 3), a2 = ui(-3, 3);
    c.K_max = {{false, a1, ui(-4, 4)}, {false, a2, ui(-4, 4)}};
    c.l = ui(3, 10);
    c.k1 = ui(a1 - 4, a1);
    c.k2 = ui(a2 - 4, a2);
    if (std::abs(c.k2 - c.k1) > c.l - 3) continue;
    if ((a1 - c.k1) + (a2 - c.k2) > 8) continue;
    c.refresh_grid();
    c.r1 = r1_lower_bound(c.K_max, c.theta, c.k1, c.k2, c.l, false) + ui(0, 2);
    // both the table predicate and the geometric one: Q inside a child of R
    int r2 = static_cast<int>(std::ceil(std::log2(4.0 * c.H())));
    r2 = std::max(r2, static_cast<int>(std::ceil(std::log2(2.0 * c.grid.Q.iy.len()))));
    c.r2 = r2 + ui(0, 2);
    if (!admissible(c)) continue;
    return c;
  }
}

}  // namespace rbmo
