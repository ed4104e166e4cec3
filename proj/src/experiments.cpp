#include "rbmo/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rbmo/haar.hpp"
#include "rbmo/maximal.hpp"
#include "rbmo/norms.hpp"
#include "rbmo/transforms.hpp"

namespace rbmo {

using nlohmann::json;

namespace {

json rect_json(const DyadicRectangle& R) {
  const Rect r = R.realize();
  return {{"grid", {R.ix.shifted, R.iy.shifted}},
          {"k", {R.ix.k, R.iy.k}},
          {"j", {R.ix.j, R.iy.j}},
          {"rect", {r.x0, r.y0, r.w, r.h}}};
}

double normalized_coeff(const ScalarField& G, const DyadicRectangle& R) {
  return std::abs(coeff(G, R)) / std::sqrt(R.area());
}

void check_angle(double theta) {
  const double tol = 1e-12;
  if (!(theta > tol && theta < 2 * M_PI - tol))
    throw std::invalid_argument("theta must lie in (0, 2pi)");
  for (int q = 1; q <= 3; ++q)
    if (std::abs(theta - q * M_PI / 2) < tol)
      throw std::invalid_argument("theta is a right angle: F∘φ is again a function of one variable");
}

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<WitnessCandidate> witness_search(const ScalarField& G, double theta, const WitnessSearch& ws) {
  const double t = std::abs(std::tan(theta));
  const int e0 = int(std::lround(std::log2(std::max(t, 1e-300))));
  std::vector<WitnessCandidate> out;
  for (int gi = 0; gi < 4; ++gi) {
    const GridId g = GridId::from_index(gi);
    for (int k1 = ws.kmin; k1 <= ws.kmax; ++k1)
      for (int e = e0 - 1; e <= e0 + 1; ++e) {
        const int k2 = k1 + e;
        const double step = 0.5 * std::min(std::ldexp(1.0, k1), std::ldexp(1.0, k2));
        std::set<std::pair<std::int64_t, std::int64_t>> seen;
        WitnessCandidate best{DyadicRectangle{}, -1.0};
        for (double s = -ws.half_length; s <= ws.half_length; s += step) {
          const Point p = ws.anchor + s * ws.dir;
          const DyadicInterval I = interval_at(g.sx, k1, p.x), J = interval_at(g.sy, k2, p.y);
          for (int dx = -1; dx <= 1; ++dx) {
            if (!seen.insert({I.j + dx, J.j}).second) continue;
            const DyadicRectangle R{DyadicInterval{g.sx, k1, I.j + dx}, J};
            const double v = normalized_coeff(G, R);
            if (v > best.value) best = {R, v};
          }
        }
        if (best.value >= 0.0) out.push_back(best);
      }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const WitnessCandidate& a, const WitnessCandidate& b) { return a.value > b.value; });
  return out;
}

FieldPtr ce1_field() {
  return std::make_shared<PolygonIndicator>(ConvexPolygon::from_rect(Rect(0.0, -64.0, 1.0, 128.0)));
}

std::string Ce1Result::to_json() const {
  json j{{"theta", theta}, {"found", found}, {"exact", exact}, {"quadrature", quadrature},
         {"threshold", 1.0 / 16.0}, {"pass", pass()}, {"trace", trace}};
  if (R) j["witness"] = rect_json(*R);
  return j.dump(2);
}

Ce1Result counterexample1(double theta, int kmin, int kmax, int quad_cells) {
  check_angle(theta);
  Ce1Result r;
  r.theta = theta;
  const FieldPtr G = compose_rotation(ce1_field(), theta);
  // φ maps the line through the origin in direction φ^{-1}(e2) onto the left edge of the strip
  WitnessSearch ws;
  ws.dir = rotate({0.0, 1.0}, -theta);
  ws.kmin = kmin;
  ws.kmax = kmax;
  const auto cands = witness_search(*G, theta, ws);
  for (const auto& c : cands) {
    std::ostringstream os;
    os << "grid=" << c.R.ix.shifted << c.R.iy.shifted << " k=(" << c.R.ix.k << "," << c.R.iy.k
       << ") value=" << c.value;
    r.trace.push_back(os.str());
  }
  if (cands.empty() || cands.front().value < 1.0 / 16.0 - 1e-12) return r;
  r.found = true;
  r.R = cands.front().R;
  r.exact = cands.front().value;
  // midpoint rule with quad_cells^2 sub-cells, signs (+,-;-,+)
  const Rect R = r.R->realize();
  const int n = quad_cells;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = R.y0 + (j + 0.5) * R.h / n;
    const double sy = 2 * j < n ? 1.0 : -1.0;
    double row = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = R.x0 + (i + 0.5) * R.w / n;
      const double sx = 2 * i < n ? 1.0 : -1.0;
      row += sx * G->value(x, y);
    }
    s += sy * row;
  }
  r.quadrature = std::abs(s) / (double(n) * n);
  return r;
}

std::string Ce2Result::csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "# schema=ce2/v1 theta=" << theta << " Q=" << Q << " Qprime=" << Qprime << " C1=" << C1
     << " C2=" << C2 << " slope=" << slope << "\n";
  os << "p,alpha,f_p,fprime_p,g_p,gprime_p,w1p,bmo,g_osc,lower,margin,eps_needed\n";
  for (const auto& r : rows)
    os << r.p << "," << r.alpha << "," << r.f_p << "," << r.fprime_p << "," << r.g_p << ","
       << r.gprime_p << "," << r.w1p << "," << r.bmo << "," << r.g_osc << "," << r.lower << ","
       << r.margin << "," << r.eps_needed << "\n";
  return os.str();
}

std::string Ce2Result::to_json() const {
  json j{{"theta", theta}, {"Q", Q}, {"Qprime", Qprime}, {"C1", C1}, {"C2", C2}, {"slope", slope},
         {"pass_a", pass_a}, {"pass_b_bound", pass_b_bound}, {"pass_b_slope", pass_b_slope},
         {"pass_c", pass_c}};
  if (R) j["witness"] = rect_json(*R);
  return j.dump(2);
}

Ce2Result counterexample2(const std::vector<double>& ps, double theta) {
  check_angle(theta);
  for (double p : ps)
    if (!(p >= 4.0)) throw std::invalid_argument("counterexample2: p must be at least 4");
  Ce2Result out;
  out.theta = theta;
  const FactorPtr f = smooth_haar(1.0, 2.0, 0.125);
  const std::vector<double> breaks{1.0, 1.125, 1.4375, 1.5625, 1.875, 2.0};
  auto lp = [&](const std::function<double(double)>& h, double p) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
      s += adaptive_integrate_1d([&](double x) { return std::pow(std::abs(h(x)), p); }, breaks[i],
                                 breaks[i + 1]);
    return std::pow(s, 1.0 / p);
  };
  auto fv = [&](double x) { return f->value(x); };
  auto fd = [&](double x) { return f->derivative(x); };
  double sup_f = 0.0, sup_fd = 0.0;
  for (int i = 0; i <= 1 << 14; ++i) {
    const double x = 1.0 + std::ldexp(double(i), -14);
    sup_f = std::max(sup_f, std::abs(fv(x)));
    sup_fd = std::max(sup_fd, std::abs(fd(x)));
  }
  out.Q = std::max(lp(fv, 2.0), sup_f);
  out.Qprime = std::max(lp(fd, 2.0), sup_fd);
  out.C1 = 8.0 * (out.Q + out.Qprime);

  // rotated witness from the exact case f = h_[1,2]: the positive half is the strip 1 <= u <= 3/2
  const FieldPtr exact_case = compose_rotation(
      std::make_shared<PolygonIndicator>(ConvexPolygon::from_rect(Rect(1.0, -64.0, 0.5, 128.0))), theta);
  WitnessSearch ws;
  ws.anchor = rotate({1.0, 0.0}, -theta);
  ws.dir = rotate({0.0, 1.0}, -theta);
  ws.kmin = -6;
  ws.kmax = -1;
  const auto cands = witness_search(*exact_case, theta, ws);
  QuadratureOptions qo;
  qo.rel_tol = 1e-8;
  qo.abs_tol = 1e-12;
  auto rotated_coeff = [&](const FactorPtr& g, const DyadicRectangle& R) {
    const Rect r = R.realize();
    double s = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double sign = ((q & 1) ? -1.0 : 1.0) * ((q & 2) ? -1.0 : 1.0);
      s += sign * adaptive_integrate(
                      [&](double x, double y) {
                        const Point u = rotate({x, y}, theta);
                        return f->value(u.x) * g->value(u.y);
                      },
                      r.quadrant(q), qo);
    }
    return std::abs(s) / r.area();
  };
  {
    const FactorPtr g4 = power_tail(0.5);
    double best = -1.0;
    for (size_t i = 0; i < cands.size() && i < 24; ++i) {
      if (cands[i].value < 1.0 / 16.0 - 1e-12) break;
      const double v = rotated_coeff(g4, cands[i].R);
      if (v > best) {
        best = v;
        out.R = cands[i].R;
      }
    }
  }

  BiparamOptions bo;
  bo.window = Rect(-1024.0, -1024.0, 2048.0, 2048.0);
  bo.kmin = -6;
  bo.kmax = 10;
  const auto family = tail_family();
  std::vector<double> pv, bv;
  for (double p : ps) {
    Ce2Row r;
    r.p = p;
    r.alpha = 2.0 / p;
    const FactorPtr g = power_tail(r.alpha);
    r.f_p = lp(fv, p);
    r.fprime_p = lp(fd, p);
    r.g_p = std::pow(2.0 + 2.0 / (r.alpha * p - 1.0), 1.0 / p);
    r.gprime_p = std::pow(2.0 * std::pow(r.alpha, p) / (r.alpha * p + p - 1.0), 1.0 / p);
    r.w1p = r.f_p * r.g_p + r.fprime_p * r.g_p + r.f_p * r.gprime_p;
    r.bmo = bmo_biparam_separable(SeparableField(f, g), bo).value;
    r.g_osc = bmo_1d(*g, family, "tail").value;
    r.lower = out.R ? rotated_coeff(g, *out.R) : 0.0;
    pv.push_back(p);
    bv.push_back(r.bmo);
    out.rows.push_back(r);
  }
  for (const auto& r : out.rows) out.C2 = std::max(out.C2, r.bmo * std::pow(r.p, 0.25));
  out.slope = out.rows.size() >= 2 ? loglog_slope(pv, bv) : 0.0;
  out.pass_a = out.pass_b_bound = out.pass_c = !out.rows.empty();
  for (auto& r : out.rows) {
    r.margin = r.lower - out.C2 * std::pow(r.p, -0.25);
    r.eps_needed = std::max(0.0, r.margin) / out.C1;
    out.pass_a = out.pass_a && r.w1p <= out.C1;
    out.pass_b_bound = out.pass_b_bound && r.bmo <= out.C2 * std::pow(r.p, -0.25) * (1 + 1e-12);
    out.pass_c = out.pass_c && r.lower >= 1.0 / 32.0;
  }
  out.pass_b_slope = out.slope >= -0.35 && out.slope <= -0.15;
  return out;
}

std::vector<SweepField> sweep_family(std::uint64_t seed) {
  std::vector<SweepField> fam;
  auto tensor = [](FactorPtr a, FactorPtr b) {
    return std::make_shared<ClosedExpr>([a, b](double x, double y) { return a->value(x) * b->value(y); });
  };
  fam.push_back({"bump-iso", tensor(bump(0.5, 0.3), bump(0.5, 0.3))});
  fam.push_back({"bump-eccentric", tensor(bump(0.5, 0.08), bump(0.5, 0.3))});
  {
    const FactorPtr f = smooth_haar(0.35, 0.65, 0.125), g = power_tail(0.5), cut = bump(0.5, 0.35);
    fam.push_back({"tail-family", std::make_shared<ClosedExpr>([=](double x, double y) {
                     return f->value(x) * g->value(8.0 * (y - 0.5)) * cut->value(y);
                   })});
  }
  {
    // smooth Haar tensors rotated about their own centres
    struct Term {
      Point c;
      double a, side, amp;
    };
    const std::vector<Term> terms{{{0.4, 0.4}, 0.3, 0.2, 1.0}, {{0.62, 0.45}, 1.1, 0.15, -0.7},
                                  {{0.5, 0.65}, 2.0, 0.18, 0.5}};
    fam.push_back({"rotated-haar-sum", std::make_shared<ClosedExpr>([terms](double x, double y) {
                     double s = 0.0;
                     for (const auto& t : terms) {
                       const Point u = rotate(Point{x, y} - t.c, t.a);
                       const double h = 0.5 * t.side;
                       if (std::abs(u.x) >= h || std::abs(u.y) >= h) continue;
                       const auto sh = smooth_haar(-h, h, 0.25);
                       s += t.amp * sh->value(u.x) * sh->value(u.y);
                     }
                     return s;
                   })});
  }
  {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Rect, double>> terms;
    for (int i = 0; i < 6; ++i) {
      const int a = std::uniform_int_distribution<int>(-3, -2)(rng);
      const int b = std::uniform_int_distribution<int>(-3, -2)(rng);
      const double w = std::ldexp(1.0, a), h = std::ldexp(1.0, b);
      const double x0 = 0.25 + std::uniform_real_distribution<double>(0.0, 0.5 - w)(rng);
      const double y0 = 0.25 + std::uniform_real_distribution<double>(0.0, 0.5 - h)(rng);
      terms.push_back({Rect(x0, y0, w, h), std::uniform_real_distribution<double>(-1.0, 1.0)(rng)});
    }
    std::vector<std::pair<FactorPtr, FactorPtr>> fs;
    for (const auto& [r, amp] : terms)
      fs.push_back({smooth_haar(r.x0, r.x1(), 1.0 / 3.0), smooth_haar(r.y0, r.y1(), 1.0 / 3.0)});
    fam.push_back({"random-haar", std::make_shared<ClosedExpr>([terms, fs](double x, double y) {
                     double s = 0.0;
                     for (size_t i = 0; i < terms.size(); ++i)
                       s += terms[i].second * fs[i].first->value(x) * fs[i].second->value(y);
                     return s;
                   })});
  }
  return fam;
}

std::string SweepResult::csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "# schema=interpolation-sweep/v1 delta=" << delta << " gamma=" << gamma << " alpha=" << alpha
     << "\n";
  os << "field,theta,epsilon,lhs,bmo,sobolev,term_bmo,term_sobolev,c_min,c_product,hv,c_hv\n";
  for (const auto& r : rows)
    os << r.field << "," << r.theta << "," << r.epsilon << "," << r.lhs << "," << r.bmo << ","
       << r.sobolev << "," << r.term_bmo << "," << r.term_sobolev << "," << r.c_min << ","
       << r.c_product << "," << r.hv << "," << r.c_hv << "\n";
  return os.str();
}

std::string SweepResult::to_json() const {
  return json{{"delta", delta},          {"gamma", gamma},   {"alpha", alpha},
              {"C", C},                  {"C_product", C_product}, {"C_hv", C_hv},
              {"C_rough", C_rough},      {"monotone", monotone},   {"rows", rows.size()},
              {"pass", C <= 1e3 && C_product <= 1e3 && C_hv <= 1e3 && C_rough <= 1e3 && monotone}}
      .dump(2);
}

SweepResult interpolation_sweep(const SweepOptions& opt, const std::vector<SweepField>& family) {
  if (!(opt.p > 2.0) || !(opt.s > 2.0 / opt.p))
    throw std::invalid_argument("interpolation_sweep: need p > 2 and s > 2/p");
  for (double e : opt.epsilons)
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("interpolation_sweep: epsilon must lie in (0, 1)");
  SweepResult res;
  res.delta = std::min(opt.s - 2.0 / opt.p, 1.0 / opt.p);
  res.gamma = opt.gamma > 0.0 ? opt.gamma : 0.5 * res.delta;
  if (!(res.gamma < res.delta)) throw std::invalid_argument("interpolation_sweep: gamma must lie in (0, delta)");
  res.alpha = res.delta / (2.0 + res.delta);
  const double a = res.alpha, a2 = a * a;
  const Rect W(0.0, 0.0, 1.0, 1.0);
  const int N = opt.resolution;
  BiparamOptions bo;
  bo.window = W;
  bo.kmin = -int(std::lround(std::log2(N)));
  bo.kmax = 0;
  auto bmo = [&](const ScalarField& F) { return bmo_biparam(F, bo).value; };
  // odd kernel: even kernels annihilate since H_{-v} = -H_v
  auto omega = [](double t) { return std::cos(t) + 0.5 * std::sin(3.0 * t); };
  const double omega_l1 = adaptive_integrate_1d([&](double t) { return std::abs(omega(t)); }, 0.0, 2 * M_PI);
  const Point c{0.5, 0.5};
  std::vector<double> eps_list = opt.epsilons;
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  for (const auto& fld : family) {
    const GridSamples Fg = GridSamples::sample_points(*fld.F, W, N, N);
    const double B = bmo(Fg);
    const double Ws = sobolev_norm(Fg, opt.s, opt.p).spectral;
    const double scale_hv = std::pow(B, a2) * std::pow(Ws, 1.0 - a2);
    const double rough = bmo(rough_operator(Fg, omega, 256, 2));
    res.C_rough = std::max(res.C_rough, rough / (omega_l1 * scale_hv));
    for (double th : opt.thetas) {
      const FieldPtr F = fld.F;
      const ClosedExpr G([F, th, c](double x, double y) {
        const Point u = c + rotate(Point{x, y} - c, th);
        return F->value(u.x, u.y);
      });
      const double lhs = bmo(GridSamples::sample_points(G, W, N, N));
      const double hv = bmo(directional_hilbert(Fg, {std::cos(th), std::sin(th)}, 2));
      double prev_b = -1.0, prev_s = 1e300;
      for (double eps : eps_list) {
        SweepRow r;
        r.field = fld.name;
        r.theta = th;
        r.epsilon = eps;
        r.lhs = lhs;
        r.bmo = B;
        r.sobolev = Ws;
        r.term_bmo = B / eps * (1.0 + std::log(1.0 / eps));
        r.term_sobolev = std::pow(eps, 0.5 * res.gamma) * Ws;
        r.c_min = lhs / (r.term_bmo + r.term_sobolev);
        r.c_product = lhs / (std::pow(B, a) * std::pow(Ws, 1.0 - a));
        r.hv = hv;
        r.c_hv = hv / scale_hv;
        if (prev_b >= 0.0) res.monotone = res.monotone && r.term_bmo > prev_b && r.term_sobolev < prev_s;
        prev_b = r.term_bmo;
        prev_s = r.term_sobolev;
        res.C = std::max(res.C, r.c_min);
        res.C_product = std::max(res.C_product, r.c_product);
        res.C_hv = std::max(res.C_hv, r.c_hv);
        res.rows.push_back(r);
      }
    }
  }
  return res;
}

OpenSet random_omega(std::mt19937_64& rng, int resolution, int max_rects) {
  OpenSet O(Rect(0.0, 0.0, 1.0, 1.0), resolution, resolution);
  const int n = std::uniform_int_distribution<int>(1, max_rects)(rng);
  for (int r = 0; r < n; ++r) {
    const int a = std::uniform_int_distribution<int>(-6, -3)(rng);
    const int b = std::uniform_int_distribution<int>(-6, -3)(rng);
    const double w = std::ldexp(1.0, a), h = std::ldexp(1.0, b);
    const int i = std::uniform_int_distribution<int>(0, int(0.5 / w) - 1)(rng);
    const int j = std::uniform_int_distribution<int>(0, int(0.5 / h) - 1)(rng);
    O.add_rect(Rect(0.25 + i * w, 0.25 + j * h, w, h));
  }
  return O;
}

JourneStats journe_stats(int n_sets, const std::vector<double>& epsilons, std::uint64_t seed, int resolution) {
  std::mt19937_64 rng(seed);
  JourneStats st;
  for (int it = 0; it < n_sets; ++it) {
    const OpenSet O = random_omega(rng, resolution);
    for (double eps : epsilons) {
      const auto J = classify_journe(O, eps);
      ++st.runs;
      for (const auto& c : J.classes) {
        if (std::ldexp(1.0, -2 * c.l) > 8.0 * eps) ++st.level_violations;
        double s = 0.0;
        for (const auto& K : c.members) s += K.area();
        st.C_sum = std::max(st.C_sum, s / (std::sqrt(std::sqrt(eps) * std::ldexp(1.0, c.l)) * O.measure()));
      }
      const double L = std::log(1.0 / eps);
      st.C_first = std::max(st.C_first, J.first.result.measure() / (O.measure() * L / eps));
      st.C_second = std::max(st.C_second, J.second.result.measure() / (O.measure() * L * L / (eps * eps)));
    }
  }
  return st;
}

std::pair<double, double> inner_product_mc(const Rect& S, const Rect& T, double theta, int n,
                                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double nS = 1.0 / std::sqrt(S.area()), nT = 1.0 / std::sqrt(T.area());
  const Point cS = S.center(), cT = T.center();
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point x{S.x0 + U(rng) * S.w, S.y0 + U(rng) * S.h};
    const Point y = rotate(x, -theta);
    double v = 0.0;
    if (T.contains(y)) {
      const double hs = (x.x < cS.x ? 1.0 : -1.0) * (x.y < cS.y ? 1.0 : -1.0);
      const double ht = (y.x < cT.x ? 1.0 : -1.0) * (y.y < cT.y ? 1.0 : -1.0);
      v = hs * ht * nS * nT;
    }
    s += v;
    s2 += v * v;
  }
  const double mean = s / n, var = std::max(0.0, s2 / n - mean * mean);
  return {S.area() * mean, S.area() * std::sqrt(var / n)};
}

}  // namespace rbmo
