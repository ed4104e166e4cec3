#include "rbmo/norms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <nlohmann/json.hpp>
#include <random>

namespace rbmo {

double osc(const Factor1D& f, Interval I) {
  const double len = I.b - I.a;
  if (!(len > 0)) throw std::invalid_argument("osc: empty interval");
  const double m = f.integral(I.a, I.b) / len;
  const double v = f.integral_sq(I.a, I.b) / len - m * m;
  return std::sqrt(std::max(v, 0.0));
}

double osc(const std::function<double(double)>& f, Interval I, const QuadratureOptions& opt) {
  const double len = I.b - I.a;
  if (!(len > 0)) throw std::invalid_argument("osc: empty interval");
  const double m = adaptive_integrate_1d(f, I.a, I.b, opt) / len;
  const double v = adaptive_integrate_1d([&](double x) { double d = f(x) - m; return d * d; },
                                         I.a, I.b, opt);
  return std::sqrt(std::max(v / len, 0.0));
}

std::string BmoEstimate::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["lower_bound"] = true;
  j["grid"] = grid.name();
  j["family"] = family;
  auto& w = j["witness"] = nlohmann::json::array();
  for (const auto& r : witness) w.push_back({{"x0", r.x0}, {"y0", r.y0}, {"w", r.w}, {"h", r.h}});
  if (interval) j["interval"] = {interval->a, interval->b};
  if (witness_set) j["witness_set"] = nlohmann::json::parse(witness_set->header_json());
  return j.dump();
}

BmoEstimate bmo_1d(const Factor1D& f, const std::vector<Interval>& family,
                   const std::string& family_name) {
  BmoEstimate e;
  e.family = family_name;
  for (const auto& I : family) {
    const double o = osc(f, I);
    if (o > e.value || !e.interval) {
      e.value = o;
      e.interval = I;
    }
  }
  return e;
}

std::vector<Interval> tail_family(int n_geom, int n_random, std::uint64_t seed) {
  std::vector<Interval> out;
  std::vector<double> js;
  for (int i = 0; i < n_geom; ++i) js.push_back(std::pow(2.0, -8.0 + 20.0 * i / (n_geom - 1)));
  for (double j : js) {
    out.push_back({1.0, 1.0 + j});
    out.push_back({-1.0 - j, 1.0 + j});
    out.push_back({1.0 - j, 1.0 + j});
  }
  for (double j1 : js)
    for (double j2 : js)
      if (j1 <= j2) out.push_back({-1.0 - j1, 1.0 + j2});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-10.0, 10.0), E(-6.0, 10.0);
  for (int i = 0; i < n_random; ++i) {
    const double c = U(rng), len = std::pow(2.0, E(rng));
    out.push_back({c - 0.5 * len, c + 0.5 * len});
  }
  return out;
}

bool union_contains(const std::vector<Rect>& U, const Rect& r, double tol) {
  std::vector<double> xs{r.x0, r.x1()}, ys{r.y0, r.y1()};
  bool any = false;
  for (const auto& u : U) {
    if (u.x1() <= r.x0 + tol || u.x0 >= r.x1() - tol || u.y1() <= r.y0 + tol || u.y0 >= r.y1() - tol)
      continue;
    any = true;
    if (u.x0 <= r.x0 + tol && u.x1() >= r.x1() - tol && u.y0 <= r.y0 + tol && u.y1() >= r.y1() - tol)
      return true;
    if (u.x0 > r.x0) xs.push_back(u.x0);
    if (u.x1() < r.x1()) xs.push_back(u.x1());
    if (u.y0 > r.y0) ys.push_back(u.y0);
    if (u.y1() < r.y1()) ys.push_back(u.y1());
  }
  if (!any) return false;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (xs[i + 1] - xs[i] <= tol) continue;
    for (size_t j = 0; j + 1 < ys.size(); ++j) {
      if (ys[j + 1] - ys[j] <= tol) continue;
      const Point c{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      bool hit = false;
      for (const auto& u : U)
        if (c.x > u.x0 && c.x < u.x1() && c.y > u.y0 && c.y < u.y1()) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
  }
  return true;
}

namespace {

double union_area(const std::vector<Rect>& U) {
  std::vector<double> xs, ys;
  for (const auto& u : U) {
    xs.insert(xs.end(), {u.x0, u.x1()});
    ys.insert(ys.end(), {u.y0, u.y1()});
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double a = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    for (size_t j = 0; j + 1 < ys.size(); ++j) {
      const Point c{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      for (const auto& u : U)
        if (c.x > u.x0 && c.x < u.x1() && c.y > u.y0 && c.y < u.y1()) {
          a += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
          break;
        }
    }
  return a;
}

struct Entry {
  Rect r;
  double c2;
};

std::vector<Entry> flat_entries(const HaarCoefficientMap& C) {
  std::vector<Entry> out;
  for (const auto& [k, v] : C.entries())
    if (v != 0.0) out.push_back({C.rect(k).realize(), v * v});
  return out;
}

double carleson_flat(const std::vector<Entry>& E, const std::vector<Rect>& U) {
  const double area = union_area(U);
  if (!(area > 0)) throw std::invalid_argument("carleson_sum: empty set");
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& u : U) {
    x0 = std::min(x0, u.x0);
    y0 = std::min(y0, u.y0);
    x1 = std::max(x1, u.x1());
    y1 = std::max(y1, u.y1());
  }
  double s = 0.0;
  for (const auto& e : E) {
    if (e.r.x0 < x0 || e.r.x1() > x1 || e.r.y0 < y0 || e.r.y1() > y1) continue;
    if (union_contains(U, e.r)) s += e.c2;
  }
  return std::sqrt(s / area);
}

}  // namespace

double carleson_sum(const HaarCoefficientMap& C, const OpenSet& omega) {
  if (omega.empty()) throw std::invalid_argument("carleson_sum: empty set");
  double s = 0.0;
  for (const auto& [k, v] : C.entries()) {
    const Rect r = C.rect(k).realize();
    if (omega.contains(r)) s += v * v;
  }
  return std::sqrt(s / omega.measure());
}

double carleson_sum(const HaarCoefficientMap& C, const std::vector<Rect>& omega) {
  return carleson_flat(flat_entries(C), omega);
}

namespace {

// index range of scale-k intervals of a grid axis lying inside [lo, hi]
std::pair<std::int64_t, std::int64_t> inside_range(bool shifted, int k, double lo, double hi) {
  auto [a, b] = index_range(shifted, k, lo, hi);
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  while (a <= b && DyadicInterval{shifted, k, a}.lo() < lo - tol) ++a;
  while (a <= b && DyadicInterval{shifted, k, b}.hi() > hi + tol) --b;
  return {a, b};
}

struct Level {
  std::int64_t jx0 = 0, nx = 0, jy0 = 0, ny = 0;
  std::vector<double> U, T;
  double& u(std::int64_t jx, std::int64_t jy) { return U[size_t((jx - jx0) * ny + (jy - jy0))]; }
  double& t(std::int64_t jx, std::int64_t jy) { return T[size_t((jx - jx0) * ny + (jy - jy0))]; }
};

struct Scored {
  Rect r;
  double value;
};

}  // namespace

HaarCoefficientMap coefficients(const ScalarField& F, const Rect& window, GridId g, int kmin,
                                int kmax) {
  HaarCoefficientMap C(g);
  for (int kx = kmin; kx <= kmax; ++kx) {
    auto [x0, x1] = inside_range(g.sx, kx, window.x0, window.x1());
    for (int ky = kmin; ky <= kmax; ++ky) {
      auto [y0, y1] = inside_range(g.sy, ky, window.y0, window.y1());
      if ((x1 - x0 + 1) * double(y1 - y0 + 1) > 5e7)
        throw std::length_error("coefficients: too many rectangles");
      for (auto i = x0; i <= x1; ++i)
        for (auto j = y0; j <= y1; ++j) {
          const DyadicRectangle R{{g.sx, kx, i}, {g.sy, ky, j}};
          C.set(R, coeff(F, R));
        }
    }
  }
  return C;
}

BmoEstimate bmo_grid(const HaarCoefficientMap& C, const BiparamOptions& opt) {
  const GridId g = C.grid();
  const int K = opt.kmax - opt.kmin + 1;
  BmoEstimate best;
  best.grid = g;
  if (opt.strategy == Strategy::User) {
    best.family = "user";
    for (const auto& om : opt.user) {
      const double v = carleson_sum(C, om);
      if (v > best.value || !best.witness_set) {
        best.value = v;
        best.witness_set = om;
      }
    }
    return best;
  }

  // singles by dynamic programming over the dyadic tree
  std::vector<Level> L(size_t(K) * K);
  auto lev = [&](int kx, int ky) -> Level& { return L[size_t(kx - opt.kmin) * K + (ky - opt.kmin)]; };
  for (int kx = opt.kmin; kx <= opt.kmax; ++kx)
    for (int ky = opt.kmin; ky <= opt.kmax; ++ky) {
      Level& l = lev(kx, ky);
      auto [x0, x1] = inside_range(g.sx, kx, opt.window.x0, opt.window.x1());
      auto [y0, y1] = inside_range(g.sy, ky, opt.window.y0, opt.window.y1());
      l.jx0 = x0;
      l.nx = std::max<std::int64_t>(0, x1 - x0 + 1);
      l.jy0 = y0;
      l.ny = std::max<std::int64_t>(0, y1 - y0 + 1);
      l.U.assign(size_t(l.nx * l.ny), 0.0);
      l.T.assign(size_t(l.nx * l.ny), 0.0);
    }
  for (int kx = opt.kmin; kx <= opt.kmax; ++kx)
    for (int ky = opt.kmin; ky <= opt.kmax; ++ky) {
      Level& l = lev(kx, ky);
      for (std::int64_t a = 0; a < l.nx; ++a)
        for (std::int64_t b = 0; b < l.ny; ++b) {
          const DyadicInterval I{g.sx, kx, l.jx0 + a}, J{g.sy, ky, l.jy0 + b};
          const double c = C.get({I, J});
          double u = c * c;
          if (ky > opt.kmin) {
            auto [jl, jr] = J.children();
            u += lev(kx, ky - 1).u(I.j, jl.j) + lev(kx, ky - 1).u(I.j, jr.j);
          }
          l.u(I.j, J.j) = u;
        }
    }
  std::vector<Scored> singles;
  for (int kx = opt.kmin; kx <= opt.kmax; ++kx)
    for (int ky = opt.kmin; ky <= opt.kmax; ++ky) {
      Level& l = lev(kx, ky);
      for (std::int64_t a = 0; a < l.nx; ++a)
        for (std::int64_t b = 0; b < l.ny; ++b) {
          const DyadicInterval I{g.sx, kx, l.jx0 + a}, J{g.sy, ky, l.jy0 + b};
          double t = l.u(I.j, J.j);
          if (kx > opt.kmin) {
            auto [il, ir] = I.children();
            t += lev(kx - 1, ky).t(il.j, J.j) + lev(kx - 1, ky).t(ir.j, J.j);
          }
          l.t(I.j, J.j) = t;
          const DyadicRectangle R{I, J};
          singles.push_back({R.realize(), std::sqrt(t / R.area())});
        }
    }
  if (singles.empty()) throw std::invalid_argument("bmo_grid: no rectangle inside the window");
  std::sort(singles.begin(), singles.end(),
            [](const Scored& a, const Scored& b) { return a.value > b.value; });
  best.value = singles.front().value;
  best.witness = {singles.front().r};
  best.family = "singles";
  if (opt.strategy == Strategy::Singles) return best;

  const auto E = flat_entries(C);
  if (opt.strategy == Strategy::Unions) {
    best.family = "unions<=3";
    const int m = std::min<int>(opt.union_pool, int(singles.size()));
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        std::vector<Rect> U{singles[a].r, singles[b].r};
        double v = carleson_flat(E, U);
        if (v > best.value) {
          best.value = v;
          best.witness = U;
        }
        for (int c = b + 1; c < m; ++c) {
          U = {singles[a].r, singles[b].r, singles[c].r};
          v = carleson_flat(E, U);
          if (v > best.value) {
            best.value = v;
            best.witness = U;
          }
        }
      }
    return best;
  }

  best.family = "greedy";
  const int m = std::min<int>(opt.greedy_pool, int(singles.size()));
  std::vector<bool> used(size_t(m), false);
  used[0] = true;
  for (;;) {
    int pick = -1;
    double pv = best.value;
    for (int i = 0; i < m; ++i) {
      if (used[size_t(i)]) continue;
      auto U = best.witness;
      U.push_back(singles[size_t(i)].r);
      const double v = carleson_flat(E, U);
      if (v > pv) {
        pv = v;
        pick = i;
      }
    }
    if (pick < 0) break;
    used[size_t(pick)] = true;
    best.witness.push_back(singles[size_t(pick)].r);
    best.value = pv;
  }
  return best;
}

BmoEstimate bmo_biparam(const ScalarField& F, const BiparamOptions& opt) {
  BmoEstimate best;
  bool first = true;
  for (const GridId g : opt.grids) {
    const auto C = coefficients(F, opt.window, g, opt.kmin, opt.kmax);
    auto e = bmo_grid(C, opt);
    if (first || e.value > best.value) best = e;
    first = false;
  }
  return best;
}

namespace {

struct Dyadic1D {
  double value;
  DyadicInterval I;
};

// per-interval normalised Carleson sums |I|^{-1} Σ_{I'⊆I} ⟨f, h_I'⟩², best first
std::vector<Dyadic1D> carleson_1d(const Factor1D& f, double lo, double hi, bool shifted, int kmin,
                                  int kmax) {
  std::map<std::pair<int, std::int64_t>, double> S;
  std::vector<Dyadic1D> out;
  for (int k = kmin; k <= kmax; ++k) {
    auto [a, b] = inside_range(shifted, k, lo, hi);
    for (auto j = a; j <= b; ++j) {
      const DyadicInterval I{shifted, k, j};
      const double c = coeff1(f, I);
      double s = c * c;
      if (k > kmin) {
        auto [l, r] = I.children();
        s += S[{k - 1, l.j}] + S[{k - 1, r.j}];
      }
      S[{k, j}] = s;
      out.push_back({s / I.len(), I});
    }
  }
  std::sort(out.begin(), out.end(), [](const Dyadic1D& a, const Dyadic1D& b) { return a.value > b.value; });
  return out;
}

}  // namespace

BmoEstimate dyadic_bmo_1d(const Factor1D& f, double lo, double hi, bool shifted, int kmin, int kmax) {
  auto v = carleson_1d(f, lo, hi, shifted, kmin, kmax);
  if (v.empty()) throw std::invalid_argument("dyadic_bmo_1d: no interval inside the window");
  BmoEstimate e;
  e.value = std::sqrt(v.front().value);
  e.interval = Interval{v.front().I.lo(), v.front().I.hi()};
  e.grid = {shifted, false};
  e.family = "dyadic-singles-1d";
  return e;
}

BmoEstimate bmo_biparam_separable(const SeparableField& F, const BiparamOptions& opt) {
  if (opt.strategy != Strategy::Singles)
    throw std::invalid_argument("bmo_biparam_separable: only the single-rectangle strategy factorises");
  BmoEstimate best;
  bool first = true;
  for (const GridId g : opt.grids) {
    auto A = carleson_1d(F.f(), opt.window.x0, opt.window.x1(), g.sx, opt.kmin, opt.kmax);
    auto B = carleson_1d(F.g(), opt.window.y0, opt.window.y1(), g.sy, opt.kmin, opt.kmax);
    if (A.empty() || B.empty()) continue;
    const double v = std::abs(F.scale()) * std::sqrt(A.front().value * B.front().value);
    if (first || v > best.value) {
      best.value = v;
      best.grid = g;
      best.witness = {DyadicRectangle{A.front().I, B.front().I}.realize()};
      best.family = "singles-separable";
    }
    first = false;
  }
  return best;
}

SobolevNorm sobolev_norm(const GridSamples& F, double s, double p, double max_high_band) {
  if (!(p > 1.0)) throw std::invalid_argument("sobolev_norm: p must exceed 1");
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("sobolev_norm: s must lie in [0, 1]");
  const int nx = F.nx(), ny = F.ny(), Nx = 2 * nx, Ny = 2 * ny;
  const double Lx = 2.0 * F.window().w, Ly = 2.0 * F.window().h;
  const double cell = F.cell_area();
  const int Nh = Nx / 2 + 1;

  double* in = fftw_alloc_real(size_t(Nx) * Ny);
  fftw_complex* out = fftw_alloc_complex(size_t(Ny) * Nh);
  fftw_plan fwd = fftw_plan_dft_r2c_2d(Ny, Nx, in, out, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_c2r_2d(Ny, Nx, out, in, FFTW_ESTIMATE);
  std::fill(in, in + size_t(Nx) * Ny, 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) in[size_t(j) * Nx + i] = F.at(i, j);
  fftw_execute(fwd);

  double total = 0.0, high = 0.0;
  for (int j = 0; j < Ny; ++j) {
    const int ky = j <= Ny / 2 ? j : j - Ny;
    for (int i = 0; i < Nh; ++i) {
      const int kx = i;
      std::complex<double> z(out[size_t(j) * Nh + i][0], out[size_t(j) * Nh + i][1]);
      const double w = (i == 0 || (Nx % 2 == 0 && i == Nx / 2)) ? 1.0 : 2.0;
      const double e = w * std::norm(z);
      total += e;
      if (std::abs(kx) > nx / 2 || std::abs(ky) > ny / 2) high += e;
      const double xi_x = 2.0 * M_PI * kx / Lx, xi_y = 2.0 * M_PI * ky / Ly;
      z *= std::pow(1.0 + xi_x * xi_x + xi_y * xi_y, 0.5 * s) / (double(Nx) * Ny);
      out[size_t(j) * Nh + i][0] = z.real();
      out[size_t(j) * Nh + i][1] = z.imag();
    }
  }
  SobolevNorm res;
  res.high_band = total > 0 ? high / total : 0.0;
  if (res.high_band > max_high_band) {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
    throw ResolutionError(res.high_band);
  }
  fftw_execute(bwd);
  double acc = 0.0;
  for (size_t k = 0; k < size_t(Nx) * Ny; ++k) acc += std::pow(std::abs(in[k]), p);
  res.spectral = std::pow(acc * cell, 1.0 / p);
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(in);
  fftw_free(out);

  if (s == 1.0) {
    auto u = [&](int i, int j) { return (i < 0 || j < 0 || i >= nx || j >= ny) ? 0.0 : F.at(i, j); };
    double a0 = 0.0, ax = 0.0, ay = 0.0;
    const double hx = F.cell_w(), hy = F.cell_h();
    for (int j = -1; j <= ny; ++j)
      for (int i = -1; i <= nx; ++i) {
        a0 += std::pow(std::abs(u(i, j)), p);
        ax += std::pow(std::abs(u(i + 1, j) - u(i - 1, j)) / (2.0 * hx), p);
        ay += std::pow(std::abs(u(i, j + 1) - u(i, j - 1)) / (2.0 * hy), p);
      }
    res.fd = std::pow(a0 * cell, 1.0 / p) + std::pow(ax * cell, 1.0 / p) + std::pow(ay * cell, 1.0 / p);
  }
  return res;
}

}  // namespace rbmo
