#include "rbmo/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rbmo {

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Polynomial pieces in the local variable (x - lo).
struct Piece {
  double lo, hi;
  std::vector<double> c;
};

double poly_eval(const std::vector<double>& c, double t) {
  double r = 0.0;
  for (size_t i = c.size(); i-- > 0;) r = r * t + c[i];
  return r;
}

double poly_deriv(const std::vector<double>& c, double t) {
  double r = 0.0;
  for (size_t i = c.size(); i-- > 1;) r = r * t + double(i) * c[i];
  return r;
}

double poly_int(const std::vector<double>& c, double t) {
  double r = 0.0;
  for (size_t i = c.size(); i-- > 0;) r = r * t + c[i] / double(i + 1);
  return r * t;
}

std::vector<double> poly_sq(const std::vector<double>& c) {
  std::vector<double> r(c.empty() ? 0 : 2 * c.size() - 1, 0.0);
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < c.size(); ++j) r[i + j] += c[i] * c[j];
  return r;
}

// p(t) composed with the affine map t -> (t + shift) * scale, expanded in t
std::vector<double> poly_affine(const std::vector<double>& c, double scale, double shift) {
  std::vector<double> r(c.size(), 0.0);
  std::vector<double> pw{1.0};  // ((t + shift) * scale)^i
  for (size_t i = 0; i < c.size(); ++i) {
    for (size_t j = 0; j < pw.size(); ++j) r[j] += c[i] * pw[j];
    std::vector<double> nx(pw.size() + 1, 0.0);
    for (size_t j = 0; j < pw.size(); ++j) {
      nx[j + 1] += pw[j] * scale;
      nx[j] += pw[j] * shift * scale;
    }
    pw = nx;
  }
  return r;
}

class PiecewisePoly : public Factor1D {
 public:
  explicit PiecewisePoly(std::vector<Piece> p) : pieces_(std::move(p)) {
    for (auto& q : pieces_) sq_.push_back(poly_sq(q.c));
  }
  double value(double x) const override {
    for (auto& q : pieces_)
      if (x >= q.lo && x < q.hi) return poly_eval(q.c, x - q.lo);
    return 0.0;
  }
  double derivative(double x) const override {
    for (auto& q : pieces_)
      if (x >= q.lo && x < q.hi) return poly_deriv(q.c, x - q.lo);
    return 0.0;
  }
  double integral(double a, double b) const override { return integrate(a, b, false); }
  double integral_sq(double a, double b) const override { return integrate(a, b, true); }
  std::pair<double, double> support() const override {
    return {pieces_.front().lo, pieces_.back().hi};
  }

 private:
  double integrate(double a, double b, bool sq) const {
    double sign = 1.0;
    if (b < a) std::swap(a, b), sign = -1.0;
    double s = 0.0;
    for (size_t i = 0; i < pieces_.size(); ++i) {
      const auto& q = pieces_[i];
      const double lo = std::max(a, q.lo), hi = std::min(b, q.hi);
      if (hi <= lo) continue;
      const auto& c = sq ? sq_[i] : q.c;
      s += poly_int(c, hi - q.lo) - poly_int(c, lo - q.lo);
    }
    return sign * s;
  }
  std::vector<Piece> pieces_;
  std::vector<std::vector<double>> sq_;
};

// smoothstep from v0 to v1 over [lo, lo + w] as a local cubic
Piece ramp(double lo, double w, double v0, double v1) {
  const double d = v1 - v0;
  return {lo, lo + w, {v0, 0.0, 3.0 * d / (w * w), -2.0 * d / (w * w * w)}};
}

class PowerTail : public Factor1D {
 public:
  explicit PowerTail(double alpha) : a_(alpha) {
    if (!(alpha > 0)) throw std::invalid_argument("power_tail: alpha must be positive");
  }
  double value(double y) const override { return std::abs(y) <= 1 ? 1.0 : std::pow(std::abs(y), -a_); }
  double derivative(double y) const override {
    if (std::abs(y) <= 1) return 0.0;
    return -a_ * std::copysign(std::pow(std::abs(y), -a_ - 1.0), y);
  }
  double integral(double a, double b) const override { return span(a, b, a_); }
  double integral_sq(double a, double b) const override { return span(a, b, 2.0 * a_); }
  std::pair<double, double> support() const override { return {-kInf, kInf}; }

 private:
  // ∫_1^Y y^{-e} dy for Y >= 1
  static double tail(double Y, double e) {
    if (Y <= 1.0) return 0.0;
    if (std::isinf(Y)) return e > 1.0 ? 1.0 / (e - 1.0) : kInf;
    if (std::abs(e - 1.0) < 1e-14) return std::log(Y);
    return std::expm1((1.0 - e) * std::log(Y)) / (1.0 - e);
  }
  // ∫_0^Y of the profile |y|^{-e} capped at 1, for Y >= 0
  static double half(double Y, double e) { return std::min(Y, 1.0) + tail(Y, e); }
  static double signed_half(double Y, double e) { return Y >= 0 ? half(Y, e) : -half(-Y, e); }
  static double span(double a, double b, double e) { return signed_half(b, e) - signed_half(a, e); }
  double a_;
};

class Trig : public Factor1D {
 public:
  Trig(double w, double ph, double amp) : w_(w), ph_(ph), amp_(amp) {
    if (w == 0.0) throw std::invalid_argument("trig: zero frequency");
  }
  double value(double x) const override { return amp_ * std::sin(w_ * x + ph_); }
  double derivative(double x) const override { return amp_ * w_ * std::cos(w_ * x + ph_); }
  double integral(double a, double b) const override {
    return -amp_ / w_ * (std::cos(w_ * b + ph_) - std::cos(w_ * a + ph_));
  }
  double integral_sq(double a, double b) const override {
    auto F = [&](double x) { return 0.5 * x - std::sin(2.0 * (w_ * x + ph_)) / (4.0 * w_); };
    return amp_ * amp_ * (F(b) - F(a));
  }
  std::pair<double, double> support() const override { return {-kInf, kInf}; }

 private:
  double w_, ph_, amp_;
};

}  // namespace

FactorPtr indicator(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("indicator: empty interval");
  return std::make_shared<PiecewisePoly>(std::vector<Piece>{{a, b, {1.0}}});
}

FactorPtr haar_step(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("haar_step: empty interval");
  const double m = 0.5 * (a + b);
  return std::make_shared<PiecewisePoly>(std::vector<Piece>{{a, m, {1.0}}, {m, b, {-1.0}}});
}

FactorPtr smooth_haar(double a, double b, double width) {
  if (!(b > a)) throw std::invalid_argument("smooth_haar: empty interval");
  if (!(width > 0.0) || width > 1.0 / 3.0)
    throw std::invalid_argument("smooth_haar: width must lie in (0, 1/3]");
  const double L = b - a, w = width * L, m = a + 0.5 * L;
  std::vector<Piece> p;
  p.push_back(ramp(a, w, 0.0, 1.0));
  if (m - 0.5 * w > a + w) p.push_back({a + w, m - 0.5 * w, {1.0}});
  p.push_back(ramp(m - 0.5 * w, w, 1.0, -1.0));
  if (b - w > m + 0.5 * w) p.push_back({m + 0.5 * w, b - w, {-1.0}});
  p.push_back(ramp(b - w, w, -1.0, 0.0));
  return std::make_shared<PiecewisePoly>(std::move(p));
}

FactorPtr power_tail(double alpha) { return std::make_shared<PowerTail>(alpha); }

FactorPtr trig(double omega, double phase, double amp) {
  return std::make_shared<Trig>(omega, phase, amp);
}

FactorPtr bump(double c, double r) {
  if (!(r > 0)) throw std::invalid_argument("bump: radius must be positive");
  // (1 - u^2)^2 with u = (x - c)/r, written in t = x - (c - r): u = t/r - 1
  const std::vector<double> in_u{1.0, 0.0, -2.0, 0.0, 1.0};
  return std::make_shared<PiecewisePoly>(
      std::vector<Piece>{{c - r, c + r, poly_affine(in_u, 1.0 / r, -r)}});
}

double ScalarField::integrate_sq(const Rect& r) const {
  return adaptive_integrate([this](double x, double y) { double v = value(x, y); return v * v; }, r);
}

double SeparableField::integrate(const Rect& r) const {
  return scale_ * f_->integral(r.x0, r.x1()) * g_->integral(r.y0, r.y1());
}

double SeparableField::integrate_sq(const Rect& r) const {
  return scale_ * scale_ * f_->integral_sq(r.x0, r.x1()) * g_->integral_sq(r.y0, r.y1());
}

std::optional<Rect> SeparableField::support() const {
  auto [a, b] = f_->support();
  auto [c, d] = g_->support();
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
    return std::nullopt;
  return Rect(a, c, b - a, d - c);
}

namespace {

struct GaussRule {
  std::array<double, 8> x, w;
  GaussRule() {
    const int n = 8;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), pp = 0;
      for (int it = 0; it < 100; ++it) {
        double p1 = 1, p2 = 0;
        for (int j = 0; j < n; ++j) {
          double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1) * z * p2 - j * p3) / (j + 1);
        }
        pp = n * (z * p1 - p2) / (z * z - 1);
        double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1 - z * z) * pp * pp);
    }
  }
};

const GaussRule& gauss() {
  static const GaussRule g;
  return g;
}

double gl_cell(const std::function<double(double, double)>& f, const Rect& r) {
  const auto& g = gauss();
  const double hx = 0.5 * r.w, hy = 0.5 * r.h, cx = r.x0 + hx, cy = r.y0 + hy;
  double s = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) s += g.w[i] * g.w[j] * f(cx + hx * g.x[i], cy + hy * g.x[j]);
  return s * hx * hy;
}

}  // namespace

double adaptive_integrate(const std::function<double(double, double)>& f, const Rect& r,
                          const QuadratureOptions& opt) {
  struct Item {
    Rect r;
    double est;
    int depth;
  };
  const double total_area = r.area();
  const double coarse = gl_cell(f, r);
  double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));
  std::vector<Item> stack{{r, coarse, 0}};
  double sum = 0.0, unresolved = 0.0;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    double kids[4], fine = 0.0;
    for (int q = 0; q < 4; ++q) fine += kids[q] = gl_cell(f, it.r.quadrant(q));
    const double err = std::abs(fine - it.est);
    const double local_tol = tol * it.r.area() / total_area;
    if (err <= local_tol) {
      sum += fine;
    } else if (it.depth >= opt.max_depth) {
      sum += fine;
      unresolved += err;
    } else {
      for (int q = 0; q < 4; ++q) stack.push_back({it.r.quadrant(q), kids[q], it.depth + 1});
    }
    if (stack.size() > 4000000) throw QuadratureError(err);
  }
  if (unresolved > std::max(tol, 1e3 * opt.abs_tol)) throw QuadratureError(unresolved);
  return sum;
}

double adaptive_integrate_1d(const std::function<double(double)>& f, double a, double b,
                             const QuadratureOptions& opt) {
  if (b <= a) return 0.0;
  const auto& g = gauss();
  auto cell = [&](double lo, double hi) {
    const double h = 0.5 * (hi - lo), c = lo + h;
    double s = 0;
    for (int i = 0; i < 8; ++i) s += g.w[i] * f(c + h * g.x[i]);
    return s * h;
  };
  struct Item {
    double lo, hi, est;
    int depth;
  };
  const double coarse = cell(a, b);
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));
  std::vector<Item> stack{{a, b, coarse, 0}};
  double sum = 0.0, unresolved = 0.0;
  const int max_depth = 4 * opt.max_depth;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const double m = 0.5 * (it.lo + it.hi);
    const double l = cell(it.lo, m), r = cell(m, it.hi);
    const double err = std::abs(l + r - it.est);
    if (err <= tol * (it.hi - it.lo) / (b - a)) {
      sum += l + r;
    } else if (it.depth >= max_depth) {
      sum += l + r;
      unresolved += err;
    } else {
      stack.push_back({it.lo, m, l, it.depth + 1});
      stack.push_back({m, it.hi, r, it.depth + 1});
    }
  }
  if (unresolved > std::max(tol, 1e3 * opt.abs_tol)) throw QuadratureError(unresolved);
  return sum;
}

namespace {

class Dilated : public Factor1D {
 public:
  Dilated(FactorPtr f, double l) : f_(std::move(f)), l_(l) {
    if (!(l > 0)) throw std::invalid_argument("dilated: factor must be positive");
  }
  double value(double x) const override { return f_->value(l_ * x); }
  double derivative(double x) const override { return l_ * f_->derivative(l_ * x); }
  double integral(double a, double b) const override { return f_->integral(l_ * a, l_ * b) / l_; }
  double integral_sq(double a, double b) const override {
    return f_->integral_sq(l_ * a, l_ * b) / l_;
  }
  std::pair<double, double> support() const override {
    auto [lo, hi] = f_->support();
    return {lo / l_, hi / l_};
  }

 private:
  FactorPtr f_;
  double l_;
};

}  // namespace

FactorPtr dilated(FactorPtr f, double lambda) { return std::make_shared<Dilated>(std::move(f), lambda); }

double ClosedExpr::integrate(const Rect& r) const {
  if (supp_) {
    const double x0 = std::max(r.x0, supp_->x0), x1 = std::min(r.x1(), supp_->x1());
    const double y0 = std::max(r.y0, supp_->y0), y1 = std::min(r.y1(), supp_->y1());
    if (x1 <= x0 || y1 <= y0) return 0.0;
    return adaptive_integrate(fn_, Rect(x0, y0, x1 - x0, y1 - y0), opt_);
  }
  return adaptive_integrate(fn_, r, opt_);
}

double ClosedExpr::integrate_sq(const Rect& r) const {
  return adaptive_integrate([this](double x, double y) { double v = fn_(x, y); return v * v; }, r, opt_);
}

double PolygonIndicator::value(double x, double y) const {
  const size_t n = poly_.v.size();
  if (n < 3) return 0.0;
  for (size_t i = 0; i < n; ++i)
    if (cross(poly_.v[(i + 1) % n] - poly_.v[i], Point{x, y} - poly_.v[i]) < 0) return 0.0;
  return amp_;
}

std::optional<Rect> PolygonIndicator::support() const {
  if (poly_.empty()) return std::nullopt;
  double lx = poly_.v[0].x, hx = lx, ly = poly_.v[0].y, hy = ly;
  for (auto& p : poly_.v) {
    lx = std::min(lx, p.x), hx = std::max(hx, p.x);
    ly = std::min(ly, p.y), hy = std::max(hy, p.y);
  }
  return Rect(lx, ly, hx - lx, hy - ly);
}

double SumField::value(double x, double y) const {
  double s = 0;
  for (auto& p : parts_) s += p->value(x, y);
  return s;
}

double SumField::integrate(const Rect& r) const {
  double s = 0;
  for (auto& p : parts_) s += p->integrate(r);
  return s;
}

std::optional<Rect> SumField::support() const {
  std::optional<Rect> out;
  for (auto& p : parts_) {
    auto s = p->support();
    if (!s) return std::nullopt;
    if (!out) {
      out = s;
    } else {
      const double x0 = std::min(out->x0, s->x0), y0 = std::min(out->y0, s->y0);
      const double x1 = std::max(out->x1(), s->x1()), y1 = std::max(out->y1(), s->y1());
      out = Rect(x0, y0, x1 - x0, y1 - y0);
    }
  }
  return out;
}

GridSamples::GridSamples(Rect window, int nx, int ny)
    : window_(window), nx_(nx), ny_(ny), v_(size_t(nx) * ny, 0.0) {
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("GridSamples: empty grid");
}

GridSamples::GridSamples(Rect window, int nx, int ny, std::vector<double> v)
    : window_(window), nx_(nx), ny_(ny), v_(std::move(v)) {
  if (nx <= 0 || ny <= 0 || v_.size() != size_t(nx) * ny)
    throw std::invalid_argument("GridSamples: size mismatch");
}

GridSamples::GridSamples(const GridSamples& o)
    : window_(o.window_), nx_(o.nx_), ny_(o.ny_), v_(o.v_) {}

GridSamples& GridSamples::operator=(const GridSamples& o) {
  if (this != &o) {
    window_ = o.window_, nx_ = o.nx_, ny_ = o.ny_, v_ = o.v_;
    dirty_ = true;
  }
  return *this;
}

Point GridSamples::cell_center(int i, int j) const {
  return {window_.x0 + (i + 0.5) * cell_w(), window_.y0 + (j + 0.5) * cell_h()};
}

double GridSamples::value(double x, double y) const {
  const double u = (x - window_.x0) / cell_w(), v = (y - window_.y0) / cell_h();
  if (u < 0 || v < 0 || u >= nx_ || v >= ny_) return 0.0;
  return at(int(u), int(v));
}

void GridSamples::build() const {
  if (!dirty_.load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lk(build_mu_);
  if (!dirty_.load(std::memory_order_relaxed)) return;
  const size_t W = size_t(nx_) + 1;
  prefix_.assign(W * (ny_ + 1), 0.0);
  prefix_sq_.assign(W * (ny_ + 1), 0.0);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      const double a = at(i, j);
      const size_t k = (j + 1) * W + i + 1;
      prefix_[k] = a + prefix_[k - 1] + prefix_[k - W] - prefix_[k - W - 1];
      prefix_sq_[k] = a * a + prefix_sq_[k - 1] + prefix_sq_[k - W] - prefix_sq_[k - W - 1];
    }
  dirty_.store(false, std::memory_order_release);
}

double GridSamples::cumulative(const std::vector<double>& S, double X, double Y) const {
  const double u = std::clamp((X - window_.x0) / cell_w(), 0.0, double(nx_));
  const double v = std::clamp((Y - window_.y0) / cell_h(), 0.0, double(ny_));
  const int i = std::min(int(u), nx_ - 1), j = std::min(int(v), ny_ - 1);
  const double fx = u - i, fy = v - j;
  const size_t W = size_t(nx_) + 1;
  const double s00 = S[j * W + i], s10 = S[j * W + i + 1];
  const double s01 = S[(j + 1) * W + i], s11 = S[(j + 1) * W + i + 1];
  return cell_area() *
         (s00 + fx * (s10 - s00) + fy * (s01 - s00) + fx * fy * (s11 - s10 - s01 + s00));
}

double GridSamples::integrate(const Rect& r) const {
  build();
  return cumulative(prefix_, r.x1(), r.y1()) - cumulative(prefix_, r.x0, r.y1()) -
         cumulative(prefix_, r.x1(), r.y0) + cumulative(prefix_, r.x0, r.y0);
}

double GridSamples::integrate_sq(const Rect& r) const {
  build();
  return cumulative(prefix_sq_, r.x1(), r.y1()) - cumulative(prefix_sq_, r.x0, r.y1()) -
         cumulative(prefix_sq_, r.x1(), r.y0) + cumulative(prefix_sq_, r.x0, r.y0);
}

double GridSamples::lp_norm(double p) const {
  if (std::isinf(p)) {
    double m = 0;
    for (double a : v_) m = std::max(m, std::abs(a));
    return m;
  }
  double s = 0;
  for (double a : v_) s += std::pow(std::abs(a), p);
  return std::pow(s * cell_area(), 1.0 / p);
}

GridSamples GridSamples::sample(const ScalarField& f, Rect window, int nx, int ny) {
  GridSamples g(window, nx, ny);
  const double A = g.cell_area();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Rect c(window.x0 + i * g.cell_w(), window.y0 + j * g.cell_h(), g.cell_w(), g.cell_h());
      g.at(i, j) = f.integrate(c) / A;
    }
  return g;
}

GridSamples GridSamples::sample_points(const ScalarField& f, Rect window, int nx, int ny) {
  GridSamples g(window, nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Point c = g.cell_center(i, j);
      g.at(i, j) = f.value(c.x, c.y);
    }
  return g;
}

}  // namespace rbmo
