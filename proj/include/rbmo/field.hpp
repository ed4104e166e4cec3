#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rbmo/geometry.hpp"

namespace rbmo {

// One-dimensional factor of a separable field, with exact definite integrals.
class Factor1D {
 public:
  virtual ~Factor1D() = default;
  virtual double value(double x) const = 0;
  virtual double derivative(double x) const = 0;
  virtual double integral(double a, double b) const = 0;
  // integral of value^2 over [a, b]
  virtual double integral_sq(double a, double b) const = 0;
  // support [lo, hi]; infinite ends allowed
  virtual std::pair<double, double> support() const = 0;
};

using FactorPtr = std::shared_ptr<const Factor1D>;

FactorPtr indicator(double a, double b);
// amplitude-one Haar step on [a, b): +1 on the left half, -1 on the right half
FactorPtr haar_step(double a, double b);
// C^1 smoothstep variant of haar_step; transitions of the given width stay inside [a, b]
FactorPtr smooth_haar(double a, double b, double width = 0.125);
// 1 on [-1, 1], |y|^{-alpha} outside
FactorPtr power_tail(double alpha);
// amp * sin(omega * x + phase)
FactorPtr trig(double omega, double phase, double amp = 1.0);
// (1 - ((x - c)/r)^2)^2 on |x - c| < r
FactorPtr bump(double c, double r);

// x -> f(lambda x)
FactorPtr dilated(FactorPtr f, double lambda);

// cubic smoothstep 3t^2 - 2t^3 on [0, 1], clamped
double smoothstep(double t);

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(double x, double y) const = 0;
  virtual double integrate(const Rect& r) const = 0;
  // integral of the square over r
  virtual double integrate_sq(const Rect& r) const;
  virtual std::optional<Rect> support() const { return std::nullopt; }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

class SeparableField : public ScalarField {
 public:
  SeparableField(FactorPtr f, FactorPtr g, double scale = 1.0) : f_(f), g_(g), scale_(scale) {}
  double value(double x, double y) const override { return scale_ * f_->value(x) * g_->value(y); }
  double integrate(const Rect& r) const override;
  double integrate_sq(const Rect& r) const override;
  std::optional<Rect> support() const override;
  const Factor1D& f() const { return *f_; }
  const Factor1D& g() const { return *g_; }
  double scale() const { return scale_; }

 private:
  FactorPtr f_, g_;
  double scale_;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  int max_depth = 14;
};

// Adaptive 2D Gauss-Legendre; throws QuadratureError when the budget is exhausted.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double achieved) : std::runtime_error("quadrature did not converge"), achieved_error(achieved) {}
  double achieved_error;
};

double adaptive_integrate(const std::function<double(double, double)>& f, const Rect& r,
                          const QuadratureOptions& opt = {});

double adaptive_integrate_1d(const std::function<double(double)>& f, double a, double b,
                             const QuadratureOptions& opt = {});

class ClosedExpr : public ScalarField {
 public:
  ClosedExpr(std::function<double(double, double)> fn, std::optional<Rect> supp = std::nullopt,
             QuadratureOptions opt = {})
      : fn_(std::move(fn)), supp_(supp), opt_(opt) {}
  double value(double x, double y) const override { return fn_(x, y); }
  double integrate(const Rect& r) const override;
  double integrate_sq(const Rect& r) const override;
  std::optional<Rect> support() const override { return supp_; }

 private:
  std::function<double(double, double)> fn_;
  std::optional<Rect> supp_;
  QuadratureOptions opt_;
};

// amplitude times the indicator of a convex polygon
class PolygonIndicator : public ScalarField {
 public:
  PolygonIndicator(ConvexPolygon p, double amp = 1.0) : poly_(std::move(p)), amp_(amp) {}
  double value(double x, double y) const override;
  double integrate(const Rect& r) const override { return amp_ * clip_rect(poly_, r).area(); }
  double integrate_sq(const Rect& r) const override { return amp_ * amp_ * clip_rect(poly_, r).area(); }
  std::optional<Rect> support() const override;
  const ConvexPolygon& polygon() const { return poly_; }
  double amplitude() const { return amp_; }

 private:
  ConvexPolygon poly_;
  double amp_;
};

// Sum of fields.
class SumField : public ScalarField {
 public:
  explicit SumField(std::vector<FieldPtr> parts) : parts_(std::move(parts)) {}
  double value(double x, double y) const override;
  double integrate(const Rect& r) const override;
  std::optional<Rect> support() const override;

 private:
  std::vector<FieldPtr> parts_;
};

// Cell averages over a window split into nx x ny cells; row-major with x fastest.
class GridSamples : public ScalarField {
 public:
  GridSamples(Rect window, int nx, int ny);
  GridSamples(Rect window, int nx, int ny, std::vector<double> v);

  double value(double x, double y) const override;
  double integrate(const Rect& r) const override;
  double integrate_sq(const Rect& r) const override;
  std::optional<Rect> support() const override { return window_; }

  const Rect& window() const { return window_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_w() const { return window_.w / nx_; }
  double cell_h() const { return window_.h / ny_; }
  double cell_area() const { return cell_w() * cell_h(); }
  double& at(int i, int j) { dirty_ = true; return v_[size_t(j) * nx_ + i]; }
  GridSamples(const GridSamples& o);
  GridSamples& operator=(const GridSamples& o);
  double at(int i, int j) const { return v_[size_t(j) * nx_ + i]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& mutable_data() { dirty_ = true; return v_; }
  Point cell_center(int i, int j) const;
  double lp_norm(double p) const;
  double l2_norm() const { return lp_norm(2.0); }

  // cell averages of an arbitrary field (exact when the field integrates exactly)
  static GridSamples sample(const ScalarField& f, Rect window, int nx, int ny);
  // point values at cell centres
  static GridSamples sample_points(const ScalarField& f, Rect window, int nx, int ny);

 private:
  double cumulative(const std::vector<double>& S, double X, double Y) const;
  void build() const;

  Rect window_;
  int nx_, ny_;
  std::vector<double> v_;
  mutable std::atomic<bool> dirty_{true};
  mutable std::mutex build_mu_;
  mutable std::vector<double> prefix_, prefix_sq_;
};

}  // namespace rbmo
