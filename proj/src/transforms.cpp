#include "rbmo/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace rbmo {

namespace {


class Pullback : public ScalarField {
 public:
  Pullback(FieldPtr F, double theta, QuadratureOptions opt) : F_(std::move(F)), t_(theta), opt_(opt) {}
  double value(double x, double y) const override {
    const Point q = rotate({x, y}, t_);
    return F_->value(q.x, q.y);
  }
  double integrate(const Rect& r) const override {
    return adaptive_integrate([this](double x, double y) { return value(x, y); }, clip(r), opt_);
  }
  double integrate_sq(const Rect& r) const override {
    return adaptive_integrate([this](double x, double y) { double v = value(x, y); return v * v; },
                              clip(r), opt_);
  }
  std::optional<Rect> support() const override {
    auto s = F_->support();
    if (!s) return std::nullopt;
    return RotatedRect{*s, -t_}.bbox();
  }

 private:
  Rect clip(const Rect& r) const {
    auto s = support();
    if (!s) return r;
    const double x0 = std::max(r.x0, s->x0), x1 = std::min(r.x1(), s->x1());
    const double y0 = std::max(r.y0, s->y0), y1 = std::min(r.y1(), s->y1());
    if (x1 <= x0 || y1 <= y0) return Rect(r.x0, r.y0, 1e-300, 1e-300);
    return Rect(x0, y0, x1 - x0, y1 - y0);
  }
  FieldPtr F_;
  double t_;
  QuadratureOptions opt_;
};

}  // namespace

FieldPtr compose_rotation(FieldPtr F, double theta, QuadratureOptions opt) {
  if (theta == 0.0) return F;
  if (auto P = std::dynamic_pointer_cast<const PolygonIndicator>(F)) {
    // F∘φ is the indicator of φ^{-1}(P)
    ConvexPolygon q = P->polygon();
    for (auto& v : q.v) v = rotate(v, -theta);
    return std::make_shared<PolygonIndicator>(q, P->amplitude());
  }
  return std::make_shared<Pullback>(std::move(F), theta, opt);
}

GridSamples compose_rotation(const GridSamples& F, double theta, std::optional<Rect> target) {
  const double cw = F.cell_w(), ch = F.cell_h();
  Rect win = target.value_or(RotatedRect{F.window(), -theta}.bbox());
  if (target) {
    // rotated support: the nonzero cells of F pulled back by φ
    int i0 = F.nx(), i1 = -1, j0 = F.ny(), j1 = -1;
    for (int j = 0; j < F.ny(); ++j)
      for (int i = 0; i < F.nx(); ++i)
        if (F.at(i, j) != 0.0) {
          i0 = std::min(i0, i);
          i1 = std::max(i1, i);
          j0 = std::min(j0, j);
          j1 = std::max(j1, j);
        }
    if (i1 >= 0) {
      const Rect supp(F.window().x0 + i0 * cw, F.window().y0 + j0 * ch, (i1 - i0 + 1) * cw, (j1 - j0 + 1) * ch);
      const Rect need = RotatedRect{supp, -theta}.bbox();
      if (need.x0 < win.x0 - 1e-12 || need.y0 < win.y0 - 1e-12 || need.x1() > win.x1() + 1e-12 ||
          need.y1() > win.y1() + 1e-12)
        throw std::invalid_argument("compose_rotation: rotated support exceeds the target window");
    }
  }
  const int nx = std::max(1, int(std::ceil(win.w / cw - 1e-9)));
  const int ny = std::max(1, int(std::ceil(win.h / ch - 1e-9)));
  if (!target) win = Rect(win.x0, win.y0, nx * cw, ny * ch);
  GridSamples out(win, nx, ny);
  const Rect& W = F.window();
  auto at = [&](int i, int j) {
    return (i < 0 || j < 0 || i >= F.nx() || j >= F.ny()) ? 0.0 : F.at(i, j);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Point c = out.cell_center(i, j);
      const Point q = rotate(c, theta);
      const double u = (q.x - W.x0) / cw - 0.5, v = (q.y - W.y0) / ch - 0.5;
      const int i0 = int(std::floor(u)), j0 = int(std::floor(v));
      const double fx = u - i0, fy = v - j0;
      out.at(i, j) = (1 - fx) * (1 - fy) * at(i0, j0) + fx * (1 - fy) * at(i0 + 1, j0) +
                     (1 - fx) * fy * at(i0, j0 + 1) + fx * fy * at(i0 + 1, j0 + 1);
    }
  return out;
}

GridSamples apply_multiplier(const GridSamples& F,
                             const std::function<std::complex<double>(double, double)>& m, int pad) {
  if (pad < 1) throw std::invalid_argument("apply_multiplier: pad must be at least 1");
  const int nx = F.nx(), ny = F.ny(), Nx = pad * nx, Ny = pad * ny;
  const double Lx = pad * F.window().w, Ly = pad * F.window().h;
  fftw_complex* buf = fftw_alloc_complex(size_t(Nx) * Ny);
  fftw_plan fwd = fftw_plan_dft_2d(Ny, Nx, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_2d(Ny, Nx, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (size_t k = 0; k < size_t(Nx) * Ny; ++k) buf[k][0] = buf[k][1] = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) buf[size_t(j) * Nx + i][0] = F.at(i, j);
  fftw_execute(fwd);
  for (int j = 0; j < Ny; ++j) {
    const int ky = j <= Ny / 2 ? j : j - Ny;
    for (int i = 0; i < Nx; ++i) {
      const int kx = i <= Nx / 2 ? i : i - Nx;
      // the Nyquist row/column has no sign; zero it so real fields stay real
      const bool nyq = (Nx % 2 == 0 && i == Nx / 2) || (Ny % 2 == 0 && j == Ny / 2);
      std::complex<double> z(buf[size_t(j) * Nx + i][0], buf[size_t(j) * Nx + i][1]);
      z = nyq ? 0.0 : z * m(2.0 * M_PI * kx / Lx, 2.0 * M_PI * ky / Ly);
      buf[size_t(j) * Nx + i][0] = z.real() / (double(Nx) * Ny);
      buf[size_t(j) * Nx + i][1] = z.imag() / (double(Nx) * Ny);
    }
  }
  fftw_execute(bwd);
  GridSamples out(F.window(), nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out.at(i, j) = buf[size_t(j) * Nx + i][0];
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  return out;
}

GridSamples directional_hilbert(const GridSamples& F, Point v, int pad) {
  return apply_multiplier(
      F,
      [v](double a, double b) {
        const double s = v.x * a + v.y * b;
        return std::complex<double>(0.0, s > 0 ? -1.0 : (s < 0 ? 1.0 : 0.0));
      },
      pad);
}

GridSamples rough_operator(const GridSamples& F, const std::function<double(double)>& omega,
                           int n_theta, int pad) {
  if (n_theta < 2) throw std::invalid_argument("rough_operator: need at least two nodes");
  const double dt = 2.0 * M_PI / n_theta;
  std::vector<double> w(static_cast<size_t>(n_theta)), ang(static_cast<size_t>(n_theta));
  double mean = 0.0, scale = 0.0;
  for (int k = 0; k < n_theta; ++k) {
    ang[size_t(k)] = (k + 0.5) * dt;
    w[size_t(k)] = omega(ang[size_t(k)]);
    mean += w[size_t(k)] * dt;
    scale += std::abs(w[size_t(k)]) * dt;
  }
  if (std::abs(mean) > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("rough_operator: kernel mean is not zero");
  return apply_multiplier(
      F,
      [&](double a, double b) {
        double s = 0.0;
        for (int k = 0; k < n_theta; ++k) {
          const double d = std::cos(ang[size_t(k)]) * a + std::sin(ang[size_t(k)]) * b;
          s += w[size_t(k)] * (d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0));
        }
        return std::complex<double>(0.0, -0.5 * s * dt);
      },
      pad);
}

}  // namespace rbmo
