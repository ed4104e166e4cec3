#include "rbmo/haar.hpp"

#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rbmo {

double haar_value(const DyadicInterval& I, double x) {
  const double lo = I.lo(), len = I.len();
  if (x < lo || x >= lo + len) return 0.0;
  const double a = 1.0 / std::sqrt(len);
  return x < lo + 0.5 * len ? a : -a;
}

double coeff1(const Factor1D& f, const DyadicInterval& I) {
  const double lo = I.lo(), len = I.len(), m = lo + 0.5 * len;
  return (f.integral(lo, m) - f.integral(m, lo + len)) / std::sqrt(len);
}

double coeff(const ScalarField& F, const Rect& R) {
  double s = 0.0;
  for (int q = 0; q < 4; ++q) {
    const double sg = ((q & 1) ? -1.0 : 1.0) * ((q & 2) ? -1.0 : 1.0);
    s += sg * F.integrate(R.quadrant(q));
  }
  return s / std::sqrt(R.area());
}

double coeff(const ScalarField& F, const DyadicRectangle& R) {
  if (auto* sep = dynamic_cast<const SeparableField*>(&F))
    return sep->scale() * coeff1(sep->f(), R.ix) * coeff1(sep->g(), R.iy);
  return coeff(F, R.realize());
}

double HaarCoefficientMap::get(const DyadicRectangle& R) const {
  auto it = entries_.find(key(R));
  return it == entries_.end() ? 0.0 : it->second;
}

DyadicRectangle HaarCoefficientMap::rect(const Key& k) const {
  return {{grid_.sx, std::get<0>(k), std::get<1>(k)}, {grid_.sy, std::get<2>(k), std::get<3>(k)}};
}

double HaarCoefficientMap::sum_sq() const {
  double s = 0;
  for (auto& [k, v] : entries_) s += v * v;
  return s;
}

void HaarCoefficientMap::write_jsonl(std::ostream& os) const {
  for (auto& [k, v] : entries_) {
    nlohmann::json j{{"grid", grid_.name()}, {"kx", std::get<0>(k)}, {"jx", std::get<1>(k)},
                     {"ky", std::get<2>(k)}, {"jy", std::get<3>(k)}, {"value", v}};
    os << j.dump() << '\n';
  }
}

HaarCoefficientMap HaarCoefficientMap::read_jsonl(std::istream& is) {
  HaarCoefficientMap m;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    const std::string g = j.at("grid");
    GridId id{g.size() == 3 && g[0] == 'd', g.size() == 3 && g[2] == 'd'};
    if (first) m.grid_ = id, first = false;
    if (!(id == m.grid_)) throw std::runtime_error("read_jsonl: mixed grids");
    m.entries_[{j.at("kx").get<int>(), j.at("jx").get<std::int64_t>(), j.at("ky").get<int>(),
                j.at("jy").get<std::int64_t>()}] = j.at("value").get<double>();
  }
  return m;
}

namespace {

int exact_log2(int n) {
  int l = 0;
  while ((1 << l) < n) ++l;
  return (1 << l) == n ? l : -1;
}

// window side as a D^0 interval; returns scale and index or throws
DyadicInterval window_interval(double lo, double len) {
  const int k = static_cast<int>(std::lround(std::log2(len)));
  if (std::ldexp(1.0, k) != len) throw std::invalid_argument("forward: incompatible window length");
  const double j = std::ldexp(lo, -k);
  if (j != std::floor(j)) throw std::invalid_argument("forward: window not aligned to D^0");
  return {false, k, static_cast<std::int64_t>(j)};
}

// in-place orthonormal Haar on a strided line; layout [mean, coarse details ..., fine details]
void haar_line(double* a, int n, size_t stride, std::vector<double>& tmp) {
  tmp.resize(n);
  for (int len = n; len > 1; len /= 2) {
    const int h = len / 2;
    for (int i = 0; i < h; ++i) {
      const double x = a[2 * i * stride], y = a[(2 * i + 1) * stride];
      tmp[i] = (x + y) * M_SQRT1_2;
      tmp[h + i] = (x - y) * M_SQRT1_2;
    }
    for (int i = 0; i < len; ++i) a[i * stride] = tmp[i];
  }
}

void ihaar_line(double* a, int n, size_t stride, std::vector<double>& tmp) {
  tmp.resize(n);
  for (int len = 2; len <= n; len *= 2) {
    const int h = len / 2;
    for (int i = 0; i < h; ++i) {
      const double s = a[i * stride], d = a[(h + i) * stride];
      tmp[2 * i] = (s + d) * M_SQRT1_2;
      tmp[2 * i + 1] = (s - d) * M_SQRT1_2;
    }
    for (int i = 0; i < len; ++i) a[i * stride] = tmp[i];
  }
}

// position p >= 1 in a transformed line of a window interval W -> dyadic interval
DyadicInterval detail_interval(const DyadicInterval& W, int p) {
  int m = 0;
  while ((2 << m) <= p) ++m;
  return {false, W.k - m, (W.j << m) + (p - (1 << m))};
}

void transform2d(std::vector<double>& c, int nx, int ny, bool inverse_dir) {
  std::vector<double> tmp;
  if (!inverse_dir) {
    for (int j = 0; j < ny; ++j) haar_line(c.data() + size_t(j) * nx, nx, 1, tmp);
    for (int i = 0; i < nx; ++i) haar_line(c.data() + i, ny, nx, tmp);
  } else {
    for (int i = 0; i < nx; ++i) ihaar_line(c.data() + i, ny, nx, tmp);
    for (int j = 0; j < ny; ++j) ihaar_line(c.data() + size_t(j) * nx, nx, 1, tmp);
  }
}

}  // namespace

HaarCoefficientMap forward(const GridSamples& F, GridId grid) {
  if (grid.sx || grid.sy)
    throw std::invalid_argument("forward: shifted grids are incompatible with the sample lattice");
  const int nx = F.nx(), ny = F.ny();
  if (exact_log2(nx) < 0 || exact_log2(ny) < 0)
    throw std::invalid_argument("forward: incompatible resolution (not a power of two)");
  const DyadicInterval Wx = window_interval(F.window().x0, F.window().w);
  const DyadicInterval Wy = window_interval(F.window().y0, F.window().h);
  const double sa = std::sqrt(F.cell_area());
  std::vector<double> c(F.data());
  for (double& v : c) v *= sa;
  transform2d(c, nx, ny, false);

  HaarCoefficientMap out(grid);
  std::vector<double> kern(c.size(), 0.0);
  for (int q = 0; q < ny; ++q)
    for (int p = 0; p < nx; ++p) {
      const double v = c[size_t(q) * nx + p];
      if (p == 0 || q == 0) {
        kern[size_t(q) * nx + p] = v;
        continue;
      }
      out.set({detail_interval(Wx, p), detail_interval(Wy, q)}, v);
    }
  transform2d(kern, nx, ny, true);
  for (double& v : kern) v /= sa;
  out.kernel = GridSamples(F.window(), nx, ny, std::move(kern));
  out.layout = GridSamples(F.window(), nx, ny);
  return out;
}

GridSamples inverse(const HaarCoefficientMap& C) {
  if (!C.layout) throw std::invalid_argument("inverse: coefficient map carries no window layout");
  const GridSamples& L = *C.layout;
  const int nx = L.nx(), ny = L.ny();
  const DyadicInterval Wx = window_interval(L.window().x0, L.window().w);
  const DyadicInterval Wy = window_interval(L.window().y0, L.window().h);
  std::vector<double> c(size_t(nx) * ny, 0.0);
  for (auto& [k, v] : C.entries()) {
    const auto R = C.rect(k);
    const int mx = Wx.k - R.ix.k, my = Wy.k - R.iy.k;
    const auto px = (std::int64_t(1) << mx) + (R.ix.j - (Wx.j << mx));
    const auto py = (std::int64_t(1) << my) + (R.iy.j - (Wy.j << my));
    if (mx < 0 || my < 0 || px >= nx || py >= ny || px < (1 << mx) || py < (1 << my))
      throw std::invalid_argument("inverse: coefficient outside the window");
    c[size_t(py) * nx + px] = v;
  }
  transform2d(c, nx, ny, true);
  const double sa = std::sqrt(L.cell_area());
  for (double& v : c) v /= sa;
  return GridSamples(L.window(), nx, ny, std::move(c));
}

GridSamples project_out_kernel(const GridSamples& F) { return inverse(forward(F)); }

}  // namespace rbmo
