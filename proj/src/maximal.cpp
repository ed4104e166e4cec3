#include "rbmo/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbmo {

namespace {

int log2_exact(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// out[i] = max(in[i .. i+w-1]) for i in [0, n_out)
void sliding_max(const std::vector<double>& in, int w, std::vector<double>& out, int n_out,
                 std::vector<int>& dq) {
  dq.assign(in.size(), 0);
  int head = 0, tail = 0;
  int next = 0;
  for (int i = 0; i < n_out; ++i) {
    const int end = i + w;  // exclusive
    while (next < end) {
      while (tail > head && in[dq[tail - 1]] <= in[next]) --tail;
      dq[tail++] = next++;
    }
    while (dq[head] < i) ++head;
    out[i] = in[dq[head]];
  }
}

size_t clipped_count(const OpenSet& S, int i0, int i1, int j0, int j1) {
  i0 = std::max(i0, 0);
  j0 = std::max(j0, 0);
  i1 = std::min(i1, S.nx() - 1);
  j1 = std::min(j1, S.ny() - 1);
  return S.count_in(i0, i1, j0, j1);
}

int dictionary_levels(int n) { return log2_exact(n); }

}  // namespace

std::vector<double> strong_max_field(const OpenSet& S) {
  const int nx = S.nx(), ny = S.ny();
  std::vector<double> M(size_t(nx) * ny, 0.0);
  const int ax = dictionary_levels(nx), ay = dictionary_levels(ny);
  std::vector<double> A, row, rowout, col, colout, B;
  std::vector<int> dq;
  for (int a = 0; a <= ax; ++a)
    for (int b = 0; b <= ay; ++b) {
      const int w = 1 << a, h = 1 << b;
      const int NA = nx + w - 1, MA = ny + h - 1;
      const double inv = 1.0 / (double(w) * h);
      // B[ja][i] = max over anchors ia in [i, i+w-1] of the average of the anchored rectangle
      B.assign(size_t(MA) * nx, 0.0);
      row.resize(size_t(NA));
      rowout.resize(size_t(nx));
      for (int ja = 0; ja < MA; ++ja) {
        const int j0 = ja - (h - 1);
        bool any = false;
        for (int ia = 0; ia < NA; ++ia) {
          const int i0 = ia - (w - 1);
          row[size_t(ia)] = double(clipped_count(S, i0, i0 + w - 1, j0, j0 + h - 1)) * inv;
          any = any || row[size_t(ia)] > 0.0;
        }
        if (!any) continue;
        sliding_max(row, w, rowout, nx, dq);
        std::copy(rowout.begin(), rowout.end(), B.begin() + size_t(ja) * nx);
      }
      col.resize(size_t(MA));
      colout.resize(size_t(ny));
      for (int i = 0; i < nx; ++i) {
        for (int ja = 0; ja < MA; ++ja) col[size_t(ja)] = B[size_t(ja) * nx + i];
        sliding_max(col, h, colout, ny, dq);
        for (int j = 0; j < ny; ++j) {
          double& m = M[size_t(j) * nx + i];
          m = std::max(m, colout[size_t(j)]);
        }
      }
    }
  return M;
}

OpenSet rotate_set(const OpenSet& S, double theta) {
  const Rect bb = RotatedRect{S.window(), theta}.bbox();
  const double cw = S.cell_w(), ch = S.cell_h();
  const int nx = std::max(1, int(std::ceil(bb.w / cw - 1e-9)));
  const int ny = std::max(1, int(std::ceil(bb.h / ch - 1e-9)));
  OpenSet T(Rect(bb.x0, bb.y0, nx * cw, ny * ch), nx, ny);
  const Rect& W = S.window();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Point c{bb.x0 + (i + 0.5) * cw, bb.y0 + (j + 0.5) * ch};
      const Point q = rotate(c, -theta);
      const int si = int(std::floor((q.x - W.x0) / cw)), sj = int(std::floor((q.y - W.y0) / ch));
      if (si < 0 || sj < 0 || si >= S.nx() || sj >= S.ny()) continue;
      if (S.get(si, sj)) T.set(i, j);
    }
  return T;
}

double strong_max(const OpenSet& S0, Point p, double theta) {
  const OpenSet S = theta == 0.0 ? S0 : rotate_set(S0, -theta);
  const Point q = theta == 0.0 ? p : rotate(p, -theta);
  const Rect& W = S.window();
  const int i = int(std::floor((q.x - W.x0) / S.cell_w())), j = int(std::floor((q.y - W.y0) / S.cell_h()));
  if (i < 0 || j < 0 || i >= S.nx() || j >= S.ny())
    throw std::invalid_argument("strong_max: point outside the window");
  double best = 0.0;
  const int ax = dictionary_levels(S.nx()), ay = dictionary_levels(S.ny());
  for (int a = 0; a <= ax; ++a)
    for (int b = 0; b <= ay; ++b) {
      const int w = 1 << a, h = 1 << b;
      for (int i0 = i - w + 1; i0 <= i; ++i0)
        for (int j0 = j - h + 1; j0 <= j; ++j0)
          best = std::max(best, double(clipped_count(S, i0, i0 + w - 1, j0, j0 + h - 1)) /
                                    (double(w) * h));
    }
  return best;
}

Enlargement enlarge(const OpenSet& omega, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("enlarge: epsilon must lie in (0, 1)");
  const auto M = strong_max_field(omega);
  OpenSet out(omega.window(), omega.nx(), omega.ny());
  for (int j = 0; j < omega.ny(); ++j)
    for (int i = 0; i < omega.nx(); ++i)
      if (M[size_t(j) * omega.nx() + i] > eps) out.set(i, j);
  return {omega, eps, out};
}

namespace {

std::pair<int, int> scale_range(double len, int n) {
  const double cell = len / n;
  const int kc = int(std::lround(std::log2(cell)));
  if (std::abs(std::ldexp(1.0, kc) - cell) > 1e-12 * cell)
    throw std::invalid_argument("maximal_rectangles: cell size is not a power of two");
  return {kc, kc + log2_exact(n)};
}

template <class Fn>
void for_contained(const OpenSet& omega, GridId grid, Fn fn) {
  const Rect& W = omega.window();
  auto [kx0, kx1] = scale_range(W.w, omega.nx());
  auto [ky0, ky1] = scale_range(W.h, omega.ny());
  for (int kx = kx0; kx <= kx1; ++kx)
    for (int ky = ky0; ky <= ky1; ++ky)
      for (const auto& R : enumerate(W, grid, kx, ky))
        if (omega.contains(R.realize())) fn(R, kx == kx1, ky == ky1);
}

}  // namespace

std::vector<DyadicRectangle> contained_rectangles(const OpenSet& omega, GridId grid) {
  std::vector<DyadicRectangle> out;
  for_contained(omega, grid, [&](const DyadicRectangle& R, bool, bool) { out.push_back(R); });
  return out;
}

std::vector<DyadicRectangle> maximal_rectangles(const OpenSet& omega, GridId grid) {
  std::vector<DyadicRectangle> out;
  for_contained(omega, grid, [&](const DyadicRectangle& R, bool topx, bool topy) {
    // an ancestor in Ω would put the x- or y-parent rectangle in Ω
    if (!topx && omega.contains(DyadicRectangle{R.ix.parent(), R.iy}.realize())) return;
    if (!topy && omega.contains(DyadicRectangle{R.ix, R.iy.parent()}.realize())) return;
    out.push_back(R);
  });
  return out;
}

int journe_level(const OpenSet& S, const DyadicRectangle& K, bool* saturated) {
  const Rect base = K.realize();
  const Rect& W = S.window();
  int l = 0;
  for (;;) {
    const Rect D = base.dilate(std::ldexp(1.0, l + 1));
    if (!S.contains_centres(D)) return l;
    if (D.x0 <= W.x0 && D.y0 <= W.y0 && D.x1() >= W.x1() && D.y1() >= W.y1()) {
      if (saturated) *saturated = true;
      return l + 1;
    }
    ++l;
  }
}

JourneResult classify_journe(const OpenSet& omega, double eps) {
  JourneResult r{enlarge(omega, eps), enlarge(omega, eps), {}, false};
  r.second = enlarge(r.first.result, eps);
  std::vector<JourneClass> by_l;
  for (const auto& K : maximal_rectangles(omega)) {
    const int l = journe_level(r.second.result, K, &r.saturated);
    if (int(by_l.size()) <= l) by_l.resize(size_t(l) + 1);
    by_l[size_t(l)].l = l;
    by_l[size_t(l)].members.push_back(K);
  }
  for (auto& c : by_l)
    if (!c.members.empty()) r.classes.push_back(std::move(c));
  return r;
}

std::vector<DyadicRectangle> submaximal_split(const DyadicRectangle& K, int l) {
  if (l < 3) throw std::invalid_argument("submaximal_split: the eccentricity band is empty for l < 3");
  const int e = K.iy.k - K.ix.k;  // log2 eccentricity
  if (std::abs(e) <= l - 3) return {K};
  std::vector<DyadicRectangle> out;
  if (e > 0) {
    // tall: cut the vertical side into pieces of length 2^{l-3} K^1
    const int k = K.ix.k + (l - 3);
    for (const auto& R : enumerate(K.realize(), K.grid(), K.ix.k, k)) out.push_back(R);
  } else {
    const int k = K.iy.k + (l - 3);
    for (const auto& R : enumerate(K.realize(), K.grid(), k, K.iy.k)) out.push_back(R);
  }
  return out;
}

}  // namespace rbmo
