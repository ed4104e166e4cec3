#include "rbmo/open_set.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rbmo {

OpenSet::OpenSet(Rect window, int nx, int ny)
    : window_(window), nx_(nx), ny_(ny), bits_(size_t(nx) * ny, 0) {
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("OpenSet: empty lattice");
}

void OpenSet::set(int i, int j, bool v) {
  bits_[size_t(j) * nx_ + i] = v ? 1 : 0;
  dirty_ = true;
}

size_t OpenSet::count() const {
  return size_t(std::count(bits_.begin(), bits_.end(), 1));
}

void OpenSet::build() const {
  if (!dirty_) return;
  const size_t W = size_t(nx_) + 1;
  sat_.assign(W * (ny_ + 1), 0);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      const size_t k = (j + 1) * W + i + 1;
      sat_[k] = bits_[size_t(j) * nx_ + i] + sat_[k - 1] + sat_[k - W] - sat_[k - W - 1];
    }
  dirty_ = false;
}

size_t OpenSet::count_in(int i0, int i1, int j0, int j1) const {
  if (i1 < i0 || j1 < j0) return 0;
  build();
  const size_t W = size_t(nx_) + 1;
  return sat_[(j1 + 1) * W + i1 + 1] - sat_[j0 * W + i1 + 1] - sat_[(j1 + 1) * W + i0] +
         sat_[j0 * W + i0];
}

bool OpenSet::overlap_range(const Rect& r, int& i0, int& i1, int& j0, int& j1) const {
  const double u0 = (r.x0 - window_.x0) / cell_w(), u1 = (r.x1() - window_.x0) / cell_w();
  const double v0 = (r.y0 - window_.y0) / cell_h(), v1 = (r.y1() - window_.y0) / cell_h();
  const double eps = 1e-9;
  i0 = std::max(0, int(std::floor(u0 + eps)));
  i1 = std::min(nx_ - 1, int(std::ceil(u1 - eps)) - 1);
  j0 = std::max(0, int(std::floor(v0 + eps)));
  j1 = std::min(ny_ - 1, int(std::ceil(v1 - eps)) - 1);
  return i0 <= i1 && j0 <= j1;
}

bool OpenSet::centre_range(const Rect& r, int& i0, int& i1, int& j0, int& j1) const {
  // centre of cell i is at (i + 1/2); closed containment u0 <= i + 1/2 <= u1
  const double u0 = (r.x0 - window_.x0) / cell_w(), u1 = (r.x1() - window_.x0) / cell_w();
  const double v0 = (r.y0 - window_.y0) / cell_h(), v1 = (r.y1() - window_.y0) / cell_h();
  i0 = std::max(0, int(std::ceil(u0 - 0.5)));
  i1 = std::min(nx_ - 1, int(std::floor(u1 - 0.5)));
  j0 = std::max(0, int(std::ceil(v0 - 0.5)));
  j1 = std::min(ny_ - 1, int(std::floor(v1 - 0.5)));
  return i0 <= i1 && j0 <= j1;
}

void OpenSet::add_rect(const Rect& r) {
  int i0, i1, j0, j1;
  if (!overlap_range(r, i0, i1, j0, j1)) return;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) bits_[size_t(j) * nx_ + i] = 1;
  dirty_ = true;
}

void OpenSet::unite(const OpenSet& o) {
  if (o.nx_ != nx_ || o.ny_ != ny_) throw std::invalid_argument("OpenSet::unite: lattice mismatch");
  for (size_t k = 0; k < bits_.size(); ++k) bits_[k] |= o.bits_[k];
  dirty_ = true;
}

bool OpenSet::subset_of(const OpenSet& o) const {
  if (o.nx_ != nx_ || o.ny_ != ny_) throw std::invalid_argument("OpenSet::subset_of: lattice mismatch");
  for (size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] && !o.bits_[k]) return false;
  return true;
}

bool OpenSet::contains(const Rect& r) const {
  if (r.x0 < window_.x0 - 1e-12 || r.y0 < window_.y0 - 1e-12 || r.x1() > window_.x1() + 1e-12 ||
      r.y1() > window_.y1() + 1e-12)
    return false;
  int i0, i1, j0, j1;
  if (!overlap_range(r, i0, i1, j0, j1)) return false;
  return count_in(i0, i1, j0, j1) == size_t(i1 - i0 + 1) * size_t(j1 - j0 + 1);
}

bool OpenSet::contains_centres(const Rect& r) const {
  int i0, i1, j0, j1;
  if (!centre_range(r, i0, i1, j0, j1)) return true;
  return count_in(i0, i1, j0, j1) == size_t(i1 - i0 + 1) * size_t(j1 - j0 + 1);
}

void OpenSet::write_pbm(std::ostream& os) const {
  os << "P1\n" << nx_ << ' ' << ny_ << '\n';
  // top row first, as image viewers expect
  for (int j = ny_ - 1; j >= 0; --j) {
    for (int i = 0; i < nx_; ++i) os << (get(i, j) ? '1' : '0') << (i + 1 < nx_ ? " " : "");
    os << '\n';
  }
}

OpenSet OpenSet::read_pbm(std::istream& is) {
  std::string magic;
  is >> magic;
  if (magic != "P1") throw std::runtime_error("read_pbm: not an ASCII PBM");
  int nx, ny;
  is >> nx >> ny;
  OpenSet s(Rect(0, 0, nx, ny), nx, ny);
  for (int j = ny - 1; j >= 0; --j)
    for (int i = 0; i < nx; ++i) {
      int b;
      if (!(is >> b)) throw std::runtime_error("read_pbm: truncated bitmap");
      s.set(i, j, b != 0);
    }
  return s;
}

std::string OpenSet::header_json() const {
  nlohmann::json j{{"window", {window_.x0, window_.y0, window_.w, window_.h}},
                   {"resolution", {nx_, ny_}}};
  return j.dump();
}

OpenSet OpenSet::from_header_and_pbm(const std::string& header, std::istream& pbm) {
  auto j = nlohmann::json::parse(header);
  const auto w = j.at("window");
  OpenSet raw = read_pbm(pbm);
  if (raw.nx_ != j.at("resolution")[0].get<int>() || raw.ny_ != j.at("resolution")[1].get<int>())
    throw std::runtime_error("OpenSet: header resolution does not match bitmap");
  OpenSet s(Rect(w[0], w[1], w[2], w[3]), raw.nx_, raw.ny_);
  s.bits_ = raw.bits_;
  return s;
}

}  // namespace rbmo
