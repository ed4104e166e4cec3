#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rbmo/dyadic.hpp"
#include "rbmo/geometry.hpp"

namespace rbmo {

// Finite union of lattice cells of a window, stored as a bitmap (row-major, x fastest).
class OpenSet {
 public:
  OpenSet(Rect window, int nx, int ny);

  const Rect& window() const { return window_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_w() const { return window_.w / nx_; }
  double cell_h() const { return window_.h / ny_; }
  bool get(int i, int j) const { return bits_[size_t(j) * nx_ + i] != 0; }
  void set(int i, int j, bool v = true);
  size_t count() const;
  double measure() const { return double(count()) * cell_w() * cell_h(); }
  bool empty() const { return count() == 0; }

  // add every cell meeting r in positive area
  void add_rect(const Rect& r);
  void unite(const OpenSet& o);
  bool subset_of(const OpenSet& o) const;

  // all cells overlapping r (positive area) belong to the set; false if r leaves the window
  bool contains(const Rect& r) const;
  // all cells whose centres lie in the closed rectangle belong to the set (window-restricted)
  bool contains_centres(const Rect& r) const;
  // cell index range [i0, i1] x [j0, j1] overlapping r in positive area, clamped to the window
  bool overlap_range(const Rect& r, int& i0, int& i1, int& j0, int& j1) const;
  bool centre_range(const Rect& r, int& i0, int& i1, int& j0, int& j1) const;
  size_t count_in(int i0, int i1, int j0, int j1) const;

  void write_pbm(std::ostream& os) const;
  static OpenSet read_pbm(std::istream& is);
  std::string header_json() const;
  static OpenSet from_header_and_pbm(const std::string& header, std::istream& pbm);

 private:
  void build() const;
  Rect window_;
  int nx_, ny_;
  std::vector<unsigned char> bits_;
  mutable std::vector<std::uint32_t> sat_;
  mutable bool dirty_ = true;
};

}  // namespace rbmo
