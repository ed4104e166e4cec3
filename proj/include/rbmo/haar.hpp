#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <tuple>

#include "rbmo/dyadic.hpp"
#include "rbmo/field.hpp"

namespace rbmo {

double haar_value(const DyadicInterval& I, double x);
// ⟨f, h_I⟩ for a one-dimensional factor
double coeff1(const Factor1D& f, const DyadicInterval& I);
// ⟨F, h_I ⊗ h_J⟩ with quadrant signs (+,-;-,+)
double coeff(const ScalarField& F, const DyadicRectangle& R);
double coeff(const ScalarField& F, const Rect& R);

class HaarCoefficientMap {
 public:
  using Key = std::tuple<int, std::int64_t, int, std::int64_t>;  // kx, jx, ky, jy

  HaarCoefficientMap() = default;
  explicit HaarCoefficientMap(GridId g) : grid_(g) {}

  GridId grid() const { return grid_; }
  void set(const DyadicRectangle& R, double v) { entries_[key(R)] = v; }
  double get(const DyadicRectangle& R) const;
  size_t size() const { return entries_.size(); }
  const std::map<Key, double>& entries() const { return entries_; }
  DyadicRectangle rect(const Key& k) const;
  double sum_sq() const;

  // kernel component (terms involving the constant function on the window); set by forward()
  std::optional<GridSamples> kernel;
  // window geometry of the sampled field this map came from
  std::optional<GridSamples> layout;

  void write_jsonl(std::ostream& os) const;
  static HaarCoefficientMap read_jsonl(std::istream& is);

 private:
  static Key key(const DyadicRectangle& R) { return {R.ix.k, R.ix.j, R.iy.k, R.iy.j}; }
  GridId grid_{};
  std::map<Key, double> entries_;
};

// Full tensor Haar transform of a sampled field whose window is a D^0 dyadic rectangle
// split into 2^n x 2^m cells. Shifted grids are rejected.
HaarCoefficientMap forward(const GridSamples& F, GridId grid = {});
// wavelet part of the field (the kernel component is not added back)
GridSamples inverse(const HaarCoefficientMap& C);
GridSamples project_out_kernel(const GridSamples& F);

}  // namespace rbmo
