#pragma once

#include <vector>

#include "rbmo/dyadic.hpp"
#include "rbmo/open_set.hpp"

namespace rbmo {

// MM(1_S) on every lattice cell, row-major. The dictionary holds all rectangles of
// 2^a x 2^b cells (2^a, 2^b up to the lattice size) anchored at integer cells; the
// part outside the window counts as zero.
std::vector<double> strong_max_field(const OpenSet& S);
// MM^θ(1_S) at a point: MM[1_S ∘ φ^θ](φ^{-θ}(p))
double strong_max(const OpenSet& S, Point p, double theta = 0.0);

// raster of φ^θ(S) on a lattice with the same cell size covering the rotated window
OpenSet rotate_set(const OpenSet& S, double theta);

struct Enlargement {
  OpenSet source;
  double epsilon;
  OpenSet result;
};

Enlargement enlarge(const OpenSet& omega, double eps);

// dyadic rectangles of the grid contained in Ω and maximal under inclusion
std::vector<DyadicRectangle> maximal_rectangles(const OpenSet& omega, GridId grid = {});
// every contained grid rectangle, for oracles
std::vector<DyadicRectangle> contained_rectangles(const OpenSet& omega, GridId grid = {});

struct JourneClass {
  int l = 0;
  std::vector<DyadicRectangle> members;
};

struct JourneResult {
  Enlargement first, second;          // Ω̃ and Ω̃̃
  std::vector<JourneClass> classes;   // increasing l, nonempty only
  bool saturated = false;             // some dilation covered the whole window
};

// largest l with 2^l K ⊆ set (cell centres in the closed dilate, window-restricted)
int journe_level(const OpenSet& doubly_enlarged, const DyadicRectangle& K, bool* saturated = nullptr);
JourneResult classify_journe(const OpenSet& omega, double eps);

// pieces of K_max with eccentricity in [2^{-l+3}, 2^{l-3}]
std::vector<DyadicRectangle> submaximal_split(const DyadicRectangle& K_max, int l);

}  // namespace rbmo
