#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbmo/field.hpp"
#include "rbmo/haar.hpp"
#include "rbmo/open_set.hpp"

namespace rbmo {

struct Interval {
  double a, b;
};

// L^2 oscillation (|I|^{-1} ∫_I |f - avg_I f|^2)^{1/2}
double osc(const Factor1D& f, Interval I);
double osc(const std::function<double(double)>& f, Interval I, const QuadratureOptions& opt = {});

// All values are lower bounds of the true supremum, realised by the witness.
struct BmoEstimate {
  double value = 0.0;
  GridId grid{};
  std::vector<Rect> witness;            // union of rectangles
  std::optional<OpenSet> witness_set;   // for bitmap candidates
  std::optional<Interval> interval;     // one-parameter witness
  std::string family;

  std::string to_json() const;
};

BmoEstimate bmo_1d(const Factor1D& f, const std::vector<Interval>& family,
                   const std::string& family_name = "custom");
// intervals around the tail function's critical configurations plus seeded random ones
std::vector<Interval> tail_family(int n_geom = 48, int n_random = 256, std::uint64_t seed = 7);

// (|Ω|^{-1} Σ_{R ⊆ Ω} ⟨F, h_R⟩²)^{1/2}
double carleson_sum(const HaarCoefficientMap& C, const OpenSet& omega);
double carleson_sum(const HaarCoefficientMap& C, const std::vector<Rect>& omega);
bool union_contains(const std::vector<Rect>& U, const Rect& r, double tol = 1e-12);

enum class Strategy { Singles, Greedy, Unions, User };

struct BiparamOptions {
  Rect window{0.0, 0.0, 1.0, 1.0};
  int kmin = -5, kmax = 0;
  Strategy strategy = Strategy::Singles;
  std::vector<GridId> grids{{false, false}, {true, false}, {false, true}, {true, true}};
  int greedy_pool = 48;
  int union_pool = 12;
  std::vector<OpenSet> user;
};

// every grid rectangle inside the window with both scales in [kmin, kmax]
HaarCoefficientMap coefficients(const ScalarField& F, const Rect& window, GridId g, int kmin,
                                int kmax);
BmoEstimate bmo_grid(const HaarCoefficientMap& C, const BiparamOptions& opt);
BmoEstimate bmo_biparam(const ScalarField& F, const BiparamOptions& opt);
// single-rectangle strategy for f ⊗ g: the Carleson sum factorises
BmoEstimate bmo_biparam_separable(const SeparableField& F, const BiparamOptions& opt);
// one-parameter dyadic Carleson supremum max_I (|I|^{-1} Σ_{I'⊆I} ⟨f, h_I'⟩²)^{1/2}
BmoEstimate dyadic_bmo_1d(const Factor1D& f, double lo, double hi, bool shifted, int kmin, int kmax);

class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(double frac)
      : std::runtime_error("sobolev_norm: resolution too coarse"), high_band(frac) {}
  double high_band;
};

struct SobolevNorm {
  double spectral = 0.0;         // ‖(1-Δ)^{s/2} F‖_p on the padded periodic grid
  std::optional<double> fd;      // s = 1: ‖F‖_p + ‖∂_x F‖_p + ‖∂_y F‖_p
  double high_band = 0.0;        // spectral energy fraction above half the Nyquist index
};

// F is treated as point values at cell centres, zero outside its window
SobolevNorm sobolev_norm(const GridSamples& F, double s, double p, double max_high_band = 1e-2);

}  // namespace rbmo
