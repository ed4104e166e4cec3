#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rbmo/dyadic.hpp"
#include "rbmo/open_set.hpp"

namespace rbmo {

// Grid chosen for φ(K_max): the cover Q of its bounding box fixes β.
struct GridChoice {
  GridId beta;
  DyadicRectangle Q;
  double cx, cy;  // achieved concentric dilation factors
};

GridChoice choose_grid(const DyadicRectangle& K_max, double theta);

struct LambdaConfig {
  DyadicRectangle K_max;
  int r1 = 0, r2 = 0, k1 = 0, k2 = 0;
  double theta = 0.0;
  int l = 3;
  double p = 4.0;
  std::optional<OpenSet> omega_tilde;
  bool require_r1_condition = false;  // the 2^{-l}2^{r1} lower bound on r1

  // derived
  GridChoice grid;
  void refresh_grid() { grid = choose_grid(K_max, theta); }

  double K1() const { return K_max.ix.len(); }
  double K2() const { return K_max.iy.len(); }
  // height of φ(K_max): K2|cos| + K1|sin|
  double H() const;
  double p_prime() const { return p / (p - 1.0); }
  double q() const { return 2.0 / p_prime(); }
};

// Reason string when inadmissible, empty otherwise.
std::string admissibility(const LambdaConfig& cfg);
inline bool admissible(const LambdaConfig& cfg) { return admissibility(cfg).empty(); }
int r1_lower_bound(const DyadicRectangle& K_max, double theta, int k1, int k2, int l,
                   bool with_r1_condition);

std::vector<DyadicRectangle> sub_rectangles(const DyadicRectangle& K_max, int k1, int k2);
// grid-β rectangles of dims 2^r1 x 2^r2 meeting the closed rectangle `box`
std::vector<DyadicRectangle> r_candidates(const LambdaConfig& cfg, const Rect& box);

// (R, K) ∈ Λ: R meets φ(∂K), ∂R meets φ(K), and R is not inside the enlarged set
bool in_lambda(const LambdaConfig& cfg, const Rect& R, const Rect& K);

struct SegmentCounts {
  int Nv = 0, Nh = 0, tops = 0;  // tops: rectangles in Λ containing a top of φ(K)
};

SegmentCounts count_segments(const LambdaConfig& cfg, const DyadicRectangle& K);
int count_L(const LambdaConfig& cfg, const DyadicRectangle& R);
int count_M(const LambdaConfig& cfg);

// independent all-pairs recount used as an oracle
SegmentCounts count_segments_bruteforce(const LambdaConfig& cfg, const DyadicRectangle& K);

// bounds exactly as printed
double nv_bound_printed(const LambdaConfig& cfg);
double nh_bound_printed(const LambdaConfig& cfg);
double l_bound_printed(const LambdaConfig& cfg);
double m_bound_printed(const LambdaConfig& cfg);
// bounds with constants re-derived for closed cells (used by gamma_bound)
double nv_bound_rigorous(const LambdaConfig& cfg);
double nh_bound_rigorous(const LambdaConfig& cfg);
double l_bound_rigorous(const LambdaConfig& cfg);
double m_bound_rigorous(const LambdaConfig& cfg);

bool is_sparse(const LambdaConfig& cfg);
bool is_perfect_cancellation(const LambdaConfig& cfg);

struct GammaExact {
  double total = 0.0, gamma0 = 0.0, gamma1 = 0.0;
  std::int64_t pairs = 0, nonzero = 0, fallback = 0;
};

GammaExact gamma_exact(const LambdaConfig& cfg);
// the same sum, enumerated in a shuffled order (oracle for order independence)
double gamma_exact_shuffled(const LambdaConfig& cfg, std::uint64_t seed);

struct GammaReport {
  double exact = 0.0;
  double bound = 0.0;
  std::string case_tag;
  int Nv = 0, Nh = 0, L = 0, M = 0;  // observed maxima
};

std::string table_row(const LambdaConfig& cfg);
GammaReport gamma_bound(const LambdaConfig& cfg, const GammaExact* exact = nullptr);

// error-case table tag: "I".."IV" or "uncovered"
std::string error_case(int r1, int r2, int k1, int k2, double theta);

struct ScanParams {
  double p = 4.0, s = 1.0;
  double gamma1 = -0.22, gamma2 = 0.2;
  double theta_interp = 0.5;
  int kmin = -5;       // desk truncation of k1, k2
  int r2min = -7;      // desk truncation of r2
  int r1_terms = 4;    // r1 from its lower bound up to this many extra scales
  std::int64_t max_configs = 1000000;
};

struct ScanResult {
  double exact_total = 0.0, bound_total = 0.0;
  double mu = 0.0;
  double target = 0.0;  // 2^{-lμ}|K_max|
  std::int64_t configs = 0, uncovered = 0;
  bool exact_le_bound = true;
};

double scan_mu(const ScanParams& sp);
// one pass over the scales serving several l at once
std::vector<ScanResult> error_term_sweep(const DyadicRectangle& K_max, double theta,
                                         const std::vector<int>& ls, const ScanParams& sp);
ScanResult error_term_scan(const DyadicRectangle& K_max, double theta, int l, const ScanParams& sp);

// random admissible configuration; sparse=true forces the sparse regime
LambdaConfig sample_config(std::mt19937_64& rng, bool sparse_only, int max_k_cells = 1024);
// cancellation regime: R1 >= 2Q1 and K2|cos| + K1|sin| <= 2^{r2-2}
LambdaConfig sample_perfect_cancellation(std::mt19937_64& rng);

}  // namespace rbmo
