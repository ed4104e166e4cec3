#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rbmo/dyadic.hpp"
#include "rbmo/field.hpp"
#include "rbmo/open_set.hpp"

namespace rbmo {

// Candidate rectangles along a line: R of any grid with |R ∩ G| signs concentrated.
struct WitnessSearch {
  Point anchor{0.0, 0.0};  // a point on the line
  Point dir{0.0, 1.0};     // unit direction of the line
  double half_length = 1.0;
  int kmin = -7, kmax = -1;
};

struct WitnessCandidate {
  DyadicRectangle R;
  double value = 0.0;  // |⟨G, h_R⟩| / |R|^{1/2}
};

// best candidate per (grid, k1, k2), eccentricity 2^{k2-k1} within a factor 2 of tan θ
std::vector<WitnessCandidate> witness_search(const ScalarField& G, double theta, const WitnessSearch& ws);

// Counterexample 1: F(x, y) = 1_{[0,1]}(x), which has zero BMO norm.
FieldPtr ce1_field();
struct Ce1Result {
  double theta = 0.0;
  bool found = false;
  std::optional<DyadicRectangle> R;
  double exact = 0.0;       // polygon geometry
  double quadrature = 0.0;  // midpoint rule on quad_cells^2 sub-cells of R
  std::vector<std::string> trace;
  bool pass() const { return found && exact >= 1.0 / 16.0 - 1e-12; }
  std::string to_json() const;
};
// throws std::invalid_argument when θ is not in (0, 2π) minus the right angles
Ce1Result counterexample1(double theta, int kmin = -7, int kmax = -1, int quad_cells = 4096);

// Counterexample 2: F = f ⊗ g with f a smooth Haar step on [1, 2] and g the |y|^{-α} tail.
struct Ce2Row {
  double p = 0, alpha = 0;
  double f_p = 0, fprime_p = 0, g_p = 0, gprime_p = 0;
  double w1p = 0;          // ‖F‖_p + ‖D_x F‖_p + ‖D_y F‖_p
  double bmo = 0;          // dyadic biparameter estimate (single rectangles)
  double g_osc = 0;        // sup of osc_J(g) over the tail interval family
  double lower = 0;        // |⟨F∘φ, h_R⟩| / |R|^{1/2} at the rotated witness
  double margin = 0;       // lower - C2 p^{-1/4}
  double eps_needed = 0;   // margin / C1: the Sobolev weight forced by the contradiction
};
struct Ce2Result {
  double theta = 0;
  double Q = 0, Qprime = 0, C1 = 0, C2 = 0, slope = 0;
  std::optional<DyadicRectangle> R;
  std::vector<Ce2Row> rows;
  bool pass_a = false, pass_b_bound = false, pass_b_slope = false, pass_c = false;
  std::string csv() const;
  std::string to_json() const;
};
Ce2Result counterexample2(const std::vector<double>& ps, double theta = M_PI / 4);

// Interpolation sweep on the unit window; rotations act about the window centre.
struct SweepField {
  std::string name;
  FieldPtr F;
};
std::vector<SweepField> sweep_family(std::uint64_t seed = 1);

struct SweepOptions {
  std::vector<double> thetas{M_PI / 6, M_PI / 4};
  std::vector<double> epsilons{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625};
  double p = 4.0, s = 1.0;
  double gamma = -1.0;  // default δ/2
  int resolution = 128;
  std::uint64_t seed = 1;
};

struct SweepRow {
  std::string field;
  double theta = 0, epsilon = 0;
  double lhs = 0, bmo = 0, sobolev = 0;
  double term_bmo = 0, term_sobolev = 0;  // without C
  double c_min = 0;                        // lhs / (term_bmo + term_sobolev)
  double c_product = 0;                    // lhs / (bmo^α W^{1-α})
  double hv = 0, c_hv = 0;                 // ‖H_v F‖ and its ratio to bmo^{α²} W^{1-α²}
};

struct SweepResult {
  double delta = 0, gamma = 0, alpha = 0;
  std::vector<SweepRow> rows;
  double C = 0, C_product = 0, C_hv = 0, C_rough = 0;
  bool monotone = true;
  std::string csv() const;
  std::string to_json() const;
};
SweepResult interpolation_sweep(const SweepOptions& opt, const std::vector<SweepField>& family);

// Journé statistics over random Ω built from dyadic rectangles in the central quarter.
OpenSet random_omega(std::mt19937_64& rng, int resolution = 256, int max_rects = 20);
struct JourneStats {
  int runs = 0, level_violations = 0;
  double C_sum = 0, C_first = 0, C_second = 0;
};
JourneStats journe_stats(int n_sets, const std::vector<double>& epsilons, std::uint64_t seed,
                         int resolution = 256);

// Monte-Carlo estimate of ⟨h_S ∘ φ, h_T⟩ with its standard error
std::pair<double, double> inner_product_mc(const Rect& S, const Rect& T, double theta, int n,
                                           std::mt19937_64& rng);

struct SuiteCase {
  std::string name;
  bool passed = false;
  std::string detail;
};
struct SuiteReport {
  std::string suite;
  std::vector<SuiteCase> cases;
  bool passed() const;
  std::string junit() const;
};
const std::vector<std::string>& suite_names();
// throws std::invalid_argument for an unknown suite
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 1);

}  // namespace rbmo
