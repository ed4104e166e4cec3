#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rbmo/estimates.hpp"
#include "rbmo/experiments.hpp"
#include "rbmo/norms.hpp"
#include "rbmo/rotated_inner.hpp"
#include "rbmo/transforms.hpp"

namespace rbmo {

namespace {

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

template <class... A>
std::string fmt(A&&... a) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << a);
  return os.str();
}

Rect random_rect(std::mt19937_64& rng, double span) {
  std::uniform_real_distribution<double> U(-span, span);
  std::uniform_int_distribution<int> K(-4, 1);
  const double w = std::ldexp(1.0, K(rng)), h = std::ldexp(1.0, K(rng));
  return Rect(U(rng), U(rng), w, h);
}

SuiteReport geometry_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> A(0.0, 2 * M_PI);
  SuiteReport r{"geometry", {}};
  int bad_add = 0, bad_bound = 0, bad_rot = 0;
  for (int i = 0; i < 500; ++i) {
    const Rect S = random_rect(rng, 1.0), T = random_rect(rng, 1.0);
    const RotatedRect RT{T, A(rng)};
    const double whole = intersect_area(S, RT);
    double parts = 0.0;
    for (int q = 0; q < 4; ++q) parts += intersect_area(S.quadrant(q), RT);
    if (std::abs(whole - parts) > 1e-12 * std::max(1.0, whole)) ++bad_add;
    if (whole > std::min(S.area(), T.area()) * (1 + 1e-12)) ++bad_bound;
    if (std::abs(RT.polygon().area() - T.area()) > 1e-12 * T.area()) ++bad_rot;
  }
  r.cases.push_back({"quadrant additivity", bad_add == 0, fmt(bad_add, " failures in 500")});
  r.cases.push_back({"area bound", bad_bound == 0, fmt(bad_bound, " failures in 500")});
  r.cases.push_back({"rotation preserves area", bad_rot == 0, fmt(bad_rot, " failures in 500")});
  const auto st = segments_and_tops(RotatedRect{Rect(0, 0, 1, 2), 0.3});
  r.cases.push_back({"segments and tops", st.segments.size() == 6 && st.tops.size() == 9,
                     fmt(st.segments.size(), " segments, ", st.tops.size(), " tops")});
  return r;
}

SuiteReport prop1_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> A(0.0, 2 * M_PI);
  SuiteReport r{"prop1", {}};
  int bad = 0, mc_bad = 0;
  for (int i = 0; i < 2000; ++i) {
    const WaveletPair pr(random_rect(rng, 1.0), random_rect(rng, 1.0), A(rng));
    const double ip = inner_product(pr);
    if (std::abs(ip) > prop1_bound(pr) * (1 + 1e-9) + 1e-14) ++bad;
    if (i < 100) {
      const auto [m, se] = inner_product_mc(pr.S, pr.T, pr.theta, 20000, rng);
      if (std::abs(m - ip) > 3 * se + 1e-12) ++mc_bad;
    }
  }
  r.cases.push_back({"dominance", bad == 0, fmt(bad, " violations in 2000")});
  // 3σ: about 0.3 expected misses in 100 pairs; allow a few
  r.cases.push_back({"monte carlo agreement", mc_bad <= 3, fmt(mc_bad, " outside 3 sigma in 100")});
  return r;
}

SuiteReport counting_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SuiteReport r{"counting", {}};
  int brute = 0, printed = 0, rig = 0, sparse10 = 0;
  for (int it = 0; it < 100; ++it) {
    const auto c = sample_config(rng, false, 256);
    const auto Ks = sub_rectangles(c.K_max, c.k1, c.k2);
    int nv = 0, nh = 0;
    for (size_t i = 0; i < Ks.size(); i += std::max<size_t>(1, Ks.size() / 8)) {
      const auto s = count_segments(c, Ks[i]);
      const auto b = count_segments_bruteforce(c, Ks[i]);
      if (s.Nv != b.Nv || s.Nh != b.Nh || s.tops != b.tops) ++brute;
      if (is_sparse(c) && s.Nv + s.Nh > 10) ++sparse10;
      nv = std::max(nv, s.Nv);
      nh = std::max(nh, s.Nh);
    }
    if (nv > nv_bound_printed(c) || nh > nh_bound_printed(c)) ++printed;
    if (nv > nv_bound_rigorous(c) || nh > nh_bound_rigorous(c)) ++rig;
  }
  r.cases.push_back({"bruteforce recount", brute == 0, fmt(brute, " mismatches")});
  r.cases.push_back({"corrected segment bounds", rig == 0, fmt(rig, " violations in 100")});
  r.cases.push_back({"sparse N^v + N^h <= 10", sparse10 == 0, fmt(sparse10, " violations")});
  r.cases.push_back({"printed segment bounds", printed == 0, fmt(printed, " violations in 100")});
  return r;
}

SuiteReport journe_suite(std::uint64_t seed) {
  SuiteReport r{"journe", {}};
  const auto st = journe_stats(10, {1.0 / 16, 1.0 / 64}, seed);
  r.cases.push_back({"level bound 2^{-2l} <= 8 eps", st.level_violations == 0,
                     fmt(st.level_violations, " violations in ", st.runs, " runs")});
  r.cases.push_back({"fitted constants finite", st.C_sum < 1e3 && st.C_first < 1e3 && st.C_second < 1e3,
                     fmt("C=", st.C_sum, " first=", st.C_first, " second=", st.C_second)});
  return r;
}

SuiteReport gamma_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SuiteReport r{"gamma", {}};
  int over = 0, order = 0, pc = 0;
  for (int it = 0; it < 50; ++it) {
    const auto c = sample_config(rng, false, 256);
    const auto g = gamma_exact(c);
    const auto b = gamma_bound(c, &g);
    if (g.total > b.bound * (1 + 1e-9) + 1e-20 * c.K_max.area()) ++over;
    const double sh = gamma_exact_shuffled(c, seed + it);
    if (std::abs(sh - g.total) > 1e-12 * std::max(g.total, 1e-300)) ++order;
  }
  for (int it = 0; it < 50; ++it) {
    const auto c = sample_perfect_cancellation(rng);
    const auto g = gamma_exact(c);
    if (g.total > 1e-20 * c.K_max.area()) ++pc;
  }
  r.cases.push_back({"exact <= bound", over == 0, fmt(over, " violations in 50")});
  r.cases.push_back({"order independence", order == 0, fmt(order, " mismatches")});
  r.cases.push_back({"perfect cancellation", pc == 0, fmt(pc, " nonzero in 50")});
  return r;
}

SuiteReport regularity_suite(std::uint64_t) {
  SuiteReport r{"regularity", {}};
  const auto ce = counterexample2({4, 8, 16, 64}, M_PI / 4);
  r.cases.push_back({"W^{1,p} uniform bound", ce.pass_a, fmt("C1=", ce.C1)});
  const Rect W(0, 0, 1, 1);
  const auto b = bump(0.5, 0.3);
  const ClosedExpr F([b](double x, double y) { return b->value(x) * b->value(y); });
  const auto G = GridSamples::sample_points(F, W, 64, 64);
  const auto s0 = sobolev_norm(G, 0.0, 4.0);
  r.cases.push_back({"s = 0 is the L^p norm", std::abs(s0.spectral - G.lp_norm(4.0)) < 1e-9 * G.lp_norm(4.0),
                     fmt(s0.spectral, " vs ", G.lp_norm(4.0))});
  // band-limited field with zero mean in x
  GridSamples H(W, 64, 64);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) {
      const Point p = H.cell_center(i, j);
      H.at(i, j) = std::sin(2 * M_PI * 3 * p.x) * std::cos(2 * M_PI * 2 * p.y) + std::cos(2 * M_PI * 5 * p.x);
    }
  const auto HH = directional_hilbert(directional_hilbert(H, {1, 0}), {1, 0});
  double e = 0.0;
  for (size_t k = 0; k < HH.data().size(); ++k) e = std::max(e, std::abs(HH.data()[k] + H.data()[k]));
  r.cases.push_back({"H_e1 squared is -Id", e <= 1e-8, fmt("max error ", e)});
  GridSamples one(W, 64, 64, std::vector<double>(64 * 64, 1.0));
  const auto T = rough_operator(one, [](double t) { return std::cos(t) + 0.5 * std::sin(3 * t); });
  double m = 0.0;
  for (double v : T.data()) m = std::max(m, std::abs(v));
  r.cases.push_back({"T_Omega annihilates constants", m <= 1e-10, fmt("max ", m)});
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const SuiteCase& c) { return c.passed; });
}

std::string SuiteReport::junit() const {
  const auto failures = std::count_if(cases.begin(), cases.end(), [](const SuiteCase& c) { return !c.passed; });
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<testsuite name=\"" << xml_escape(suite) << "\" tests=\"" << cases.size() << "\" failures=\""
     << failures << "\">\n";
  for (const auto& c : cases) {
    os << "  <testcase classname=\"" << xml_escape(suite) << "\" name=\"" << xml_escape(c.name) << "\"";
    if (c.passed) {
      os << ">\n    <system-out>" << xml_escape(c.detail) << "</system-out>\n  </testcase>\n";
    } else {
      os << ">\n    <failure message=\"" << xml_escape(c.detail) << "\"/>\n  </testcase>\n";
    }
  }
  os << "</testsuite>\n";
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"geometry", "prop1", "counting", "journe", "gamma", "regularity"};
  return n;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "geometry") return geometry_suite(seed);
  if (name == "prop1") return prop1_suite(seed);
  if (name == "counting") return counting_suite(seed);
  if (name == "journe") return journe_suite(seed);
  if (name == "gamma") return gamma_suite(seed);
  if (name == "regularity") return regularity_suite(seed);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace rbmo
