#include "ovp/recon.hpp"

#include <algorithm>
#include <cmath>

namespace ovp {

void ReconWeights::validate() const {
  if (!(k1 > 0 && k3 > 0)) throw ValidationError("recon weights need k1, k3 > 0");
  if (!(alpha1 > 0 && alpha1 < alpha3 && alpha3 < kPi)) {
    throw ValidationError("recon weights need 0 < alpha1 < alpha3 < pi");
  }
  if (!(d_max > 0)) throw ValidationError("recon weights need d_max > 0");
}

double ReconWeights::w1(double alpha) const { return 1.0 / (1.0 + std::exp(-k1 * (alpha - alpha1))); }

double ReconWeights::w2(double d) const { return std::max(0.0, 1.0 - d / d_max); }

double ReconWeights::w3(double alpha) const { return 1.0 - 1.0 / (1.0 + std::exp(-k3 * (alpha - alpha3))); }

PairGeometry pair_geometry(const SurfaceSample& s, const Vec3& vi, const Vec3& vj) {
  const Vec3 ri = vi - s.position, rj = vj - s.position;
  PairGeometry g;
  g.alpha = angle_between(ri, rj);
  g.d_m = std::max(ri.norm(), rj.norm());
  g.theta_m = std::max(angle_between(s.normal, ri), angle_between(s.normal, rj));
  return g;
}

double pair_q(const PairGeometry& g, const ReconWeights& w) {
  const double q = w.w1(g.alpha) * w.w2(g.d_m) * w.w3(g.alpha) * std::max(std::cos(g.theta_m), 0.0);
  return std::clamp(q, 0.0, 1.0);
}

double sample_h(std::uint32_t sample, std::span<const std::uint32_t> view_set, const ReconContext& ctx) {
  // Observers of this sample inside the set, ascending.
  const auto& row = ctx.vis->rows[sample];
  std::vector<std::uint32_t> seen;
  std::set_intersection(row.begin(), row.end(), view_set.begin(), view_set.end(), std::back_inserter(seen));
  double h = 0.0;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t j = i + 1; j < seen.size(); ++j) h += ctx.q(sample, seen[i], seen[j]);
  }
  return h;
}

double view_redundancy(std::uint32_t view, std::span<const std::uint32_t> view_set, const ReconContext& ctx) {
  double r = kSeesNone;
  for (auto s : ctx.vis->cols[view]) r = std::min(r, sample_h(s, view_set, ctx));
  return r;
}

int level_of(double h, bool observed, double t_h) {
  if (!(t_h > 0)) throw ValidationError("t_h must be positive");
  if (!observed) return 6;
  if (h >= 4 * t_h) return 1;
  if (h >= 3 * t_h) return 2;
  if (h >= 2 * t_h) return 3;
  if (h >= t_h) return 4;
  return 5;
}

ReconReport quantize_levels(std::span<const double> h, std::span<const std::size_t> observer_count, double t_h) {
  if (!(t_h > 0)) throw ValidationError("t_h must be positive");
  if (h.size() != observer_count.size()) throw ValidationError("h and observer counts differ in length");
  ReconReport report;
  report.h.assign(h.begin(), h.end());
  report.level.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    report.level[i] = level_of(h[i], observer_count[i] > 0, t_h);
    ++report.counts[report.level[i] - 1];
  }
  for (int l = 0; l < kLevelCount; ++l) {
    report.percent[l] = h.empty() ? 0.0 : 100.0 * static_cast<double>(report.counts[l]) / h.size();
  }
  return report;
}

ReconReport evaluate_views(std::span<const std::uint32_t> view_set, const ReconContext& ctx, double t_h,
                           unsigned threads) {
  const std::size_t n = ctx.samples.size();
  std::vector<double> h(n);
  std::vector<std::size_t> observers(n);
  parallel_for(n, threads, [&](std::size_t s) {
    const auto id = static_cast<std::uint32_t>(s);
    h[s] = sample_h(id, view_set, ctx);
    const auto& row = ctx.vis->rows[s];
    std::size_t c = 0;
    for (auto v : row) c += std::binary_search(view_set.begin(), view_set.end(), v) ? 1 : 0;
    observers[s] = c;
  });
  ReconReport report = quantize_levels(h, observers, t_h);
  report.redundancy.reserve(view_set.size());
  for (auto v : view_set) {
    double r = kSeesNone;
    for (auto s : ctx.vis->cols[v]) r = std::min(r, h[s]);
    report.redundancy.push_back(r);
  }
  return report;
}

Rgb level_color(int level) {
  switch (level) {
    case 1: return {0, 0, 255};
    case 2: return {0, 255, 255};
    case 3: return {0, 255, 0};
    case 4: return {255, 255, 0};
    case 5: return {255, 0, 0};
    default: return {128, 128, 128};
  }
}

}  // namespace ovp
