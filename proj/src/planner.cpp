#include "ovp/planner.hpp"

#include <algorithm>
#include <cmath>

namespace ovp {

void PlannerConfig::validate() const {
  if (!(t_h > 0)) throw ValidationError("planner t_h must be positive");
  if (!(rotation_step > 0 && rotation_step <= kPi / 4)) throw ValidationError("rotation_step must be in (0, pi/4]");
  if (!(neighbor_radius > 0)) throw ValidationError("neighbor_radius must be positive");
  if (!(neighbor_angle > 0 && neighbor_angle <= kPi / 2)) throw ValidationError("neighbor_angle must be in (0, pi/2]");
  if (max_substitution_rounds < 0) throw ValidationError("max_substitution_rounds must be >= 0");
}

std::string to_string(AuditEntry::Kind k) {
  switch (k) {
    case AuditEntry::Kind::remove: return "remove";
    case AuditEntry::Kind::rollback: return "rollback";
    case AuditEntry::Kind::substitute: return "substitute";
  }
  return "remove";
}

std::vector<ViewPoint> initial_viewpoints(std::span<const SurfaceSample> samples, const CameraModel& camera,
                                          const SafeZone& zone, const PlannerConfig& cfg) {
  cfg.validate();
  const Vec3 up = Vec3::UnitZ();
  const double d = camera.view_distance;
  std::vector<ViewPoint> views;
  views.reserve(samples.size());
  for (const auto& s : samples) {
    ViewPoint v;
    v.id = static_cast<std::uint32_t>(views.size());
    v.position = s.position + d * s.normal;
    v.direction = -s.normal;
    if (!zone.is_free(v.position)) {
      v.state = ViewState::dropped;
      Vec3 axis = s.normal.cross(up);
      const double to_up = angle_between(s.normal, up);
      if (axis.norm() < 1e-12) {
        // Facing straight up there is nowhere higher to go; facing straight
        // down any vertical plane works.
        axis = s.normal.z() > 0 ? Vec3(Vec3::Zero()) : Vec3(Vec3::UnitY());
      }
      if (axis.squaredNorm() > 0) {
        axis.normalize();
        const double limit = std::min(to_up, camera.max_incidence) + 1e-12;
        for (int k = 1; k * cfg.rotation_step <= limit; ++k) {
          const double phi = k * cfg.rotation_step;
          const Vec3 offset = Eigen::AngleAxisd(phi, axis) * s.normal;
          const Vec3 p = s.position + d * offset;
          if (zone.is_free(p)) {
            v.position = p;
            v.direction = -offset.normalized();
            v.state = ViewState::initial;
            break;
          }
        }
      }
    }
    views.push_back(v);
  }
  return views;
}

namespace {

class Optimizer {
 public:
  Optimizer(std::span<const ViewPoint> initial, std::span<const SurfaceSample> samples, const VisibilityMatrix& vis,
            const ReconWeights& weights, const PlannerConfig& cfg)
      : initial_(initial), vis_(vis), cfg_(cfg), ctx_{samples, initial, &vis, weights} {}

  PlanResult run() {
    const std::size_t nv = initial_.size(), ns = vis_.n_samples;
    kept_.assign(nv, 0);
    arrived_by_substitution_.assign(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) kept_[v] = initial_[v].state != ViewState::dropped;

    h_.resize(ns);
    feasible_.resize(ns);
    for (std::uint32_t s = 0; s < ns; ++s) {
      h_[s] = exact_h(s, kNone, kNone);
      feasible_[s] = h_[s] > cfg_.t_h;
    }

    reduce();
    substitute();

    PlanResult result;
    result.views.assign(initial_.begin(), initial_.end());
    for (std::uint32_t v = 0; v < nv; ++v) {
      auto& view = result.views[v];
      if (view.state == ViewState::dropped) {
        ++result.dropped_count;
        continue;
      }
      if (kept_[v]) {
        view.state = arrived_by_substitution_[v] ? ViewState::replaced : ViewState::kept;
        result.kept.push_back(v);
      } else {
        view.state = ViewState::initial;
      }
    }
    result.h.resize(ns);
    for (std::uint32_t s = 0; s < ns; ++s) {
      result.h[s] = sample_h(s, result.kept, ctx_);
      if (!feasible_[s]) result.infeasible_samples.push_back(s);
    }
    result.audit = std::move(audit_);
    result.initial_count = nv;
    for (const auto& e : result.audit) {
      if (e.kind == AuditEntry::Kind::remove) ++result.removed_count;
      if (e.kind == AuditEntry::Kind::rollback) ++result.rollback_count;
      if (e.kind == AuditEntry::Kind::substitute) ++result.substituted_count;
    }
    return result;
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  // Below this distance from t_h a decision is re-made with exact summation.
  static constexpr double kExactBand = 1e-9;

  // h over the current kept set with `out` removed and `in` added, summed in
  // the same pair order as sample_h.
  double exact_h(std::uint32_t s, std::uint32_t out, std::uint32_t in) const {
    std::vector<std::uint32_t> seen;
    for (auto u : vis_.rows[s]) {
      if (u == out) continue;
      if (kept_[u] || u == in) seen.push_back(u);
    }
    double h = 0.0;
    for (std::size_t i = 0; i < seen.size(); ++i) {
      for (std::size_t j = i + 1; j < seen.size(); ++j) h += ctx_.q(s, seen[i], seen[j]);
    }
    return h;
  }

  // Sum of q(s, v, u) over kept observers u of s other than v and `skip`.
  double contribution(std::uint32_t s, std::uint32_t v, std::uint32_t skip) const {
    double c = 0.0;
    for (auto u : vis_.rows[s]) {
      if (u == v || u == skip || !kept_[u]) continue;
      c += ctx_.q(s, v, u);
    }
    return c;
  }

  bool violates(std::uint32_t s, double& new_h, std::uint32_t out, std::uint32_t in) const {
    if (!feasible_[s]) return false;
    if (std::abs(new_h - cfg_.t_h) < kExactBand) new_h = exact_h(s, out, in);
    return !(new_h > cfg_.t_h);
  }

  double redundancy(std::uint32_t v) const {
    double r = kSeesNone;
    for (auto s : vis_.cols[v]) r = std::min(r, h_[s]);
    return r;
  }

  void reduce() {
    const std::size_t nv = initial_.size();
    std::vector<char> unremovable(nv, 0);
    std::vector<double> r(nv, -1.0);
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (kept_[v]) r[v] = redundancy(v);
    }
    std::vector<std::uint32_t> touched;
    std::vector<double> new_h;
    for (;;) {
      std::uint32_t best = kNone;
      for (std::uint32_t v = 0; v < nv; ++v) {
        if (!kept_[v] || unremovable[v]) continue;
        if (best == kNone || r[v] > r[best]) best = v;
      }
      if (best == kNone) break;

      const auto& col = vis_.cols[best];
      new_h.resize(col.size());
      bool ok = true;
      for (std::size_t k = 0; k < col.size() && ok; ++k) {
        const auto s = col[k];
        new_h[k] = h_[s] - contribution(s, best, kNone);
        if (violates(s, new_h[k], best, kNone)) ok = false;
      }
      if (!ok) {
        unremovable[best] = 1;
        audit_.push_back({AuditEntry::Kind::rollback, best, 0, r[best]});
        continue;
      }
      kept_[best] = 0;
      audit_.push_back({AuditEntry::Kind::remove, best, 0, r[best]});
      touched.clear();
      for (std::size_t k = 0; k < col.size(); ++k) {
        h_[col[k]] = new_h[k];
        for (auto u : vis_.rows[col[k]]) touched.push_back(u);
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (auto u : touched) {
        if (kept_[u] && !unremovable[u]) r[u] = redundancy(u);
      }
    }
  }

  // Union of the samples seen by a or c with the new h of each under a -> c.
  bool evaluate_swap(std::uint32_t a, std::uint32_t c, std::vector<std::uint32_t>& affected,
                     std::vector<double>& new_h, double& gain) const {
    affected.clear();
    const auto& ca = vis_.cols[a];
    const auto& cc = vis_.cols[c];
    std::set_union(ca.begin(), ca.end(), cc.begin(), cc.end(), std::back_inserter(affected));
    new_h.resize(affected.size());
    gain = 0.0;
    for (std::size_t k = 0; k < affected.size(); ++k) {
      const auto s = affected[k];
      double h = h_[s];
      if (std::binary_search(ca.begin(), ca.end(), s)) h -= contribution(s, a, kNone);
      if (std::binary_search(cc.begin(), cc.end(), s)) h += contribution(s, c, a);
      if (violates(s, h, a, c)) return false;
      new_h[k] = h;
      gain += h - h_[s];
    }
    return true;
  }

  void substitute() {
    const std::size_t nv = initial_.size();
    std::vector<std::uint32_t> affected, best_affected;
    std::vector<double> new_h, best_h;
    for (int round = 0; round < cfg_.max_substitution_rounds; ++round) {
      bool changed = false;
      std::vector<std::uint32_t> snapshot;
      for (std::uint32_t v = 0; v < nv; ++v) {
        if (kept_[v]) snapshot.push_back(v);
      }
      for (auto a : snapshot) {
        if (!kept_[a]) continue;
        const ViewPoint& va = initial_[a];
        std::uint32_t best = kNone;
        double best_gain = kMinGain;
        for (std::uint32_t c = 0; c < nv; ++c) {
          const ViewPoint& vc = initial_[c];
          if (kept_[c] || vc.state == ViewState::dropped) continue;
          if ((vc.position - va.position).norm() > cfg_.neighbor_radius) continue;
          if (angle_between(vc.direction, va.direction) > cfg_.neighbor_angle) continue;
          double gain = 0;
          if (!evaluate_swap(a, c, affected, new_h, gain)) continue;
          if (gain > best_gain) {
            best_gain = gain;
            best = c;
            best_affected = affected;
            best_h = new_h;
          }
        }
        if (best == kNone) continue;
        kept_[a] = 0;
        kept_[best] = 1;
        arrived_by_substitution_[best] = 1;
        for (std::size_t k = 0; k < best_affected.size(); ++k) h_[best_affected[k]] = best_h[k];
        audit_.push_back({AuditEntry::Kind::substitute, a, best, best_gain});
        changed = true;
      }
      if (!changed) break;
    }
  }

  static constexpr double kMinGain = 1e-12;

  std::span<const ViewPoint> initial_;
  const VisibilityMatrix& vis_;
  const PlannerConfig& cfg_;
  ReconContext ctx_;
  std::vector<char> kept_;
  std::vector<char> arrived_by_substitution_;
  std::vector<double> h_;
  std::vector<char> feasible_;
  std::vector<AuditEntry> audit_;
};

}  // namespace

PlanResult optimize(std::span<const ViewPoint> initial, std::span<const SurfaceSample> samples,
                    const VisibilityMatrix& vis, const ReconWeights& weights, const PlannerConfig& cfg) {
  cfg.validate();
  weights.validate();
  if (vis.n_views != initial.size() || vis.n_samples != samples.size() || vis.rows.size() != samples.size() ||
      vis.cols.size() != initial.size()) {
    throw ValidationError("visibility matrix is " + std::to_string(vis.n_samples) + "x" +
                          std::to_string(vis.n_views) + " but inputs are " + std::to_string(samples.size()) + "x" +
                          std::to_string(initial.size()));
  }
  for (std::size_t v = 0; v < initial.size(); ++v) {
    if (initial[v].id != v) throw ValidationError("viewpoint ids must be dense and ordered");
  }
  return Optimizer(initial, samples, vis, weights, cfg).run();
}

std::vector<std::uint32_t> replay_audit(std::span<const ViewPoint> initial, std::span<const AuditEntry> audit) {
  std::vector<char> kept(initial.size(), 0);
  for (std::size_t v = 0; v < initial.size(); ++v) kept[v] = initial[v].state != ViewState::dropped;
  for (const auto& e : audit) {
    if (e.kind == AuditEntry::Kind::remove) kept[e.view] = 0;
    if (e.kind == AuditEntry::Kind::substitute) {
      kept[e.view] = 0;
      kept[e.replacement] = 1;
    }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < kept.size(); ++v) {
    if (kept[v]) out.push_back(v);
  }
  return out;
}

}  // namespace ovp
