#include "entcheck/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entcheck {

namespace {

// Conditional outcome distribution of one party given the outcomes of all
// earlier parties. Children are created on first visit.
struct Node {
  std::vector<double> cumulative;
  std::vector<CVector> pure_branches;
  std::vector<CMatrix> mixed_branches;
  std::vector<std::unique_ptr<Node>> children;
};

class OutcomeTree {
 public:
  OutcomeTree(StateView state, const std::vector<Observable>& observables)
      : state_(state), shape_(state.shape()) {
    if (observables.size() != shape_.parties()) {
      throw DimensionError("sampling needs exactly one observable per party");
    }
    for (std::size_t j = 0; j < observables.size(); ++j) {
      if (observables[j].party() != j) {
        throw DimensionError("observables must be listed in party order");
      }
      spectra_.push_back(spectral_decomposition(observables[j]));
    }
    if (state.is_pure()) {
      root_ = build(0, &state.pure().amplitudes(), nullptr);
    } else {
      root_ = build(0, nullptr, &state.mixed().matrix());
    }
  }

  template <class Rng>
  void draw(Rng& rng, Outcome& out) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Node* node = root_.get();
    for (std::size_t j = 0; j < spectra_.size(); ++j) {
      const double u = unit(rng);
      const auto it = std::upper_bound(node->cumulative.begin(), node->cumulative.end(), u);
      auto k = static_cast<std::size_t>(it - node->cumulative.begin());
      k = std::min(k, node->cumulative.size() - 1);
      out[j] = spectra_[j][k].eigenvalue;
      if (j + 1 == spectra_.size()) break;
      auto& child = node->children[k];
      if (!child) {
        child = node->pure_branches.empty()
                    ? build(j + 1, nullptr, &node->mixed_branches[k])
                    : build(j + 1, &node->pure_branches[k], nullptr);
      }
      node = child.get();
    }
  }

  std::size_t parties() const { return spectra_.size(); }

 private:
  std::unique_ptr<Node> build(std::size_t party, const CVector* pure, const CMatrix* mixed) {
    auto node = std::make_unique<Node>();
    const auto& spectrum = spectra_[party];
    const bool keep_branches = party + 1 < spectra_.size();
    std::vector<double> weights;
    for (const auto& comp : spectrum) {
      if (pure) {
        CVector branch = apply_local(comp.projector, party, shape_, *pure);
        const double w = branch.squaredNorm();
        weights.push_back(w);
        if (keep_branches) {
          if (w > 0.0) branch /= std::sqrt(w);
          node->pure_branches.push_back(std::move(branch));
        }
      } else {
        CMatrix left = apply_local_left(comp.projector, party, shape_, *mixed);
        CMatrix branch = apply_local_right(left, comp.projector, party, shape_);
        const double w = std::max(0.0, branch.trace().real());
        weights.push_back(w);
        if (keep_branches) {
          if (w > 0.0) branch /= w;
          node->mixed_branches.push_back(std::move(branch));
        }
      }
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double running = 0.0;
    for (double w : weights) {
      running += w / total;
      node->cumulative.push_back(running);
    }
    // Pin the last reachable outcome to 1 so rounding never selects a
    // zero-weight trailing branch.
    for (std::size_t i = weights.size(); i-- > 0;) {
      node->cumulative[i] = 1.0;
      if (weights[i] > 0.0) break;
    }
    node->children.resize(spectrum.size());
    return node;
  }

  StateView state_;
  SpaceShape shape_;
  std::vector<std::vector<SpectralComponent>> spectra_;
  std::unique_ptr<Node> root_;
};

}  // namespace

std::vector<Outcome> Sampler::outcomes(StateView state,
                                       const std::vector<Observable>& observables,
                                       std::size_t shots) {
  if (shots == 0) throw DimensionError("shot count must be positive");
  OutcomeTree tree(state, observables);
  std::vector<Outcome> out(shots, Outcome(tree.parties()));
  for (auto& o : out) tree.draw(rng_, o);
  return out;
}

SampleEstimate Sampler::correlation(StateView state, const SettingsGrid& grid,
                                    const SettingChoice& choice, std::size_t shots) {
  if (shots == 0) throw DimensionError("shot count must be positive");
  OutcomeTree tree(state, grid.select(choice));
  Outcome o(tree.parties());
  // Welford running mean / variance of the per-shot product.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < shots; ++s) {
    tree.draw(rng_, o);
    const double x = std::accumulate(o.begin(), o.end(), 1.0, std::multiplies<>());
    const double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  const double var = shots > 1 ? m2 / static_cast<double>(shots - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(shots)), shots};
}

SampleEstimate sample_correlation(StateView state, const SettingsGrid& grid,
                                  const SettingChoice& choice, const ShotPlan& plan) {
  Sampler sampler(plan.seed);
  return sampler.correlation(state, grid, choice, plan.shots_per_setting);
}

EqualityInstance EqualityInstance::bipartite(int i, int j, int k, int l) {
  // a = (i,j), b = (k,l); exchanging party 1 gives (i,l) and (k,j).
  return {{i, j}, {k, l}, SwapPermutation{{1}}};
}

SampledEqualityReport sampled_equality(StateView state, const SettingsGrid& grid,
                                       const EqualityInstance& instance, const ShotPlan& plan,
                                       double k, EqualityTolerance tol) {
  const SettingChoice a2 = swap_settings(instance.choice_a, instance.choice_b, instance.swap);
  const SettingChoice b2 = swap_settings(instance.choice_b, instance.choice_a, instance.swap);
  const std::vector<SettingChoice> needed{instance.choice_a, instance.choice_b, a2, b2};

  Sampler sampler(plan.seed);
  std::vector<std::pair<SettingChoice, SampleEstimate>> estimates;
  std::vector<std::size_t> slot;
  for (const auto& c : needed) {
    auto it = std::find_if(estimates.begin(), estimates.end(),
                           [&](const auto& e) { return e.first == c; });
    if (it == estimates.end()) {
      estimates.emplace_back(c, sampler.correlation(state, grid, c, plan.shots_per_setting));
      it = std::prev(estimates.end());
    }
    slot.push_back(static_cast<std::size_t>(it - estimates.begin()));
  }

  const auto value = [&](std::size_t i) { return estimates[slot[i]].second.estimate; };
  const double lhs = value(0) * value(1);
  const double rhs = value(2) * value(3);

  // d(lhs)/dE and d(rhs)/dE per distinct estimate.
  std::vector<double> dl(estimates.size(), 0.0), dr(estimates.size(), 0.0);
  dl[slot[0]] += value(1);
  dl[slot[1]] += value(0);
  dr[slot[2]] += value(3);
  dr[slot[3]] += value(2);

  auto propagate = [&](auto&& grad) {
    double v = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const double s = estimates[i].second.stderr_;
      v += grad(i) * grad(i) * s * s;
    }
    return std::sqrt(v);
  };

  SampledEqualityReport out;
  out.report = make_equality_report(lhs, rhs, tol);
  out.k = k;
  out.lhs_sigma = propagate([&](std::size_t i) { return dl[i]; });
  out.rhs_sigma = propagate([&](std::size_t i) { return dr[i]; });
  out.residual_sigma = propagate([&](std::size_t i) { return dl[i] - dr[i]; });
  out.residual_ci_low = std::max(0.0, out.report.residual - k * out.residual_sigma);
  out.residual_ci_high = out.report.residual + k * out.residual_sigma;
  if (out.report.ratio) {
    out.ratio_sigma =
        propagate([&](std::size_t i) { return dr[i] / lhs - rhs * dl[i] / (lhs * lhs); });
  }
  out.report.violated = out.report.residual > std::max(k * out.residual_sigma, tol.violation);
  out.estimates = std::move(estimates);
  return out;
}

}  // namespace entcheck
