#include "entcheck/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

namespace entcheck {

namespace {

constexpr double kPi = std::numbers::pi;

using AnyState = std::variant<StateVector, DensityMatrix>;

StateView view(const AnyState& s) {
  return std::visit([](const auto& x) { return StateView(x); }, s);
}

struct Prepared {
  AnyState state;
  SettingsGrid grid;
  EqualityInstance instance;
  bool is_cfrd = false;
};

void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw UsageError(std::string(name) + " must lie in [0,1]");
}

// Depolarize and/or apply equal loss to every mode.
AnyState apply_noise(const StateVector& pure, double p, double eta, bool allow_loss) {
  if (p == 1.0 && eta == 1.0) return pure;
  if (eta != 1.0 && !allow_loss) throw UsageError("--eta applies only to Fock-mode systems");
  DensityMatrix rho = depolarize_mix(pure, p);
  if (eta != 1.0) {
    for (std::size_t m = 0; m < rho.shape().parties(); ++m) {
      rho = loss_channel(rho, Efficiency(eta), m);
    }
  }
  return rho;
}

std::size_t fock_cutoff(const RunConfig& c, std::size_t fallback) {
  const std::size_t n_max = c.cutoff.value_or(fallback);
  if (n_max < 1) throw UsageError("--cutoff must be >= 1 for this system");
  return n_max;
}

EqualityInstance split_instance(std::size_t n, std::size_t split) {
  return {SettingChoice(n, 1), SettingChoice(n, 2), SwapPermutation::first(split)};
}

Prepared prepare(const RunConfig& c) {
  check_unit_interval(c.p, "--p");
  check_unit_interval(c.eta, "--eta");
  const TwoQubitParams tp{c.theta, c.phi};
  const auto pair_instance = EqualityInstance::bipartite(1, 1, 2, 2);

  if (c.system == "qubit") {
    return {apply_noise(two_qubit_state(tp), c.p, c.eta, false), qubit_xy_grid(), pair_instance};
  }
  if (c.system == "product") {
    return {apply_noise(random_product_pure(SpaceShape({2, 2}), c.seed), c.p, c.eta, false),
            qubit_xy_grid(), pair_instance};
  }
  if (c.system == "photon") {
    const FockCutoff cut{fock_cutoff(c, 1)};
    return {apply_noise(single_photon_state(tp, cut), c.p, c.eta, true),
            quadrature_grid(split_phases(2, 1), cut), pair_instance};
  }
  if (c.system == "tmss") {
    const SqueezeParam r(c.r);
    const FockCutoff cut = c.cutoff ? FockCutoff{*c.cutoff} : tmss_default_cutoff(r);
    return {apply_noise(tmss(r, cut).state, c.p, c.eta, true),
            quadrature_grid(split_phases(2, 1), cut), pair_instance};
  }
  if (c.system == "multimode" || c.system == "cfrd") {
    if (c.n < 1) throw UsageError("--n must be >= 1");
    if (c.split_r > c.n) throw UsageError("--split-r must not exceed --n");
    const FockCutoff cut{fock_cutoff(c, 1)};
    const auto phases = split_phases(c.n, c.split_r);
    AnyState state = apply_noise(multimode_noon_like(tp, c.n, c.split_r, cut), c.p, c.eta, true);
    if (c.system == "cfrd") {
      return {std::move(state), pseudospin_grid(phases, cut), split_instance(c.n, c.split_r),
              true};
    }
    return {std::move(state), quadrature_grid(phases, cut), split_instance(c.n, c.split_r)};
  }
  throw UsageError("unknown system '" + c.system +
                   "' (expected qubit, product, photon, tmss, multimode or cfrd)");
}

EqualityReport evaluate(const Prepared& prep) {
  const StateView s = view(prep.state);
  if (prep.is_cfrd) return cfrd(s, prep.grid);
  return multipartite_equality(s, prep.grid, prep.instance.choice_a, prep.instance.choice_b,
                               prep.instance.swap);
}

class ClaimSink {
 public:
  void add(std::string id, std::string anchor, double expected, double computed,
           double tolerance) {
    const double diff = std::abs(expected - computed);
    claims_.push_back({std::move(id), std::move(anchor), expected, computed, diff, tolerance,
                       diff <= tolerance});
  }
  void flag(std::string id, std::string anchor, bool expected, bool computed) {
    add(std::move(id), std::move(anchor), expected ? 1.0 : 0.0, computed ? 1.0 : 0.0, 0.0);
  }
  std::vector<Claim> take() { return std::move(claims_); }

 private:
  std::vector<Claim> claims_;
};

std::string fmt(double v) { return format_double(v); }

std::string angle_tag(double theta, double phi) {
  return "theta=" + fmt(theta) + ",phi=" + fmt(phi);
}

double sq(double x) { return x * x; }

void two_party_claims(ClaimSink& sink, std::size_t cutoff) {
  const std::vector<double> thetas{kPi / 8, kPi / 6, kPi / 4};
  const std::vector<double> phis{0.0, kPi / 4, kPi / 2};
  const SettingsGrid qubits = qubit_xy_grid();
  for (double th : thetas) {
    for (double ph : phis) {
      const auto psi = two_qubit_state({th, ph});
      const auto rep = bipartite_equality(psi, qubits, 1, 1, 2, 2);
      const double s2 = sq(std::sin(2 * th));
      sink.add("two-qubit.E11E22[" + angle_tag(th, ph) + "]",
               "E11*E22 = -sin^2(2theta) cos^2(phi), sigma_x/sigma_y settings", -s2 * sq(std::cos(ph)),
               rep.lhs, 1e-10);
      sink.add("two-qubit.E12E21[" + angle_tag(th, ph) + "]",
               "E12*E21 = sin^2(2theta) sin^2(phi), sigma_x/sigma_y settings", s2 * sq(std::sin(ph)),
               rep.rhs, 1e-10);
    }
  }

  for (std::size_t cut : {std::size_t{1}, std::size_t{4}, cutoff}) {
    const SettingsGrid quads = quadrature_grid(split_phases(2, 1), FockCutoff{cut});
    for (double th : thetas) {
      for (double ph : phis) {
        const auto psi = single_photon_state({th, ph}, FockCutoff{cut});
        const auto rep = bipartite_equality(psi, quads, 1, 1, 2, 2);
        const double s2 = sq(std::sin(2 * th));
        const std::string tag = "[" + angle_tag(th, ph) + ",cutoff=" + std::to_string(cut) + "]";
        sink.add("single-photon.E11E22" + tag,
                 "quadratures on sin(t)|01>+cos(t)e^{i phi}|10>: E11*E22 = -sin^2(2t)cos^2(phi)",
                 -s2 * sq(std::cos(ph)), rep.lhs, 1e-10);
        sink.add("single-photon.E12E21" + tag,
                 "quadratures on sin(t)|01>+cos(t)e^{i phi}|10>: E12*E21 = sin^2(2t)sin^2(phi)",
                 s2 * sq(std::sin(ph)), rep.rhs, 1e-10);
      }
    }
  }

  // Two-term separable mixture (|00><00| + |++><++|)/2 with settings (σz, σx).
  {
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CVector zero(2);
    zero << 1.0, 0.0;
    const auto rho = convex_mixture({{0.5, outer(product_state({zero, zero}))},
                                     {0.5, outer(product_state({plus, plus}))}});
    const SettingsGrid zx({{Observable(0, pauli_z()), Observable(0, pauli_x())},
                           {Observable(1, pauli_z()), Observable(1, pauli_x())}});
    const auto rep = bipartite_equality(rho, zx, 1, 1, 2, 2);
    const std::string anchor = "separable mixtures need not satisfy E_ij E_kl = E_il E_kj";
    sink.add("mixed-separable.lhs", anchor, 0.25, rep.lhs, 1e-12);
    sink.add("mixed-separable.rhs", anchor, 0.0, rep.rhs, 1e-12);
    sink.flag("mixed-separable.violated", anchor, true, rep.violated);
  }
}

void tmss_claims(ClaimSink& sink) {
  for (double r : {0.02, 0.1, 0.5, 1.0}) {
    const SqueezeParam sp(r);
    const auto rep = tmss_equality(sp, tmss_default_cutoff(sp));
    const std::string tag = "[r=" + fmt(r) + "]";
    const std::string anchor = "TMSS quadratures: E11*E22 = sinh^2(2r) (series form), E12*E21 = 0";
    sink.add("tmss.E11E22" + tag, anchor, rep.closed_form_lhs, rep.equality.lhs, 1e-8);
    sink.add("tmss.series-form" + tag, anchor, rep.closed_form_lhs, rep.series_lhs, 1e-8);
    sink.add("tmss.series-denominator" + tag, anchor, 1.0, rep.series_denominator, 1e-10);
    sink.add("tmss.E12E21" + tag, anchor, 0.0, rep.equality.rhs, 1e-10);
    sink.flag("tmss.violated" + tag, "equality fails for every r > 0", true, rep.equality.violated);
  }
  {
    const auto rep = tmss_equality(SqueezeParam(0.0), FockCutoff{0});
    sink.flag("tmss.violated[r=0]", "vacuum is a product state", false, rep.equality.violated);
  }
  // p^2 overall factor for the depolarized TMSS.
  {
    const SqueezeParam sp(0.5);
    const double p = 0.5;
    const auto t = tmss(sp, tmss_default_cutoff(sp));
    const auto rho = depolarize_mix(t.state, p);
    const auto grid = quadrature_grid(split_phases(2, 1), t.cutoff);
    const auto rep = bipartite_equality(rho, grid, 1, 1, 2, 2);
    sink.add("tmss-depolarized.E11E22[r=0.5,p=0.5]",
             "p|TMSS><TMSS| + (1-p)I/trI: both sides scale by p^2", sq(p) * sq(std::sinh(1.0)),
             rep.lhs, 1e-8);
    sink.add("tmss-depolarized.E12E21[r=0.5,p=0.5]",
             "p|TMSS><TMSS| + (1-p)I/trI: both sides scale by p^2", 0.0, rep.rhs, 1e-10);
  }
}

void noise_claims(ClaimSink& sink, std::size_t cutoff) {
  const double th = kPi / 6;
  const double ph = kPi / 5;
  const double s2 = sq(std::sin(2 * th));
  const FockCutoff cut{cutoff};
  const auto psi = single_photon_state({th, ph}, cut);
  const auto grid = quadrature_grid(split_phases(2, 1), cut);
  const auto clean = bipartite_equality(psi, grid, 1, 1, 2, 2);

  for (double p : {0.2, 0.5, 0.9}) {
    const auto rep = bipartite_equality(depolarize_mix(psi, p), grid, 1, 1, 2, 2);
    const std::string tag = "[p=" + fmt(p) + "]";
    const std::string anchor = "white noise: E11*E22 = -p^2 sin^2(2t)cos^2(phi), E12*E21 = p^2 sin^2(2t)sin^2(phi)";
    sink.add("depolarized.E11E22" + tag, anchor, -sq(p) * s2 * sq(std::cos(ph)), rep.lhs, 1e-10);
    sink.add("depolarized.E12E21" + tag, anchor, sq(p) * s2 * sq(std::sin(ph)), rep.rhs, 1e-10);
    sink.add("depolarized.ratio" + tag, "ratio r.h.s./l.h.s. unaffected by depolarizing noise",
             *clean.ratio, rep.ratio.value_or(std::numeric_limits<double>::quiet_NaN()), 1e-10);
  }

  for (double eta : {0.3, 0.7}) {
    DensityMatrix rho = outer(psi);
    rho = loss_channel(rho, Efficiency(eta), 0);
    rho = loss_channel(rho, Efficiency(eta), 1);
    const auto rep = bipartite_equality(rho, grid, 1, 1, 2, 2);
    const std::string tag = "[eta=" + fmt(eta) + "]";
    const std::string anchor = "detector loss: E11*E22 = -eta^2 sin^2(2t)cos^2(phi), E12*E21 = eta^2 sin^2(2t)sin^2(phi)";
    sink.add("loss.E11E22" + tag, anchor, -sq(eta) * s2 * sq(std::cos(ph)), rep.lhs, 1e-8);
    sink.add("loss.E12E21" + tag, anchor, sq(eta) * s2 * sq(std::sin(ph)), rep.rhs, 1e-8);
    sink.flag("loss.verdict" + tag, "verdict insensitive to detector efficiency", clean.violated,
              rep.violated);
  }
}

void multipartite_claims(ClaimSink& sink, std::size_t cutoff) {
  const FockCutoff cut{cutoff};
  const double th = kPi / 6;
  const double ph = kPi / 5;
  const double s2 = sq(std::sin(2 * th));
  for (std::size_t n : {2, 3, 4}) {
    for (std::size_t r = 1; r < n; ++r) {
      const auto psi = multimode_noon_like({th, ph}, n, r, cut);
      const auto grid = quadrature_grid(split_phases(n, r), cut);
      const auto rep = multipartite_equality(psi, grid, SettingChoice(n, 1), SettingChoice(n, 2),
                                             SwapPermutation::first(r));
      const double nd = static_cast<double>(n);
      const double rd = static_cast<double>(r);
      const std::string tag = "[n=" + std::to_string(n) + ",r=" + std::to_string(r) + "]";
      sink.add("multimode.lhs" + tag, "E_{1..1}E_{2..2} = sin^2(2t) cos(phi) cos(phi - n pi/2)",
               s2 * std::cos(ph) * std::cos(ph - nd * kPi / 2), rep.lhs, 1e-9);
      sink.add("multimode.rhs" + tag,
               "swapped pair = sin^2(2t) cos(phi - (n-r)pi/2) cos(phi - r pi/2)",
               s2 * std::cos(ph - (nd - rd) * kPi / 2) * std::cos(ph - rd * kPi / 2), rep.rhs,
               1e-9);
    }
  }
  const double dist = (multimode_noon_like({th, ph}, 2, 1, cut).amplitudes() -
                       single_photon_state({th, ph}, cut).amplitudes())
                          .norm();
  sink.add("multimode.n2-r1-is-single-photon", "n = 2, r = 1 recovers the two-mode state", 0.0,
           dist, 1e-15);
}

void pseudospin_claims(ClaimSink& sink, std::size_t cutoff) {
  // Pseudospin identities need an even local dimension.
  const FockCutoff cut{cutoff % 2 == 1 ? cutoff : cutoff + 1};
  const CMatrix sm = pseudospin_minus(cut);
  const CMatrix sp = pseudospin_plus(cut);
  const Complex i{0.0, 1.0};
  const auto m1 = pseudospin_setting(1, PhaseAngle(0.0), cut, 0).matrix();
  const auto m2p = pseudospin_setting(2, PhaseAngle(kPi / 2), cut, 0).matrix();
  const auto m2m = pseudospin_setting(2, PhaseAngle(-kPi / 2), cut, 0).matrix();
  const std::string tag = "[cutoff=" + std::to_string(cut.n_max) + "]";
  sink.add("pseudospin.lowering" + tag, "phi = +pi/2: M^1 + i M^2 = 2 s_-", 0.0,
           (m1 + i * m2p - 2.0 * sm).norm(), 1e-12);
  sink.add("pseudospin.raising" + tag, "phi = -pi/2: M^1 + i M^2 = 2 s_+", 0.0,
           (m1 + i * m2m - 2.0 * sp).norm(), 1e-12);
  sink.add("pseudospin.second-moment" + tag, "(M^1)^2 + (M^2)^2 = 2(s_- s_+ + s_+ s_-)", 0.0,
           (m1 * m1 + m2p * m2p - 2.0 * (sm * sp + sp * sm)).norm(), 1e-12);

  const double th = kPi / 4;
  for (std::size_t n = 2; n <= 6; ++n) {
    // Fall back to the exact minimal cutoff when the dense space would be too large.
    const std::size_t cut_n =
        std::pow(static_cast<double>(cutoff + 1), static_cast<double>(n)) <=
                static_cast<double>(kMaxTotalDim)
            ? cutoff
            : 1;
    const auto psi = multimode_noon_like({th, 0.0}, n, 1, FockCutoff{cut_n});
    const auto rep = cfrd(psi, pseudospin_grid(split_phases(n, 1), FockCutoff{cut_n}));
    const double nd = static_cast<double>(n);
    const std::string ntag = "[n=" + std::to_string(n) + ",cutoff=" + std::to_string(cut_n) + "]";
    sink.add("cfrd.lhs" + ntag, "pseudospin CFRD l.h.s. = 2^{2n}/4 at theta = pi/4",
             std::pow(2.0, 2 * nd) / 4, rep.lhs, 1e-9);
    sink.add("cfrd.rhs" + ntag, "pseudospin CFRD r.h.s. = 2^n", std::pow(2.0, nd), rep.rhs, 1e-9);
    sink.flag("cfrd.violated" + ntag, "CFRD violated for n >= 3", n >= 3, rep.violated);
  }
  // Results must not depend on the cutoff: compare against the minimal one.
  for (std::size_t split : {1, 2}) {
    const auto at = [&](std::size_t c) {
      return cfrd(multimode_noon_like({th, 0.0}, 3, split, FockCutoff{c}),
                  pseudospin_grid(split_phases(3, split), FockCutoff{c}));
    };
    const auto ref = at(1);
    const auto here = at(cutoff);
    const std::string stag = "[n=3,r=" + std::to_string(split) + ",cutoff=" + std::to_string(cutoff) + "]";
    sink.add("cfrd.n3.lhs" + stag, "n = 3: l.h.s. = 16 > r.h.s. = 8", 16.0, here.lhs, 1e-9);
    sink.add("cfrd.n3.rhs" + stag, "n = 3: l.h.s. = 16 > r.h.s. = 8", 8.0, here.rhs, 1e-9);
    sink.add("cfrd.cutoff-independence" + stag, "state lives on Fock levels {0,1}", ref.lhs - ref.rhs,
             here.lhs - here.rhs, 1e-12);
  }
}

void sweep_claims(ClaimSink& sink) {
  RunConfig c;
  c.command = "sweep";
  c.system = "qubit";
  c.param = "theta";
  c.phi = kPi / 4;
  c.from = 0.0;
  c.to = kPi / 2;
  c.steps = 9;
  const auto theta = sweep(c);
  double worst = 0.0;
  for (const auto& row : theta.rows) {
    worst = std::max(worst, std::abs(row.report.residual - sq(std::sin(2 * row.value))));
  }
  sink.add("sweep.theta.residual-curve", "residual = sin^2(2theta); zero only at 0 and pi/2", 0.0,
           worst, 1e-10);
  sink.add("sweep.theta.zero-at-0", "equality holds only for sin^2(2theta) = 0", 0.0,
           theta.rows.front().report.residual, 1e-12);
  sink.add("sweep.theta.zero-at-pi/2", "equality holds only for sin^2(2theta) = 0", 0.0,
           theta.rows.back().report.residual, 1e-12);

  c = RunConfig{};
  c.system = "photon";
  c.param = "p";
  c.theta = kPi / 6;
  c.phi = kPi / 5;
  c.from = 0.1;
  c.to = 1.0;
  c.steps = 10;
  const auto pt = sweep(c);
  double spread = 0.0;
  double scale = 0.0;
  const double ref_ratio = *pt.rows.back().report.ratio;
  const double ref_res = pt.rows.back().report.residual;
  for (const auto& row : pt.rows) {
    spread = std::max(spread, std::abs(row.report.ratio.value_or(std::numeric_limits<double>::quiet_NaN()) - ref_ratio));
    scale = std::max(scale, std::abs(row.report.residual - sq(row.value) * ref_res));
  }
  sink.add("sweep.p.ratio-constant", "degree of violation unaffected by depolarizing noise", 0.0,
           spread, 1e-10);
  sink.add("sweep.p.residual-p2", "residual scales as p^2", 0.0, scale, 1e-10);

  c = RunConfig{};
  c.system = "cfrd";
  c.param = "n";
  c.theta = kPi / 4;
  c.phi = 0.0;
  c.split_r = 1;
  c.from = 2;
  c.to = 6;
  const auto nt = sweep(c);
  bool pattern = true;
  for (const auto& row : nt.rows) pattern = pattern && (row.report.violated == (row.value >= 3));
  sink.flag("sweep.n.cfrd-violated-iff-n>=3", "CFRD violation for n >= 3 only", true, pattern);
}

}  // namespace

ClaimBundle reproduce_all(const RunConfig& config) {
  const std::size_t cutoff = config.cutoff.value_or(1);
  if (cutoff < 1) throw UsageError("--cutoff must be >= 1 for reproduce-all");
  ClaimSink sink;
  two_party_claims(sink, cutoff);
  tmss_claims(sink);
  noise_claims(sink, cutoff);
  multipartite_claims(sink, cutoff);
  pseudospin_claims(sink, cutoff);
  sweep_claims(sink);
  ClaimBundle out{sink.take(), cutoff, true};
  for (const auto& c : out.claims) out.all_pass = out.all_pass && c.pass;
  return out;
}

EqualityReport evaluate_instance(const RunConfig& config) {
  if (config.system == "tmss" && config.p == 1.0 && config.eta == 1.0) {
    const SqueezeParam r(config.r);
    return tmss_equality(r, config.cutoff ? FockCutoff{*config.cutoff} : tmss_default_cutoff(r))
        .equality;
  }
  return evaluate(prepare(config));
}

SweepTable sweep(const RunConfig& config) {
  static const std::vector<std::string> known{"theta", "phi", "p", "eta", "r", "n", "split_r"};
  if (std::find(known.begin(), known.end(), config.param) == known.end()) {
    throw UsageError("unknown sweep parameter '" + config.param + "'");
  }
  std::vector<double> values;
  if (config.param == "n" || config.param == "split_r") {
    if (config.from < 0 || config.to < config.from) throw UsageError("invalid integer range");
    for (auto v = static_cast<long>(std::lround(config.from)); v <= std::lround(config.to); ++v) {
      values.push_back(static_cast<double>(v));
    }
  } else {
    if (config.steps == 0) throw UsageError("--steps must be >= 1");
    if (!(config.to >= config.from)) throw UsageError("--to must be >= --from");
    for (std::size_t s = 0; s < config.steps; ++s) {
      const double t = config.steps == 1 ? 0.0
                                         : static_cast<double>(s) /
                                               static_cast<double>(config.steps - 1);
      values.push_back(s + 1 == config.steps && config.steps > 1
                           ? config.to
                           : config.from + t * (config.to - config.from));
    }
  }

  SweepTable table{config.param, config.system, {}};
  for (double v : values) {
    RunConfig c = config;
    if (config.param == "theta") c.theta = v;
    if (config.param == "phi") c.phi = v;
    if (config.param == "p") c.p = v;
    if (config.param == "eta") c.eta = v;
    if (config.param == "r") c.r = v;
    if (config.param == "n") c.n = static_cast<std::size_t>(v);
    if (config.param == "split_r") c.split_r = static_cast<std::size_t>(v);
    table.rows.push_back({v, evaluate_instance(c)});
  }
  return table;
}

SampledRun sampled_run(const RunConfig& config) {
  if (config.shots == 0) throw UsageError("--shots must be >= 1");
  if (config.system == "cfrd") throw UsageError("sampled-run needs an equality system, not cfrd");
  const Prepared prep = prepare(config);
  const StateView s = view(prep.state);
  const ShotPlan plan{config.shots, config.seed, {}};

  SampledRun run{config.system, config.shots, config.seed, evaluate(prep),
                 sampled_equality(s, prep.grid, prep.instance, plan, config.k_sigma), {}};
  for (const auto& [choice, est] : run.sampled.estimates) {
    run.exact_correlations.emplace_back(choice, correlation(s, prep.grid, choice));
  }
  return run;
}

CfrdRun cfrd_run(const RunConfig& config) {
  RunConfig c = config;
  c.system = "cfrd";
  const Prepared prep = prepare(c);
  const StateView s = view(prep.state);
  return {c.n, c.split_r, c.cutoff.value_or(1), cfrd_decomposition(s, prep.grid),
          cfrd(s, prep.grid)};
}

}  // namespace entcheck
