#include "experiments.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "equilibrium.hpp"

namespace crowdtag {

std::pair<SystemParams, DesignTarget> sample_config(double d, SplitMix64& rng,
                                                    double theta) {
  if (!(d > 0.0 && d < 1.0))
    throw std::invalid_argument("sample_config: d outside (0, 1)");
  SystemParams p;
  p.alpha_R = 0.25 + 0.05 * rng.next_double();
  p.mu_a = 0.2 * rng.next_double();
  p.a = 2.0 + rng.next_double();
  p.p = 0.5 * rng.next_double();
  p.alpha_F = p.alpha_R / (1.0 - d);
  p.b = 1.0;
  p.c = 1.0;
  p.C_e = 1.0;
  p.Q_p = 1.0;
  p.Q_np = 0.5;
  DesignTarget t{theta, p.alpha_R + 0.01};
  return {p, t};
}

SweepSummary run_sweep(const SweepSpec& spec) {
  if (spec.n_samples < 1)
    throw std::invalid_argument("run_sweep: n_samples must be >= 1");
  for (double d : spec.d_values)
    if (!(d > 0.0 && d < 1.0))
      throw std::invalid_argument("run_sweep: d outside (0, 1)");

  SweepSummary summary;
  summary.master_seed = spec.master_seed;
  summary.theta = spec.theta;
  bool have_provenance = false;

  for (double d : spec.d_values) {
    SweepRow row;
    row.d = d;
    row.n = spec.n_samples;
    long n_designable = 0, n_RAI = 0, n_p10 = 0;
    double sum_P = 0.0;

    for (int i = 0; i < spec.n_samples; ++i) {
      SplitMix64 rng(spec.master_seed ^ static_cast<uint64_t>(i));
      const auto [params, target] = sample_config(d, rng, spec.theta);

      // closed-form feasibility region: theta > f or K_delta >= 0
      try {
        const double f = f_threshold(target.theta, target.delta, params);
        const double K_delta = kappa_Kdelta(target.delta, params)[1];
        if (target.theta > f || K_delta >= 0.0) ++n_RAI;
      } catch (const std::domain_error&) {
        // boundary-degenerate f: not in the region
      }

      try {
        const DesignOutcome outcome = choose_design(target, params, spec.knobs);
        if (!designable(outcome)) continue;
        const MechanismDesign& design = std::get<MechanismDesign>(outcome);
        if (!have_provenance) {
          summary.knob_provenance = design.knobs;
          have_provenance = true;
        }
        ++n_designable;

        const NeReport rep = ne_set(design, params);
        const double P = rep.degradation_P.value_or(0.0);
        if (rep.second_ne_exists) ++row.n_second_ne;
        if (P < 10.0) ++n_p10;
        sum_P += P;
      } catch (const std::exception&) {
        ++row.n_failed;
      }
    }

    row.frac_designable =
        static_cast<double>(n_designable) / spec.n_samples;
    row.frac_R_AI = static_cast<double>(n_RAI) / spec.n_samples;
    if (n_designable > 0) {
      row.frac_P_lt_10 = static_cast<double>(n_p10) / n_designable;
      row.mean_P = sum_P / n_designable;
    }
    if (n_RAI != n_designable) summary.feasibility_columns_differ = true;
    summary.rows.push_back(row);
  }
  return summary;
}

std::string sweep_csv(const SweepSummary& summary) {
  std::ostringstream os;
  os << "d,n,frac_designable,frac_P_lt_10,mean_P,n_second_ne,master_seed";
  if (summary.feasibility_columns_differ) os << ",frac_R_AI";
  os << "\n";
  char buf[256];
  for (const SweepRow& r : summary.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%ld,%llu", r.d,
                  r.n, r.frac_designable, r.frac_P_lt_10, r.mean_P,
                  r.n_second_ne,
                  static_cast<unsigned long long>(summary.master_seed));
    os << buf;
    if (summary.feasibility_columns_differ) {
      std::snprintf(buf, sizeof buf, ",%.17g", r.frac_R_AI);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace crowdtag
