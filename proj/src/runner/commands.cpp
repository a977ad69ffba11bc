#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mmt/estimate_bench.hpp"
#include "mmt/mmt_dynamics.hpp"
#include "mmt/parallel.hpp"
#include "mmt/picard_probe.hpp"
#include "mmt/runner.hpp"
#include "mmt/thresholds.hpp"
#include "mmt/trajectory_io.hpp"

namespace mmt::runner {

using nlohmann::json;

namespace {

std::string series_csv(const TrajectoryRecord& rec) {
  std::string out = "t,mass,energy,hamiltonian,h_alpha_half\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    out += fmt17(rec.times[i]) + ',' + fmt17(rec.mass_series[i]) + ',' + fmt17(rec.energy_series[i]) + ',' +
           fmt17(rec.hamiltonian_series[i]) + ',' + fmt17(rec.h_alpha_half_series[i]) + '\n';
  return out;
}

double rel_drift(const std::vector<double>& v) {
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return v.front() != 0.0 ? d / std::abs(v.front()) : d;
}

void write_trajectory(RunDir& run, const TrajectoryRecord& rec, const ModelParams& p, const GridSpec& g,
                      const IntegratorConfig& c) {
  const bool snaps = c.keep_snapshots && !rec.snapshots.empty();
  run.write("trajectory.json", to_json(rec, p, g, c, snaps ? "snapshots.bin" : "").dump(1) + "\n");
  run.write("series.csv", series_csv(rec));
  if (snaps) run.write("snapshots.bin", snapshot_bytes(rec));
}

}  // namespace

int cmd_simulate(const json& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  const ModelParams p = params_from(cfg.at("params"));
  const GridSpec g(cfg.at("grid").at("num_modes").get<std::size_t>(), cfg.at("grid").at("box_length").get<double>());
  const json& ic = cfg.at("integrator");
  IntegratorConfig c;
  c.dt = ic.at("dt").get<double>();
  c.t_end = ic.at("t_end").get<double>();
  c.dealias_pad_factor = ic.at("dealias_pad_factor").get<double>();
  c.scheme = scheme_from_string(ic.at("scheme").get<std::string>());
  c.record_stride = ic.at("record_stride").get<std::size_t>();
  c.keep_snapshots = ic.at("keep_snapshots").get<bool>();
  const SpectralField u0 = make_initial_data(cfg.at("initial_data"), g);

  RunDir run(out_dir, "simulate", cfg);
  try {
    const TrajectoryRecord rec = integrate(u0, p, c);
    write_trajectory(run, rec, p, g, c);
    run.finish("ok");
    log << "simulate: " << rec.times.size() << " records to t = " << rec.times.back()
        << ", relative mass drift " << rel_drift(rec.mass_series) << ", relative energy drift "
        << rel_drift(rec.energy_series) << ", relative hamiltonian drift " << rel_drift(rec.hamiltonian_series)
        << "\n";
    return kOk;
  } catch (const StepRejected& e) {
    if (!e.partial().times.empty()) write_trajectory(run, e.partial(), p, g, c);
    run.finish("numerical_failure", e.time());
    log << "simulate: step rejected at t = " << e.time() << " (non-finite modes)\n";
    return kNumericalFailure;
  }
}

int cmd_probe(const json& cfg, const std::filesystem::path& out_dir, std::optional<double> assert_slope,
              std::ostream& log) {
  ProbeSpec spec;
  spec.family = family_from_string(cfg.at("family").get<std::string>());
  spec.params = params_from(cfg.at("params"));
  spec.t = cfg.at("t").get<double>();
  spec.eps = cfg.at("eps").get<double>();
  for (int e = cfg.at("N_exponents")[0].get<int>(); e <= cfg.at("N_exponents")[1].get<int>(); ++e)
    spec.N_list.push_back(std::ldexp(1.0, e));
  spec.quad_points = cfg.at("Q").get<std::size_t>();
  spec.out_points = cfg.at("M").get<std::size_t>();

  RunDir run(out_dir, "probe", cfg);
  ProbeResult res;
  try {
    res = run_probe(spec);
  } catch (const QuadratureUnderresolved& e) {
    run.finish("numerical_failure");
    log << "probe: " << e.what() << "\n";
    return kNumericalFailure;
  }
  json footer = probe_footer(res);
  if (spec.family != Family::LLL) {
    json disjoint = json::array();
    for (double N : spec.N_list) disjoint.push_back(support_disjointness_check(spec.family, N, spec.eps, spec.params));
    footer["support_disjoint"] = disjoint;
  }
  const double gap = std::abs(res.fitted_slope - res.predicted_slope);
  if (assert_slope) {
    footer["assert_slope"] = *assert_slope;
    footer["slope_gap"] = gap;
  }
  run.write("probe.csv", probe_csv(res));
  run.write("probe.json", footer.dump(2) + "\n");
  log << "probe " << to_string(spec.family) << ": fitted slope " << res.fitted_slope << " +- " << res.fit_stderr
      << ", predicted " << res.predicted_slope << "\n";
  if (assert_slope && !(gap <= *assert_slope)) {
    run.finish("assertion_failure");
    log << "probe: |fitted - predicted| = " << gap << " exceeds " << *assert_slope << "\n";
    return kAssertionFailure;
  }
  run.finish("ok");
  return kOk;
}

int cmd_map(const json& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  const double alpha = cfg.at("alpha").get<double>();
  const Range br{cfg.at("beta_range")[0].get<double>(), cfg.at("beta_range")[1].get<double>()};
  const Range sr{cfg.at("s_range")[0].get<double>(), cfg.at("s_range")[1].get<double>()};
  const auto cells = region_chart(alpha, br, sr, cfg.at("resolution").get<std::size_t>(), cfg.at("delta").get<double>());
  RunDir run(out_dir, "map", cfg);
  run.write("region.csv", region_chart_csv(cells));
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : cells) ++counts[static_cast<int>(c.classification)];
  run.finish("ok");
  log << "map: " << cells.size() << " cells, " << counts[0] << " well-posed, " << counts[1] << " ill-posed, "
      << counts[2] << " open\n";
  return kOk;
}

int cmd_bench(const json& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto res = cfg.at("resolution").get<std::size_t>();
  std::vector<double> L;
  if (cfg.contains("L")) L.push_back(cfg.at("L").get<double>());

  std::vector<BenchReport> reports;
  for (double alpha : cfg.at("alphas").get<std::vector<double>>())
    for (const auto& tag : cfg.at("cases").get<std::vector<std::string>>()) {
      std::vector<double> sweep = default_sweep(tag);
      if (cfg.contains("N_exponents")) {
        sweep.clear();
        for (int e = cfg.at("N_exponents")[0].get<int>(); e <= cfg.at("N_exponents")[1].get<int>(); ++e)
          sweep.push_back(std::ldexp(1.0, e));
      }
      reports.push_back(counting_bound_check(tag, alpha, sweep, L, res, seed));
      const auto& r = reports.back();
      log << "bench " << tag << " alpha=" << alpha << ": worst ratio " << r.worst_ratio
          << (r.passed ? " ok" : " FAIL") << "\n";
    }

  json summary = bench_summary(reports);
  bool ok = summary.at("passed").get<bool>();
  json hr = json::array();
  for (double alpha : cfg.at("alphas").get<std::vector<double>>())
    for (const auto& item : cfg.at("h_range")) {
      const auto N = item.at("N").get<std::vector<double>>();
      const DyadicConfig dc{N[0], N[1], N[2], std::nullopt, {}, alpha};
      const HRangeReport r = h_range_check(dc, item.at("samples").get<std::size_t>(), seed);
      ok = ok && r.passed;
      hr.push_back({{"alpha", alpha},
                    {"N", N},
                    {"min_lower_ratio", r.min_lower_ratio},
                    {"max_upper_ratio", r.max_upper_ratio},
                    {"c_lower", r.c_lower},
                    {"c_upper", r.c_upper},
                    {"feasible_measure", r.feasible_measure.value},
                    {"stderr", r.feasible_measure.std_error},
                    {"accepted", r.accepted},
                    {"draws", r.draws},
                    {"passed", r.passed}});
      log << "h_range alpha=" << alpha << " N=(" << N[0] << "," << N[1] << "," << N[2] << "): "
          << (r.passed ? "ok" : "FAIL") << "\n";
    }
  summary["h_range"] = hr;
  summary["passed"] = ok;

  RunDir run(out_dir, "bench", cfg);
  run.write("bench.csv", bench_csv(reports));
  run.write("bench.json", summary.dump(2) + "\n");
  run.finish(ok ? "ok" : "assertion_failure");
  return ok ? kOk : kAssertionFailure;
}

int run(const Options& opt, std::ostream& out, std::ostream& err) {
  set_default_threads(resolve_threads(opt.threads.value_or(0)));
  if (opt.command == "selftest") {
    if (!opt.inject_fault.empty() && opt.inject_fault != "dispersion-sign") {
      err << "inject-fault: unknown fault \"" << opt.inject_fault << "\"\n";
      return kConfigError;
    }
    return cmd_selftest(opt.inject_fault == "dispersion-sign", out);
  }
  json cfg;
  try {
    const ConfigDoc doc = load_config(opt.config_path);
    if (opt.command == "simulate") cfg = resolve_simulate(doc, opt);
    else if (opt.command == "probe") cfg = resolve_probe(doc, opt);
    else if (opt.command == "map") cfg = resolve_map(doc, opt);
    else if (opt.command == "bench") cfg = resolve_bench(doc, opt);
    else {
      err << "unknown command \"" << opt.command << "\"\n";
      return kConfigError;
    }
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kConfigError;
  }

  std::filesystem::path dir = opt.out_dir ? std::filesystem::path(*opt.out_dir) : std::filesystem::path("runs");
  if (!opt.out_dir) {
    std::string stamp = utc_timestamp();
    stamp.erase(std::remove(stamp.begin(), stamp.end(), ':'), stamp.end());
    dir /= stamp;
  }
  try {
    if (opt.command == "simulate") return cmd_simulate(cfg, dir, out);
    if (opt.command == "probe") return cmd_probe(cfg, dir, opt.assert_slope, out);
    if (opt.command == "map") return cmd_map(cfg, dir, out);
    return cmd_bench(cfg, dir, out);
  } catch (const InvalidArgument& e) {
    err << opt.config_path << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace mmt::runner
