// lhd: command-line front end for the Latin hypercube design library.
//
// Exit status: 0 on success, 1 on a domain error (construction failed,
// unreadable design file), 2 on a usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "lhd/lhd.hpp"

namespace {

using nlohmann::json;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

/// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log_config(const json& config) { std::cerr << config.dump() << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lhd::Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw lhd::Error("failed writing " + path);
}

json record_to_json(const lhd::InsertionRecord& rec) {
  json j = {{"step", rec.step},         {"attempts", rec.attempts},   {"r", rec.r},
            {"decrements", rec.decrements}, {"candidates", rec.candidates}, {"feasible", rec.feasible},
            {"degenerate_directions", rec.degenerate_directions}, {"point", rec.point}};
  j["nn_distance"] = std::isfinite(rec.nn_distance) ? json(rec.nn_distance) : json(nullptr);
  return j;
}

void write_trace(const std::string& path, const std::vector<lhd::InsertionRecord>& log) {
  std::string text;
  for (const auto& rec : log) text += record_to_json(rec).dump() + '\n';
  write_text(path, text);
}

json evaluate_design(const lhd::Design& design, double p) {
  json out;
  out["n"] = design.size();
  out["d"] = design.dim();
  const auto validity = lhd::validate_lhd(design);
  out["lhd_valid"] = validity.ok();
  auto violations = json::array();
  for (const auto& v : validity.violations) violations.push_back(lhd::to_string(v));
  out["violations"] = violations;
  out["p"] = p;
  try {
    const auto mm = lhd::maximin(design, p);
    out["maximin"] = mm.value;
    out["maximin_argmin"] = {mm.argmin->first, mm.argmin->second};
  } catch (const lhd::Error& e) {
    out["maximin"] = nullptr;
    out["maximin_error"] = e.what();
  }
  try {
    out["audze_eglais"] = lhd::audze_eglais(design).value;
  } catch (const lhd::Error& e) {
    out["audze_eglais"] = nullptr;
    out["audze_eglais_error"] = e.what();
  }
  const auto cd = lhd::centered_l2_discrepancy(design);
  out["centered_l2"] = cd.value;
  out["centered_l2_squared"] = *cd.squared;
  try {
    const auto nn = lhd::nn_summary(design);
    json q;
    for (const double a : {0.1, 0.25, 0.5, 0.75, 0.9}) q[lhd::quantile_key(a)] = nn.quantile(a);
    out["nn_quantiles"] = q;
  } catch (const lhd::Error& e) {
    out["nn_quantiles"] = nullptr;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-filling Latin hypercube designs: random LHDs, greedy SLHD construction, criteria, "
               "local improvement and Monte Carlo benchmarks."};
  app.set_version_flag("--version", std::string("lhd ") + lhd::kVersion);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Random Latin hypercube design");
  std::size_t gen_n = 0, gen_d = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of points (levels)")->required()->check(CLI::PositiveNumber);
  gen->add_option("--d", gen_d, "Number of dimensions")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output design (.json or .csv)")->required();

  // slhd
  auto* sl = app.add_subcommand("slhd", "Greedy LHD with prescribed inter-point distance");
  std::size_t sl_n = 0, sl_d = 0;
  std::optional<double> sl_r;
  bool sl_auto = false;
  std::size_t sl_steps = 5;
  double sl_increment = 0.05;
  lhd::SlhdConfig sl_config;
  std::uint64_t sl_seed = 1;
  std::string sl_out, sl_trace;
  sl->add_option("--n", sl_n, "Number of points")->required()->check(CLI::Range(2, 1 << 20));
  sl->add_option("--d", sl_d, "Number of dimensions")->required()->check(CLI::PositiveNumber);
  auto* r_opt = sl->add_option("--r", sl_r, "Target inter-point distance")->check(CLI::PositiveNumber);
  auto* auto_opt = sl->add_flag("--auto-r", sl_auto, "Radius schedule starting at the random-LHD Q_0.75");
  r_opt->excludes(auto_opt);
  sl->add_option("--steps", sl_steps, "Schedule length for --auto-r")->check(CLI::PositiveNumber);
  sl->add_option("--increment", sl_increment, "Relative schedule increment for --auto-r")
      ->check(CLI::NonNegativeNumber);
  sl->add_option("--seed", sl_seed, "Random seed");
  sl->add_option("--attempts", sl_config.max_attempts_per_point, "Candidate rounds per point before shrinking r")
      ->check(CLI::PositiveNumber);
  sl->add_option("--decrement", sl_config.r_decrement, "Relative shrink of r on a stall")
      ->check(CLI::Range(0.0, 1.0));
  sl->add_option("--center-band", sl_config.center_band, "Half-width of the band around 0.5")
      ->check(CLI::Range(0.0, 0.5));
  sl->add_option("--restarts", sl_config.restarts, "Full restarts at the requested r before shrinking it");
  sl->add_flag("--restart-on-decrement", sl_config.restart_on_decrement, "Discard the partial design on a decrement");
  sl->add_option("--out", sl_out, "Output design (.json or .csv)")->required();
  sl->add_option("--trace", sl_trace, "Write the per-insertion log as JSON lines");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Print design criteria as JSON");
  std::string ev_in, ev_out;
  double ev_p = 2.0;
  ev->add_option("--in", ev_in, "Design file")->required();
  ev->add_option("--p", ev_p, "Distance order for maximin")->check(CLI::Range(1.0, 1e9));
  ev->add_option("--out", ev_out, "Also write the report here");

  // improve
  auto* im = app.add_subcommand("improve", "Swap-based local search on a design");
  std::string im_in, im_out, im_trace, im_criterion = "maximin";
  std::size_t im_budget = 10000;
  std::uint64_t im_seed = 1;
  bool im_anneal = false;
  im->add_option("--in", im_in, "Design file")->required();
  im->add_option("--criterion", im_criterion, "maximin | audze_eglais | centered_l2")
      ->check(CLI::IsMember({"maximin", "audze_eglais", "centered_l2"}));
  im->add_option("--budget", im_budget, "Maximum evaluated moves");
  im->add_option("--seed", im_seed, "Random seed");
  im->add_flag("--anneal", im_anneal, "Simulated annealing instead of first-improvement search");
  im->add_option("--out", im_out, "Output design")->required();
  im->add_option("--trace", im_trace, "Write accepted moves as JSON lines");

  // bench
  auto* be = app.add_subcommand("bench", "Monte Carlo nearest-neighbour quantile tables");
  lhd::BenchConfig be_config;
  std::string be_generator = "random_lhd", be_out, be_csv;
  bool be_compare = false, be_omit_timing = false, be_pooled = false;
  be->add_option("--dims", be_config.dims, "Dimensions, e.g. 2,3,4")->delimiter(',');
  be->add_option("--points-per-dim", be_config.points_per_dim, "n = points_per_dim * d")->check(CLI::PositiveNumber);
  be->add_option("--replications", be_config.replications, "Designs per dimension")->check(CLI::PositiveNumber);
  be->add_option("--quantiles", be_config.quantiles, "Quantile levels, e.g. 0.1,0.25,0.75")->delimiter(',');
  be->add_option("--generator", be_generator, "random_lhd | slhd")->check(CLI::IsMember({"random_lhd", "slhd"}));
  be->add_option("--seed", be_config.seed, "Master seed");
  be->add_option("--threads", be_config.threads, "Worker threads (0 = all cores)");
  be->add_option("--steps", be_config.schedule.steps, "SLHD radius schedule length")->check(CLI::PositiveNumber);
  be->add_option("--restarts", be_config.schedule.base.restarts, "SLHD restarts per radius");
  be->add_flag("--pooled", be_pooled, "Quantiles of pooled distances instead of per-design averages");
  be->add_flag("--compare", be_compare, "Run both generators and report the dominance table");
  be->add_flag("--omit-timing", be_omit_timing, "Leave wall-clock fields out of the report");
  be->add_option("--out", be_out, "Report JSON path (stdout when omitted)");
  be->add_option("--csv", be_csv, "Table CSV path");

  // plot
  auto* pl = app.add_subcommand("plot", "SVG projection of a design onto two dimensions");
  std::string pl_in, pl_out;
  std::vector<std::size_t> pl_dims = {1, 2};
  bool pl_annotate = false;
  pl->add_option("--in", pl_in, "Design file")->required();
  pl->add_option("--dims", pl_dims, "Two 1-based dimensions")->expected(2);
  pl->add_flag("--annotate-order", pl_annotate, "Label points by insertion order");
  pl->add_option("--out", pl_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*gen) {
      log_config({{"command", "generate"}, {"n", gen_n}, {"d", gen_d}, {"seed", gen_seed}, {"out", gen_out}});
      lhd::save_design(lhd::random_lhd(lhd::GridSpec(gen_n, gen_d), gen_seed), gen_out);
    } else if (*sl) {
      if (!sl_r && !sl_auto) throw UsageError("slhd needs --r or --auto-r");
      sl_config.seed = sl_seed;
      const lhd::GridSpec grid(sl_n, sl_d);
      json config = {{"command", "slhd"},
                     {"n", sl_n},
                     {"d", sl_d},
                     {"seed", sl_seed},
                     {"attempts", sl_config.max_attempts_per_point},
                     {"decrement", sl_config.r_decrement},
                     {"center_band", sl_config.center_band},
                     {"restarts", sl_config.restarts},
                     {"restart_on_decrement", sl_config.restart_on_decrement},
                     {"out", sl_out}};
      lhd::SlhdResult result{lhd::Design(lhd::GridSpec(1, 1), {0}), 0, 0, 0, 0, 0, {}};
      if (sl_auto) {
        lhd::ScheduleOptions options;
        options.steps = sl_steps;
        options.increment = sl_increment;
        options.base = sl_config;
        config["auto_r"] = true;
        config["steps"] = sl_steps;
        config["increment"] = sl_increment;
        log_config(config);
        const auto schedule = lhd::radius_schedule(grid, sl_seed, options);
        json summary = {{"start_r", schedule.start_r}};
        auto entries = json::array();
        for (const auto& e : schedule.entries) {
          json j = {{"r", e.r}, {"maximin", e.maximin}};
          if (e.result) j["decrements"] = e.result->decrements;
          if (!e.failure.empty()) j["failure"] = e.failure;
          entries.push_back(j);
        }
        summary["entries"] = entries;
        std::cerr << summary.dump() << '\n';
        const auto* best = schedule.best_result();
        if (!best) throw lhd::Error("no radius in the schedule produced a design");
        result = *best;
      } else {
        sl_config.r = *sl_r;
        config["r"] = *sl_r;
        log_config(config);
        result = lhd::slhd_construct(grid, sl_config);
      }
      lhd::save_design(result.design, sl_out);
      if (!sl_trace.empty()) write_trace(sl_trace, result.log);
      std::cerr << json{{"r_requested", result.r_requested},
                        {"r_effective", result.r_effective},
                        {"attempts", result.attempts},
                        {"decrements", result.decrements},
                        {"restarts", result.restarts},
                        {"maximin", lhd::maximin(result.design).value}}
                       .dump()
                << '\n';
    } else if (*ev) {
      log_config({{"command", "evaluate"}, {"in", ev_in}, {"p", ev_p}});
      const auto report = evaluate_design(lhd::load_design(ev_in), ev_p).dump(2) + '\n';
      std::cout << report;
      if (!ev_out.empty()) write_text(ev_out, report);
    } else if (*im) {
      log_config({{"command", "improve"},
                  {"in", im_in},
                  {"criterion", im_criterion},
                  {"budget", im_budget},
                  {"seed", im_seed},
                  {"anneal", im_anneal},
                  {"out", im_out}});
      const auto design = lhd::load_design(im_in);
      const auto criterion = lhd::parse_criterion(im_criterion);
      if (!lhd::validate_lhd(design).ok()) throw lhd::Error(im_in + " is not a Latin hypercube design");
      lhd::SearchResult result =
          im_anneal ? lhd::simulated_annealing(design, criterion, {im_budget, 0.01, 1e-3, im_seed})
                    : lhd::local_search(design, criterion, im_budget, im_seed);
      lhd::Design out = result.design;
      out.provenance().generator = design.provenance().generator + "+" + (im_anneal ? "anneal" : "local_search");
      lhd::save_design(out, im_out);
      if (!im_trace.empty()) {
        std::string text;
        for (const auto& t : result.trace) {
          text += json{{"evaluation", t.evaluation},
                       {"dimension", t.move.dimension + 1},
                       {"i", t.move.i},
                       {"j", t.move.j},
                       {"effect", t.move.effect},
                       {"value", t.value}}
                      .dump() +
                  '\n';
        }
        write_text(im_trace, text);
      }
      std::cerr << json{{"initial", result.initial_value},
                        {"final", result.final_value},
                        {"evaluated", result.evaluated},
                        {"accepted", result.accepted},
                        {"local_optimum", result.local_optimum}}
                       .dump()
                << '\n';
    } else if (*be) {
      be_config.generator = lhd::parse_generator(be_generator);
      be_config.pooled = be_pooled;
      log_config({{"command", "bench"},
                  {"dims", be_config.dims},
                  {"replications", be_config.replications},
                  {"generator", be_compare ? "both" : be_generator},
                  {"seed", be_config.seed},
                  {"threads", be_config.threads}});
      json doc;
      if (be_compare) {
        auto rows = json::array();
        for (const auto& row : lhd::compare_generators(be_config)) rows.push_back(lhd::to_json(row));
        doc = {{"config", {{"dims", be_config.dims}, {"replications", be_config.replications}, {"seed", be_config.seed}}},
               {"comparison", rows}};
      } else {
        const auto report = lhd::run_bench(be_config);
        doc = lhd::to_json(report, !be_omit_timing);
        if (!be_csv.empty()) {
          std::ofstream csv(be_csv, std::ios::binary);
          if (!csv) throw lhd::Error("cannot open " + be_csv + " for writing");
          lhd::write_table_csv(report, csv);
        }
      }
      if (be_out.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        write_text(be_out, doc.dump(2) + '\n');
      }
    } else if (*pl) {
      if (pl_dims.size() != 2) throw UsageError("--dims takes exactly two dimensions");
      log_config({{"command", "plot"}, {"in", pl_in}, {"dims", pl_dims}, {"annotate_order", pl_annotate}});
      const auto design = lhd::load_design(pl_in);
      if (pl_dims[0] < 1 || pl_dims[1] < 1 || pl_dims[0] > design.dim() || pl_dims[1] > design.dim() ||
          pl_dims[0] == pl_dims[1]) {
        throw UsageError("--dims must name two distinct dimensions in 1.." + std::to_string(design.dim()));
      }
      lhd::PlotSpec spec;
      spec.x_dim = pl_dims[0] - 1;
      spec.y_dim = pl_dims[1] - 1;
      spec.annotate_order = pl_annotate;
      write_text(pl_out, lhd::render_projection(design, spec));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const lhd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return 0;
}
