#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdrpp/mdrpp.hpp"

namespace {

using namespace mdrpp;
using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

WaitTime parse_wait(const std::string& text) {
  if (text == "end" || text == "END") return WaitTime::end();
  return WaitTime::of(Time::ticks(detail::parse_int(text, 0, "wait time (millitime)")));
}

AuctionConfig auction_config(const Instance& inst, const std::string& r0, const std::string& dr) {
  AuctionConfig cfg = AuctionConfig::defaults_for(inst);
  if (!r0.empty()) cfg.initial_radius = parse_time(r0);
  if (!dr.empty()) cfg.radius_step = parse_time(dr);
  validate(cfg);
  return cfg;
}

std::string route_text(const Route& r) {
  std::string s;
  for (const Trip& t : r.trips) {
    s += '(';
    for (std::size_t i = 0; i < t.nodes.size(); ++i) s += (i ? " " : "") + std::to_string(t.nodes[i]);
    s += ')';
  }
  return s;
}

json report_json(const Instance& inst, const FailureScenario& s, const SimulationReport& r) {
  json j;
  j["scenario"] = s.name;
  json failures = json::array();
  for (const auto& [k, f] : s.failures) failures.push_back({{"vehicle", k + 1}, {"time", f.as_units()}});
  j["failures"] = failures;
  j["beta_initial"] = r.beta_initial.as_units();
  j["beta_ca"] = r.beta_ca.as_units();
  j["pct_increase"] = percent_increase(r.beta_initial, r.beta_ca).str2();
  j["auctions"] = r.auction_count();
  j["coverage_complete"] = coverage_check(inst, r);
  json routes = json::array();
  for (std::size_t k = 0; k < r.final_plan.size(); ++k) {
    routes.push_back({{"vehicle", k + 1},
                      {"active", static_cast<bool>(r.final_plan.active[k])},
                      {"completion", r.final_plan.completion_time(k).as_units()},
                      {"trips", route_text(r.final_plan.routes[k])}});
  }
  j["final_plan"] = routes;
  json trace = json::array();
  for (const SimEvent& e : r.trace) trace.push_back({{"time", e.time.as_units()}, {"event", e.what}});
  j["trace"] = trace;
  return j;
}

void add_sa_flags(CLI::App* cmd, SaConfig& sa) {
  cmd->add_option("--t0", sa.initial_temperature, "initial temperature (0 = 0.3 x initial makespan)");
  cmd->add_option("--cool", sa.cooling_rate, "geometric cooling rate");
  cmd->add_option("--iters", sa.iterations_per_temperature, "iterations per temperature level");
  cmd->add_option("--tmin", sa.min_temperature, "final temperature (0 = 1e-3 x t0)");
  cmd->add_option("--restarts", sa.restarts, "independent restarts");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-depot rural postman planning with rechargeable vehicles and failure rescheduling"};
  app.require_subcommand(1);

  std::string in_path, out_path, plan_path, scen_path, log_path;
  std::uint64_t seed = 0;
  std::string depot_ratio = "1/5", required_ratio = "1/3";
  std::string wait = "0", r0, dr;
  SaConfig sa;
  bool timing = false;
  std::string carp_path;

  auto* convert = app.add_subcommand("convert", "convert a CARP benchmark file into an instance");
  convert->add_option("carp", in_path, "CARP file")->required();
  convert->add_option("output", out_path, "instance file to write")->required();
  convert->add_option("--seed", seed, "random seed")->required();
  convert->add_option("--depot-ratio", depot_ratio, "share of nodes that become depots");
  convert->add_option("--required-ratio", required_ratio, "share of edges that become required");

  auto* plan = app.add_subcommand("plan", "plan failure-free routes by simulated annealing");
  plan->add_option("instance", in_path, "instance file")->required();
  plan->add_option("output", out_path, "plan file to write");
  plan->add_option("--seed", seed, "random seed")->required();
  add_sa_flags(plan, sa);

  auto* gen = app.add_subcommand("gen-scenarios", "draw random failure scenarios for a plan");
  gen->add_option("instance", in_path, "instance file")->required();
  gen->add_option("plan", plan_path, "plan file")->required();
  gen->add_option("output", out_path, "scenario file to write");
  gen->add_option("--seed", seed, "random seed")->required();

  auto* sim = app.add_subcommand("simulate", "run missions with failures and auction rescheduling");
  sim->add_option("instance", in_path, "instance file")->required();
  sim->add_option("plan", plan_path, "plan file")->required();
  sim->add_option("scenarios", scen_path, "scenario file")->required();
  sim->add_option("--wait", wait, "wait time in millitime, or 'end'");
  sim->add_option("--r0", r0, "initial search radius (default C)");
  sim->add_option("--dr", dr, "search radius step (default C)");
  sim->add_option("-o,--out", out_path, "report file (JSON)");
  sim->add_option("--log", log_path, "auction log file (CSV)");

  auto* oracle = app.add_subcommand("oracle", "exact optimum of a small instance");
  oracle->add_option("instance", in_path, "instance file")->required();
  oracle->add_option("--scenarios", scen_path, "also solve with each scenario's failures known");
  oracle->add_option("-o,--out", out_path, "report file");

  auto* milp = app.add_subcommand("emit-milp", "write the MILP model in LP format");
  milp->add_option("instance", in_path, "instance file")->required();
  milp->add_option("output", out_path, ".lp file to write");
  milp->add_option("--scenarios", scen_path, "scenario file (adds failure rows)");
  std::string scenario_name;
  milp->add_option("--scenario", scenario_name, "scenario name within the file (default first)");

  auto* metrics = app.add_subcommand("metrics", "recompute derived columns of a report CSV");
  metrics->add_option("input", in_path, "report CSV")->required();
  metrics->add_option("-o,--out", out_path, "CSV to write");

  auto* bench = app.add_subcommand("bench", "plan, fail, reschedule and score one instance");
  auto* bench_src = bench->add_option_group("source");
  bench_src->add_option("--instance", in_path, "instance file");
  bench_src->add_option("--carp", carp_path, "CARP file, converted first");
  bench_src->require_option(1);
  bench->add_option("--seed", seed, "random seed")->required();
  bench->add_option("--depot-ratio", depot_ratio, "share of nodes that become depots");
  bench->add_option("--required-ratio", required_ratio, "share of edges that become required");
  bench->add_option("--wait", wait, "wait time in millitime, or 'end'");
  bench->add_option("--r0", r0, "initial search radius (default C)");
  bench->add_option("--dr", dr, "search radius step (default C)");
  bench->add_option("-o,--out", out_path, "metrics CSV to write");
  bench->add_flag("--timing", timing, "fill the execution-time columns");
  add_sa_flags(bench, sa);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*convert) {
      CarpFile carp = parse_carp(read_file(in_path));
      for (const auto& w : carp.warnings) std::cerr << "warning: " << w << '\n';
      const Instance inst = convert_to_instance(carp, seed, parse_ratio(depot_ratio), parse_ratio(required_ratio));
      write_output(out_path, serialize_instance(inst));
    } else if (*plan) {
      const Instance inst = load_instance(in_path);
      sa.seed = seed;
      const PlannerResult r = generate_initial_plan(inst, sa);
      write_output(out_path, format_plan(r.plan));
      std::cerr << "beta " << r.beta << '\n';
    } else if (*gen) {
      const Instance inst = load_instance(in_path);
      const FleetPlan p = parse_plan(read_file(plan_path), inst);
      write_output(out_path, format_scenarios(create_failure_scenarios(inst, p, seed)));
    } else if (*sim) {
      const Instance inst = load_instance(in_path);
      const FleetPlan p = parse_plan(read_file(plan_path), inst);
      const auto scenarios = parse_scenarios(read_file(scen_path), inst.vehicle_count);
      const DistanceTable dist(inst.graph);
      const DepotRouteTable table(inst, dist);
      const AuctionContext ctx(inst, dist, table);
      const SimConfig cfg{parse_wait(wait), auction_config(inst, r0, dr)};
      json reports = json::array();
      std::vector<AuctionLog> logs;
      for (const auto& s : scenarios) {
        const SimulationReport r = simulate(ctx, p, s, cfg);
        reports.push_back(report_json(inst, s, r));
        logs.insert(logs.end(), r.auction_logs.begin(), r.auction_logs.end());
      }
      write_output(out_path, reports.dump(2) + "\n");
      if (!log_path.empty()) write_output(log_path, format_auction_csv(logs));
    } else if (*oracle) {
      const Instance inst = load_instance(in_path);
      std::ostringstream os;
      auto emit = [&](const std::string& label, const OracleResult& r) {
        os << label << " beta " << r.beta_opt << '\n'
           << format_plan(r.plan) << "walk states " << r.walk_states << ", route states " << r.route_states
           << ", assignments " << r.assignments << "\n\n";
      };
      emit("no failures:", exact_optimum(inst));
      if (!scen_path.empty()) {
        for (const auto& s : parse_scenarios(read_file(scen_path), inst.vehicle_count)) {
          emit(s.name + ":", exact_optimum(inst, &s));
        }
      }
      write_output(out_path, os.str());
    } else if (*milp) {
      const Instance inst = load_instance(in_path);
      std::optional<FailureScenario> scenario;
      if (!scen_path.empty()) {
        for (const auto& s : parse_scenarios(read_file(scen_path), inst.vehicle_count)) {
          if (scenario_name.empty() || s.name == scenario_name) {
            scenario = s;
            break;
          }
        }
        if (!scenario) throw Error("scenario '" + scenario_name + "' not found");
      }
      write_output(out_path, emit_milp(inst, scenario ? &*scenario : nullptr));
    } else if (*metrics) {
      write_output(out_path, format_report(parse_report(read_file(in_path))));
    } else if (*bench) {
      Instance inst;
      if (!carp_path.empty()) {
        CarpFile carp = parse_carp(read_file(carp_path));
        for (const auto& w : carp.warnings) std::cerr << "warning: " << w << '\n';
        inst = convert_to_instance(carp, seed, parse_ratio(depot_ratio), parse_ratio(required_ratio));
      } else {
        inst = load_instance(in_path);
      }
      BenchConfig cfg;
      cfg.sa = sa;
      cfg.seed = seed;
      cfg.wait = parse_wait(wait);
      cfg.auction = auction_config(inst, r0, dr);
      cfg.timing = timing;
      write_output(out_path, format_report(run_bench(inst, cfg).rows));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
