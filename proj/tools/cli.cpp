#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>

#include "tgfd/error.hpp"
#include "tgfd/evaluation.hpp"
#include "tgfd/foundations.hpp"
#include "tgfd/graph_io.hpp"
#include "tgfd/parallel.hpp"
#include "tgfd/report.hpp"
#include "tgfd/tgfd_parser.hpp"

namespace tgfd {

namespace {

struct Inputs {
  std::string graph;
  std::string changes;
  std::string tgfds;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool with_tgfds = true) {
  cmd->add_option("--graph", in.graph, "initial snapshot")->required();
  cmd->add_option("--changes", in.changes, "change sets for timestamps 2..T");
  if (with_tgfds) cmd->add_option("--tgfds", in.tgfds, "rule file")->required();
}

DetectionMode parse_mode(const std::string& m) {
  if (m == "gfd") return DetectionMode::kGfd;
  if (m == "upper-only") return DetectionMode::kUpperOnly;
  return DetectionMode::kTgfd;
}

// Writes to path, or to out when path is empty.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  body(f);
}

void write_report(std::ostream& os, const std::string& format, const DetectionResult& r, const std::vector<Tgfd>& rules,
                  const TemporalGraph& g) {
  if (format == "text")
    write_text_report(os, r, rules, g);
  else
    write_json_report(os, r, rules, g);
}

void write_run_report(std::ostream& os, const RunReport& r) {
  os << "bounds t_l=" << r.initial.bounds.t_l << " t_u=" << r.initial.bounds.t_u << " jobs=" << r.initial.jobs.size()
     << '\n';
  for (const auto& s : r.supersteps) {
    os << "superstep t=" << s.t << " makespan=" << s.makespan << " coordinator_violations=" << s.coordinator_violations
       << '\n';
    for (const auto& w : s.workers) {
      os << "  worker " << w.worker << " jobs=" << w.jobs << " time=" << w.time << " shipped=" << w.shipped_edges
         << " matches=" << w.matches << " local_violations=" << w.local_violations << '\n';
    }
  }
  for (const auto& e : r.rebalances) {
    os << "rebalance after t=" << e.t << " trigger=\"" << e.trigger << "\" jobs=" << e.jobs_before << "->"
       << e.jobs_after << " relocated_edges=" << e.relocated_edges << " overhead=" << e.overhead << '\n';
  }
  os << "total simulated_time=" << r.simulated_time << " rebalance_overhead=" << r.rebalance_overhead
     << " rebalances=" << r.rebalances.size() << " violations=" << r.violations.size() << '\n';
}

void write_plan(std::ostream& os, const JobPlan& p) {
  os << "bounds t_l=" << p.bounds.t_l << " t_u=" << p.bounds.t_u << '\n';
  for (std::size_t j = 0; j < p.jobs.size(); ++j) {
    const Job& job = p.jobs[j];
    os << "job " << job.name << " tgfd=" << job.tgfd << " home=" << job.worker_id
       << " worker=" << p.assignment.worker_of[j] << " size=" << job.estimated_size << " ccost=" << job.ccost
       << " vertices=" << job.region.size() << " joblets=" << job.joblets.size() << '\n';
  }
  for (std::size_t w = 0; w < p.assignment.load.size(); ++w) os << "worker " << w << " load=" << p.assignment.load[w] << '\n';
  os << "makespan " << p.assignment.makespan << " comm_cost " << p.assignment.comm_cost << '\n';
}

std::string interval_text(Interval iv) { return "(" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + ")"; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal graph functional dependency checker", "tgfd"};
  app.require_subcommand(1);

  Inputs in;
  std::string out_path, format = "text", mode = "tgfd";
  std::uint64_t seed = 1;

  auto* detect = app.add_subcommand("detect", "sequential violation detection");
  add_inputs(detect, in);
  detect->add_option("--out", out_path);
  detect->add_option("--format", format)->check(CLI::IsMember({"text", "json", "jsonlike"}));
  detect->add_option("--mode", mode)->check(CLI::IsMember({"tgfd", "gfd", "upper-only"}));

  ParallelOptions popts;
  std::string time_model = "size", run_report_path;
  std::vector<int> force;
  auto* dpar = app.add_subcommand("detect-parallel", "simulated parallel detection");
  add_inputs(dpar, in);
  dpar->add_option("--out", out_path);
  dpar->add_option("--format", format)->check(CLI::IsMember({"text", "json", "jsonlike"}));
  dpar->add_option("--mode", mode)->check(CLI::IsMember({"tgfd", "gfd", "upper-only"}));
  dpar->add_option("--workers", popts.workers)->check(CLI::PositiveNumber);
  dpar->add_option("--zeta", popts.zeta)->check(CLI::NonNegativeNumber);
  dpar->add_option("--tl", popts.bounds.t_l, "lower job-time bound; derived when --tu is absent");
  dpar->add_option("--tu", popts.bounds.t_u, "upper job-time bound");
  dpar->add_option("--time-model", time_model)->check(CLI::IsMember({"wall", "size"}));
  dpar->add_option("--seed", seed);
  dpar->add_option("--ship-cost", popts.ship_cost_per_edge);
  dpar->add_option("--force-rebalance", force, "supersteps after which to rebalance");
  dpar->add_option("--report", run_report_path, "run report file");

  std::string sat_rules;
  auto* sat = app.add_subcommand("sat", "satisfiability of a rule set");
  sat->add_option("--tgfds", sat_rules)->required();

  std::string sigma_path, phi_path;
  auto* implies = app.add_subcommand("implies", "whether a rule set implies a rule");
  implies->add_option("--tgfds", sigma_path)->required();
  implies->add_option("--phi", phi_path, "file holding the implied rule")->required();

  InjectOptions iopts;
  bool no_positive = false;
  std::string out_graph, out_changes, ledger_path;
  auto* inject = app.add_subcommand("inject", "inject errors into a temporal graph");
  add_inputs(inject, in);
  inject->add_option("--err", iopts.err_rate)->check(CLI::Range(0.0, 1.0));
  inject->add_option("--seed", seed);
  inject->add_flag("--negative", iopts.negative);
  inject->add_flag("--no-positive", no_positive);
  inject->add_flag("--strict", iopts.strict);
  inject->add_option("--out-graph", out_graph)->required();
  inject->add_option("--out-changes", out_changes)->required();
  inject->add_option("--ledger", ledger_path);

  auto* eval = app.add_subcommand("eval", "inject errors, detect and score");
  add_inputs(eval, in);
  eval->add_option("--err", iopts.err_rate)->check(CLI::Range(0.0, 1.0));
  eval->add_option("--seed", seed);
  eval->add_flag("--negative", iopts.negative);
  eval->add_flag("--no-positive", no_positive);
  eval->add_option("--mode", mode)->check(CLI::IsMember({"tgfd", "gfd", "upper-only"}));
  eval->add_option("--out", out_path);

  SynthParams sp;
  std::string profile = "uniform";
  std::vector<std::string> hotspot;
  auto* gen = app.add_subcommand("gen", "generate a synthetic temporal graph");
  gen->add_option("--vertices", sp.vertices);
  gen->add_option("--edges", sp.edges);
  gen->add_option("--types", sp.types);
  gen->add_option("--labels", sp.labels);
  gen->add_option("--attrs", sp.attrs);
  gen->add_option("--domain", sp.domain);
  gen->add_option("--T", sp.T);
  gen->add_option("--chg", sp.chg_rate);
  gen->add_option("--profile", profile)->check(CLI::IsMember({"uniform", "skewed-au", "skewed-ed", "skewed-ei"}));
  gen->add_option("--hotspot", hotspot, "vertex ids the changes are confined to");
  gen->add_option("--seed", seed);
  gen->add_option("--out-graph", out_graph)->required();
  gen->add_option("--out-changes", out_changes)->required();

  int plan_at = 1;
  auto* plan = app.add_subcommand("plan", "print the job assignment without detecting");
  add_inputs(plan, in);
  plan->add_option("--workers", popts.workers)->check(CLI::PositiveNumber);
  plan->add_option("--tl", popts.bounds.t_l);
  plan->add_option("--tu", popts.bounds.t_u);
  plan->add_option("--seed", seed);
  plan->add_option("--at", plan_at, "snapshot to plan on");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*detect || *dpar) {
      TemporalGraph g = load_temporal_graph(in.graph, in.changes);
      auto rules = apply_mode(normalize(load_tgfds(in.tgfds)), parse_mode(mode));
      for (const auto& r : rules) validate(r);
      DetectionResult result;
      if (*detect) {
        result = detect_sequential(g, rules);
      } else {
        popts.seed = seed;
        popts.time_model = time_model == "wall" ? TimeModel::kWall : TimeModel::kSize;
        popts.force_rebalance_at.insert(force.begin(), force.end());
        RunReport rr = run_parallel(g, rules, popts);
        result.violations = rr.violations;
        if (!run_report_path.empty()) emit(run_report_path, out, [&](std::ostream& os) { write_run_report(os, rr); });
      }
      emit(out_path, out, [&](std::ostream& os) { write_report(os, format, result, rules, g); });
      return 0;
    }
    if (*sat) {
      SatResult r = check_satisfiability(normalize(load_tgfds(sat_rules)));
      if (r.satisfiable) {
        out << "satisfiable\n";
        return 0;
      }
      out << "unsatisfiable\n";
      if (r.witness) {
        out << "conflict anchor=" << r.witness->anchor << " " << to_string(r.witness->first) << " vs "
            << to_string(r.witness->second) << " gaps=" << interval_text(r.witness->gaps) << '\n';
      }
      return 3;
    }
    if (*implies) {
      auto sigma = load_tgfds(sigma_path);
      auto phis = load_tgfds(phi_path);
      if (phis.size() != 1) throw SyntaxError(0, "--phi must hold exactly one rule");
      ImplicationResult r = check_implication(sigma, phis.front());
      out << (r.implied ? "implied" : "not implied") << '\n';
      for (const auto& l : phis.front().y) {
        out << "closure " << to_string(l) << " derivable on";
        if (r.derivable.empty()) out << " none";
        for (const auto& iv : r.derivable.intervals()) out << ' ' << interval_text(iv);
        out << '\n';
      }
      return 0;
    }
    if (*inject || *eval) {
      std::ifstream gin(in.graph);
      if (!gin) throw Error("cannot open " + in.graph);
      GraphData base = parse_snapshot(gin);
      std::vector<ChangeSet> changes;
      if (!in.changes.empty()) {
        std::ifstream cin(in.changes);
        if (!cin) throw Error("cannot open " + in.changes);
        changes = parse_changes(cin);
      }
      auto rules = normalize(load_tgfds(in.tgfds));
      iopts.seed = seed;
      iopts.positive = !no_positive;
      Injected inj = inject_errors(base, changes, rules, iopts);
      TemporalGraph dirty = build_graph(inj.base, inj.changes);
      if (*inject) {
        emit(out_graph, out, [&](std::ostream& os) { write_snapshot(os, inj.base); });
        emit(out_changes, out, [&](std::ostream& os) { write_changes(os, inj.changes); });
        if (!ledger_path.empty())
          emit(ledger_path, out, [&](std::ostream& os) { write_ledger(os, inj.ledger, rules, dirty); });
        return 0;
      }
      auto detected = detect_sequential(dirty, apply_mode(rules, parse_mode(mode))).violations;
      Metrics m = score(detected, inj.ledger);
      emit(out_path, out, [&](std::ostream& os) {
        os << std::setprecision(6) << "mode " << mode << '\n'
           << "pool " << inj.ledger.pool << " injected " << inj.ledger.gamma_plus.size() << " detected " << m.detected
           << " true_positives " << m.true_positives << '\n'
           << "precision " << m.precision << "\nrecall " << m.recall << "\nf1 " << m.f1 << '\n';
        if (m.fpr) os << "fpr " << *m.fpr << '\n';
        os << "cross_snapshot_fraction " << inj.ledger.cross_snapshot_fraction() << '\n';
      });
      return 0;
    }
    if (*gen) {
      sp.seed = seed;
      sp.profile = parse_profile(profile);
      sp.hotspot = hotspot;
      SyntheticGraph sg = generate_synthetic(sp);
      emit(out_graph, out, [&](std::ostream& os) { write_snapshot(os, sg.base); });
      emit(out_changes, out, [&](std::ostream& os) { write_changes(os, sg.changes); });
      return 0;
    }
    if (*plan) {
      TemporalGraph g = load_temporal_graph(in.graph, in.changes);
      auto rules = normalize(load_tgfds(in.tgfds));
      if (plan_at < 1 || plan_at > g.T()) throw std::invalid_argument("--at must name a snapshot");
      popts.seed = seed;
      JobPlan p = plan_jobs(g, rules, popts, plan_at);
      write_plan(out, p);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tgfd
