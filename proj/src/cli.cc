// Copyright 2026 The Coalition Sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "coalition/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "coalition/format.h"
#include "coalition/generators.h"
#include "coalition/optimum.h"
#include "coalition/stability.h"

namespace coalition {

namespace {

// Rounds every floating-point value to 12 significant digits.
void round_numbers(nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) j = std::stod(format_number(v));
    return;
  }
  if (j.is_array() || j.is_object()) {
    for (auto& item : j) round_numbers(item);
  }
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::optional<Rational> exact_cost(const CoalitionStructure& p, const CostOracle& oracle) {
  Rational sum(0);
  for (Coalition g : p) {
    const std::optional<Rational> c = to_rational(oracle.cost(g));
    if (!c) return std::nullopt;
    sum += *c;
  }
  return sum;
}

CoalitionStructure structure_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of coalitions");
  std::vector<Coalition> out;
  for (const auto& g : j) {
    if (!g.is_array()) throw ParseError(what + ": expected an array of participant ids");
    out.push_back(Coalition::from_members(g.get<std::vector<ParticipantId>>()));
  }
  return CoalitionStructure(std::move(out));
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string path;
  std::string mechanism = "equal";
  std::string dynamics = "greedy";
  int max_steps = 10000;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string sidecar;
  std::string output;
  bool no_timestamp = false;
};

std::string analyze_text(const nlohmann::json& r) {
  std::ostringstream o;
  auto num = [](const nlohmann::json& v) { return v.is_number() ? format_number(v.get<double>()) : v.dump(); };
  o << "instance: " << r["instance"].get<std::string>() << "\n";
  o << "participants: " << r["n"] << "\n";
  o << "capacity: " << r["k"] << "\n";
  o << "mechanism: " << r["mechanism"].get<std::string>() << "\n";
  const auto& check = r["oracle_check"];
  o << "oracle check: " << (check["ok"].get<bool>() ? "ok" : "violations") << " (" << check["mode"].get<std::string>()
    << ", " << check["checked"] << " coalitions)\n";
  o << "method: " << r["method"].get<std::string>() << "\n";
  o << "status: " << r["status"].get<std::string>() << "\n";
  if (r.contains("cycle")) {
    o << "cycle:\n";
    for (const auto& step : r["cycle"]) {
      o << "  participant " << step["participant"] << " in " << step["coalition"].dump() << "\n";
    }
  }
  if (r.contains("structure")) {
    o << "structure: " << r["structure"].dump() << "\n";
    o << "structure cost: " << num(r["structure_cost"]) << "\n";
    o << "payments:\n";
    for (const auto& pv : r["payments"]) {
      o << "  " << pv["members"].dump() << ":";
      for (const auto& p : pv["payments"]) o << " " << num(p);
      o << "\n";
    }
  }
  if (r.contains("optimum")) {
    o << "optimum: " << num(r["optimum"]["cost"]) << " (" << r["optimum"]["method"].get<std::string>() << ")\n";
  }
  if (r.contains("spoa")) {
    const auto& s = r["spoa"];
    o << "worst stable cost: " << num(s["worst_stable_cost"]) << " (" << s["source"].get<std::string>() << ", "
      << s["stable_count"] << " structures)\n";
    o << "ratio: " << num(s["ratio"]);
    if (s.contains("ratio_rational")) o << " = " << s["ratio_rational"].get<std::string>();
    o << "\n";
  }
  if (r.contains("timestamp")) o << "timestamp: " << r["timestamp"].get<std::string>() << "\n";
  return o.str();
}

std::string analyze_csv(const nlohmann::json& r) {
  std::ostringstream o;
  o << spoa_csv_header() << "\n";
  o << r["instance"].get<std::string>() << ',' << r["mechanism"].get<std::string>() << ',' << r["k"] << ','
    << r["n"] << ',';
  if (r.contains("spoa")) {
    const auto& s = r["spoa"];
    o << format_number(s["worst_stable_cost"].get<double>()) << ',' << format_number(s["optimum_cost"].get<double>())
      << ',' << format_number(s["ratio"].get<double>());
  } else {
    o << ",,";
  }
  o << ',' << r["status"].get<std::string>() << "\n";
  return o.str();
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  const Instance instance = load_instance(opt.path);
  const Mechanism m = parse_mechanism(opt.mechanism);
  const int cap = std::min(instance.k, instance.n);

  nlohmann::json r;
  r["instance"] = instance.id;
  r["n"] = instance.n;
  r["k"] = instance.k;
  r["mechanism"] = to_string(m);

  ValidationOptions vo;
  vo.seed = opt.seed;
  vo.mode = instance.n <= 20 && count_subsets_up_to(instance.n, cap) <= 2'000'000 ? ValidationMode::kExhaustive
                                                                                 : ValidationMode::kSampled;
  const OracleReport check = validate_oracle(*instance.oracle, cap, vo);
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t q = 0; q < check.violations.size() && q < 10; ++q) {
    const OracleViolation& v = check.violations[q];
    violations.push_back({{"kind", to_string(v.kind)},
                          {"subset", v.subset.members()},
                          {"superset", v.superset.members()}});
  }
  r["oracle_check"] = {{"mode", vo.mode == ValidationMode::kExhaustive ? "exhaustive" : "sampled"},
                       {"ok", check.ok()},
                       {"checked", check.coalitions_checked},
                       {"violations", violations}};
  r["method"] = opt.dynamics;

  auto finish = [&](int code) {
    if (!opt.no_timestamp) r["timestamp"] = timestamp_now();
    round_numbers(r);
    std::string text;
    if (opt.format == "text") {
      text = analyze_text(r);
    } else if (opt.format == "csv") {
      text = analyze_csv(r);
    } else {
      text = r.dump(2) + "\n";
    }
    emit(text, opt.output, out);
    return code;
  };
  auto no_stable = [&](const std::optional<PreferenceCycle>& cycle, const std::string& why) {
    r["status"] = "no-stable-structure";
    if (cycle) r["cycle"] = to_json(*cycle);
    err << "no stable structure: " << why << "\n";
    return finish(kExitNoStable);
  };

  CoalitionStructure p;
  bool stable = false;
  if (opt.dynamics == "greedy") {
    try {
      p = greedy_stable(instance, m);
    } catch (const NoStableStructureError& e) {
      return no_stable(e.cycle(), e.what());
    }
    stable = true;
    r["status"] = "stable";
  } else {
    const StabilityReport rep = improvement_dynamics(instance, default_structure(instance.n), m, opt.max_steps);
    r["steps"] = rep.steps;
    if (rep.status == StabilityReport::Status::kCycle) {
      r["structure"] = to_json(rep.structure);
      return no_stable(rep.cycle, "improvement dynamics revisited a structure");
    }
    p = rep.structure;
    stable = rep.status == StabilityReport::Status::kStable;
    r["status"] = to_string(rep.status);
    if (rep.witness) r["witness"] = rep.witness->members();
  }
  r["structure"] = to_json(p);
  r["structure_cost"] = structure_cost(p, *instance.oracle);
  nlohmann::json payments = nlohmann::json::array();
  for (Coalition g : p) payments.push_back(to_json(pay(m, g, *instance.oracle)));
  r["payments"] = payments;

  nlohmann::json sidecar;
  if (!opt.sidecar.empty()) sidecar = nlohmann::json::parse(read_file(opt.sidecar));

  std::optional<OptimumResult> optimum;
  if (instance.n <= 22) {
    optimum = exact_optimum(instance);
  } else if (sidecar.contains("optimum")) {
    optimum = certify_optimum(instance, structure_from_json(sidecar["optimum"], "sidecar optimum"));
  }
  r["optimum_lower_bound"] = optimum_lower_bound(instance);
  if (!optimum) {
    r["optimum_note"] = "no exact optimum: more than 22 participants and no certified structure";
    return finish(kExitOk);
  }
  r["optimum"] = to_json(*optimum);

  std::vector<CoalitionStructure> known;
  std::string source;
  if (instance.n <= 12) {
    try {
      known = enumerate_stable_structures(instance, m);
    } catch (const ResourceLimitError&) {
      known.clear();
    }
    source = "enumeration";
  }
  if (known.empty()) {
    source = "known";
    if (stable) known.push_back(p);
    if (sidecar.contains("stable")) {
      const CoalitionStructure s = structure_from_json(sidecar["stable"], "sidecar stable");
      s.validate(instance.n, instance.k);
      if (is_stable(s, m, instance)) known.push_back(s);
    }
  }
  if (known.empty()) return finish(kExitOk);

  const CoalitionStructure* worst = nullptr;
  Money worst_cost = -kInfinity;
  for (const CoalitionStructure& s : known) {
    const Money c = structure_cost(s, *instance.oracle);
    if (c > worst_cost) {
      worst_cost = c;
      worst = &s;
    }
  }
  nlohmann::json spoa = {
      {"source", source},
      {"stable_count", known.size()},
      {"worst_stable", to_json(*worst)},
      {"worst_stable_cost", worst_cost},
      {"optimum_cost", optimum->cost},
      {"ratio", worst_cost / optimum->cost},
  };
  const std::optional<Rational> num = exact_cost(*worst, *instance.oracle);
  const std::optional<Rational> den = exact_cost(optimum->structure, *instance.oracle);
  if (num && den && den->numerator() != 0) spoa["ratio_rational"] = to_string(*num / *den);
  r["spoa"] = spoa;
  return finish(kExitOk);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  std::string what;
  std::string out;
  std::string sidecar;
  int k = 3;
  int s = 3;
  std::string form;
  std::string family = "table";
  int n = 8;
  std::uint64_t seed = 1;
  double overshoot = 0;
};

std::string default_sidecar_path(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + ".sidecar.json";
  }
  return out + ".sidecar.json";
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
  Generated g;
  if (opt.what == "equal-tight") {
    TightForm form = TightForm::kTable;
    if (opt.form == "usage-groups") {
      form = TightForm::kUsageGroups;
    } else if (!opt.form.empty() && opt.form != "table") {
      throw ArgumentError("equal-tight form must be table or usage-groups");
    }
    g = gen_equal_tight(opt.k, form);
  } else if (opt.what == "usage-lower") {
    g = gen_usage_lower(opt.k);
  } else if (opt.what == "taxi-cycle") {
    TaxiForm form = TaxiForm::kTables;
    if (opt.form == "geometric") {
      form = TaxiForm::kGeometric;
    } else if (!opt.form.empty() && opt.form != "tables") {
      throw ArgumentError("taxi-cycle form must be tables or geometric");
    }
    g = gen_taxi_cycle(opt.s, form);
  } else if (opt.what == "random") {
    RandomOptions ro;
    ro.overshoot = opt.overshoot;
    g = gen_random(parse_family(opt.family), opt.n, opt.k, opt.seed, ro);
  } else {
    throw ArgumentError("unknown generator '" + opt.what +
                        "' (expected equal-tight, usage-lower, taxi-cycle or random)");
  }
  const std::string sidecar = opt.sidecar.empty() ? default_sidecar_path(opt.out) : opt.sidecar;
  save_instance(g.instance, opt.out);
  nlohmann::json side = sidecar_json(g);
  round_numbers(side);
  write_file(sidecar, side.dump(2) + "\n");
  out << opt.out << "\n" << sidecar << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string config;
  int jobs = 1;
  std::string output;
  std::string summary;
};

struct SweepJob {
  RandomFamily family;
  int n;
  int k;
  Mechanism mechanism;
  std::uint64_t seed;
  double overshoot;
};

struct SweepRow {
  std::string line;
  bool ok = false;
  double ratio = 0;
};

template <typename T>
std::vector<T> as_list(const nlohmann::json& j, const std::string& field) {
  if (j.is_array()) return j.get<std::vector<T>>();
  if (j.is_null()) throw ParseError("sweep config: missing field '" + field + "'");
  return {j.get<T>()};
}

std::vector<SweepJob> sweep_jobs(const nlohmann::json& config) {
  std::vector<SweepJob> jobs;
  if (config.is_null() || (config.is_object() && config.empty())) return jobs;
  if (!config.is_object() || !config.contains("runs") || !config["runs"].is_array()) {
    throw ParseError("sweep config: expected an object with a 'runs' array");
  }
  int index = 0;
  for (const auto& run : config["runs"]) {
    const std::string where = "sweep config runs[" + std::to_string(index++) + "]";
    try {
      const RandomFamily family = parse_family(run.at("family").get<std::string>());
      const auto ns = as_list<int>(run.value("n", nlohmann::json()), "n");
      const auto ks = as_list<int>(run.value("K", nlohmann::json()), "K");
      nlohmann::json mech = run.contains("mechanisms") ? run["mechanisms"] : run.value("mechanism", nlohmann::json());
      const auto mechs = as_list<std::string>(mech, "mechanism");
      std::vector<std::uint64_t> seeds;
      const nlohmann::json& sj = run.at("seeds");
      if (sj.is_object()) {
        const auto start = sj.value("start", std::uint64_t{1});
        const auto count = sj.at("count").get<std::uint64_t>();
        for (std::uint64_t q = 0; q < count; ++q) seeds.push_back(start + q);
      } else {
        seeds = as_list<std::uint64_t>(sj, "seeds");
      }
      const double overshoot = run.value("overshoot", 0.0);
      for (int n : ns) {
        for (int k : ks) {
          for (const std::string& m : mechs) {
            for (std::uint64_t seed : seeds) jobs.push_back({family, n, k, parse_mechanism(m), seed, overshoot});
          }
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const ArgumentError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return jobs;
}

SweepRow run_job(const SweepJob& job) {
  SweepRow row;
  std::string id = "random-" + to_string(job.family) + "-n" + std::to_string(job.n) + "-k" + std::to_string(job.k) +
                   "-s" + std::to_string(job.seed);
  try {
    RandomOptions ro;
    ro.overshoot = job.overshoot;
    const Generated g = gen_random(job.family, job.n, job.k, job.seed, ro);
    id = g.instance.id;
    const SpoaResult s = empirical_spoa(g.instance, job.mechanism);
    row.line = spoa_csv_row(id, job.mechanism, job.k, job.n, s);
    row.ok = true;
    row.ratio = s.ratio;
  } catch (const NoStableStructureError&) {
    row.line = id + "," + to_string(job.mechanism) + "," + std::to_string(job.k) + "," + std::to_string(job.n) +
               ",,,,no-stable-structure";
  } catch (const std::exception& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), ',', ';');
    std::replace(what.begin(), what.end(), '\n', ' ');
    row.line = id + "," + to_string(job.mechanism) + "," + std::to_string(job.k) + "," + std::to_string(job.n) +
               ",,,,error: " + what;
  }
  return row;
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(opt.config);
  nlohmann::json config;
  try {
    config = text.find_first_not_of(" \t\r\n") == std::string::npos ? nlohmann::json() : nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("sweep config: " + std::string(e.what()));
  }
  const std::vector<SweepJob> jobs = sweep_jobs(config);
  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t q = next++; q < jobs.size(); q = next++) rows[q] = run_job(jobs[q]);
  };
  const int threads = std::max(1, std::min<int>(opt.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << spoa_csv_header() << "\n";
  for (const SweepRow& row : rows) csv << row.line << "\n";
  emit(csv.str(), opt.output, out);

  // Largest ratio per (mechanism, K).
  std::map<std::pair<std::string, int>, std::pair<int, double>> agg;
  for (std::size_t q = 0; q < jobs.size(); ++q) {
    auto& [runs, best] = agg[{to_string(jobs[q].mechanism), jobs[q].k}];
    if (runs == 0) best = -kInfinity;
    if (rows[q].ok) {
      ++runs;
      best = std::max(best, rows[q].ratio);
    }
  }
  std::ostringstream summary;
  summary << "mechanism,K,runs,max_ratio\n";
  for (const auto& [key, v] : agg) {
    summary << key.first << ',' << key.second << ',' << v.first << ','
            << (v.first > 0 ? format_number(v.second) : std::string()) << "\n";
  }
  if (opt.summary.empty()) {
    err << summary.str();
  } else {
    write_file(opt.summary, summary.str());
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalition formation and cost-sharing analysis", "coalition"};
  app.require_subcommand(1);

  AnalyzeOptions a;
  CLI::App* analyze = app.add_subcommand("analyze", "Find a stable structure and compare it with the optimum");
  analyze->add_option("instance", a.path, "Instance JSON file")->required();
  analyze->add_option("--mechanism", a.mechanism, "Cost-sharing mechanism")
      ->check(CLI::IsMember({"equal", "proportional", "egalitarian", "nash", "nash-unconstrained", "usage"}));
  analyze->add_option("--dynamics", a.dynamics, "greedy or improve")->check(CLI::IsMember({"greedy", "improve"}));
  analyze->add_option("--max-steps", a.max_steps, "Deviation limit for improve")->check(CLI::PositiveNumber);
  analyze->add_option("--format", a.format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
  analyze->add_option("--seed", a.seed, "Seed for sampled oracle checks");
  analyze->add_option("--sidecar", a.sidecar, "Sidecar naming certified structures");
  analyze->add_option("--output", a.output, "Write the report here instead of stdout");
  analyze->add_flag("--no-timestamp", a.no_timestamp, "Omit the timestamp field");

  GenerateOptions g;
  CLI::App* generate = app.add_subcommand("generate", "Write a generated instance and its sidecar");
  generate->add_option("generator", g.what, "equal-tight, usage-lower, taxi-cycle or random")->required();
  generate->add_option("--out", g.out, "Instance output file")->required();
  generate->add_option("--sidecar", g.sidecar, "Sidecar output file (default: <out>.sidecar.json)");
  generate->add_option("--K", g.k, "Capacity");
  generate->add_option("--s", g.s, "Ring length for taxi-cycle");
  generate->add_option("--form", g.form, "table|usage-groups (equal-tight), tables|geometric (taxi-cycle)");
  generate->add_option("--family", g.family, "Random family: table, hotel, taxi or pass");
  generate->add_option("--n", g.n, "Participants for random instances");
  generate->add_option("--seed", g.seed, "Seed for random instances");
  generate->add_option("--overshoot", g.overshoot, "Random tables: allowed excess over summed defaults");

  SweepOptions s;
  CLI::App* sweep = app.add_subcommand("sweep", "Run empirical SPoA over random instances");
  sweep->add_option("config", s.config, "Sweep config JSON")->required();
  sweep->add_option("--jobs", s.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  sweep->add_option("--output", s.output, "CSV output file (default: stdout)");
  sweep->add_option("--summary", s.summary, "Per (mechanism, K) maxima (default: stderr)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(a, out, err);
    if (generate->parsed()) return cmd_generate(g, out);
    return cmd_sweep(s, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const NoStableStructureError& e) {
    err << "no stable structure: " << e.what() << "\n";
    return kExitNoStable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace coalition
