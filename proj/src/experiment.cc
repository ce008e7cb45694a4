// Copyright 2026 The EquityRank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "equityrank/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace equityrank {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void WriteText(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double ParseReal(const std::string& s) {
  if (s.empty() || s == "nan") return kNaN;
  return std::stod(s);
}

json ScenarioToJson(const ScenarioSpec& s) {
  return {{"name", s.name},       {"ve_mean", s.ve_mean}, {"ve_sd", s.ve_sd},
          {"vb_mean", s.vb_mean}, {"vb_sd", s.vb_sd},     {"y_mean", s.y_mean},
          {"y_sd", s.y_sd}};
}

ScenarioSpec ScenarioFromJson(const json& j) {
  if (j.is_string()) return ScenarioByName(j.get<std::string>());
  ScenarioSpec s;
  s.name = j.value("name", std::string("Custom"));
  s.ve_mean = j.value("ve_mean", s.ve_mean);
  s.ve_sd = j.value("ve_sd", s.ve_sd);
  s.vb_mean = j.value("vb_mean", s.vb_mean);
  s.vb_sd = j.value("vb_sd", s.vb_sd);
  s.y_mean = j.value("y_mean", s.y_mean);
  s.y_sd = j.value("y_sd", s.y_sd);
  return s;
}

json GeneratorToJson(const GeneratorSpec& g) {
  return {{"n_users", g.n_users},
          {"n_items", g.n_items},
          {"n_providers", g.n_providers},
          {"group_size_skew", g.group_size_skew},
          {"latent_dim", g.latent_dim},
          {"sparsity", g.sparsity},
          {"seed", g.seed}};
}

GeneratorSpec GeneratorFromJson(const json& j) {
  GeneratorSpec g;
  g.n_users = j.value("n_users", g.n_users);
  g.n_items = j.value("n_items", g.n_items);
  g.n_providers = j.value("n_providers", g.n_providers);
  g.group_size_skew = j.value("group_size_skew", g.group_size_skew);
  g.latent_dim = j.value("latent_dim", g.latent_dim);
  g.sparsity = j.value("sparsity", g.sparsity);
  g.seed = j.value("seed", g.seed);
  return g;
}

std::string TimingsHeader() { return "mode,policy,alpha,seed,wall_ms"; }

std::string Key(SimMode mode, const std::string& policy, double alpha) {
  return ModeName(mode) + "|" + policy + "|" + FormatReal(alpha);
}

void MeanSd(const std::vector<double>& values, double& mean, double& sd) {
  if (values.empty()) {
    mean = sd = kNaN;
    return;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    sd = 0.0;
    return;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
}

std::string SummaryCsv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "mode,policy,alpha,runs,effectiveness_mean,effectiveness_sd,"
      "unfairness_mean,unfairness_sd,msd_mean,msd_sd,pearson_mean,pearson_sd\n";
  for (const SummaryRow& s : summary) {
    out += ModeName(s.mode) + "," + s.policy + "," + FormatReal(s.alpha) + "," +
           std::to_string(s.runs) + "," + FormatReal(s.effectiveness_mean) +
           "," + FormatReal(s.effectiveness_sd) + "," +
           FormatReal(s.unfairness_mean) + "," + FormatReal(s.unfairness_sd) +
           "," + FormatReal(s.msd_mean) + "," + FormatReal(s.msd_sd) + "," +
           FormatReal(s.pearson_mean) + "," + FormatReal(s.pearson_sd) + "\n";
  }
  return out;
}

std::string EnvelopeCsv(const std::vector<TradeoffPoint>& envelope) {
  std::string out = "threshold,effectiveness\n";
  for (const auto& p : envelope) {
    out += FormatReal(p.unfairness) + "," + FormatReal(p.effectiveness) + "\n";
  }
  return out;
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

// --- plan -------------------------------------------------------------------

ExperimentPlan PlanFromJson(const json& j) {
  ExperimentPlan plan;
  if (j.contains("dataset") && !j["dataset"].is_null()) {
    plan.dataset = j["dataset"].get<std::string>();
  }
  plan.label = j.value("label", std::string());
  if (j.contains("generator")) plan.generator = GeneratorFromJson(j["generator"]);
  if (j.contains("scenario")) plan.scenario = ScenarioFromJson(j["scenario"]);
  if (j.contains("policies")) {
    plan.policies.clear();
    for (const auto& p : j["policies"]) {
      plan.policies.push_back(ParsePolicy(p.get<std::string>()));
    }
  }
  if (j.contains("alpha_grid")) {
    plan.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
  }
  if (j.contains("seeds")) {
    plan.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  }
  if (j.contains("sim")) {
    const json& s = j["sim"];
    SimConfig& c = plan.sim;
    if (s.contains("mode")) c.mode = ParseMode(s["mode"].get<std::string>());
    c.list_size = s.value("list_size", c.list_size);
    c.steps = s.value("steps", c.steps);
    c.gamma = s.value("gamma", c.gamma);
    c.cutoff = s.value("cutoff", c.cutoff);
    c.prefilter_size = s.value("prefilter_size", c.prefilter_size);
    c.prefilter_noise = s.value("prefilter_noise", c.prefilter_noise);
    c.checkpoint_every = s.value("checkpoint_every", c.checkpoint_every);
  }
  if (j.contains("out")) plan.out = j["out"].get<std::string>();
  plan.workers = j.value("workers", plan.workers);
  plan.timing_in_results = j.value("timing_in_results", plan.timing_in_results);
  return plan;
}

json PlanToJson(const ExperimentPlan& plan) {
  json j;
  j["dataset"] = plan.dataset ? json(plan.dataset->string()) : json(nullptr);
  j["label"] = plan.label;
  j["generator"] = GeneratorToJson(plan.generator);
  j["scenario"] = ScenarioToJson(plan.scenario);
  j["policies"] = json::array();
  for (PolicyKind k : plan.policies) j["policies"].push_back(PolicyName(k));
  j["alpha_grid"] = plan.alpha_grid;
  j["seeds"] = plan.seeds;
  j["sim"] = {{"mode", ModeName(plan.sim.mode)},
              {"list_size", plan.sim.list_size},
              {"steps", plan.sim.steps},
              {"gamma", plan.sim.gamma},
              {"cutoff", plan.sim.cutoff},
              {"prefilter_size", plan.sim.prefilter_size},
              {"prefilter_noise", plan.sim.prefilter_noise},
              {"checkpoint_every", plan.sim.checkpoint_every}};
  j["out"] = plan.out.string();
  j["workers"] = plan.workers;
  j["timing_in_results"] = plan.timing_in_results;
  return j;
}

ExperimentPlan LoadPlan(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadText(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return PlanFromJson(j);
}

void ValidatePlan(const ExperimentPlan& plan) {
  if (plan.policies.empty()) throw std::invalid_argument("plan has no policies");
  if (plan.alpha_grid.empty()) throw std::invalid_argument("plan has no alpha grid");
  if (plan.seeds.empty()) throw std::invalid_argument("plan has no seeds");
  for (double a : plan.alpha_grid) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("alpha grid values must be finite and >= 0");
    }
  }
  if (plan.workers == 0) throw std::invalid_argument("workers must be positive");
  ValidateSimConfig(plan.sim);
  if (!plan.dataset) ValidateGeneratorSpec(plan.generator);
}

std::vector<double> EffectiveAlphas(PolicyKind kind,
                                    const std::vector<double>& grid) {
  if (!UsesAlpha(kind)) return {0.0};
  std::vector<double> out;
  for (double a : grid) {
    if (kind == PolicyKind::kMMFStar && a > 1.0) continue;
    out.push_back(a);
  }
  return out;
}

std::string PolicySlug(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kTopK: return "topk";
    case PolicyKind::kPoorK: return "poork";
    case PolicyKind::kFairCoStar: return "fairco_star";
    case PolicyKind::kMMFStar: return "mmf_star";
    case PolicyKind::kEquityRank: return "equityrank";
    case PolicyKind::kEquityRankV: return "equityrank_v";
  }
  return "unknown";
}

Dataset ResolveDataset(const ExperimentPlan& plan) {
  if (plan.dataset) return load_dataset(*plan.dataset);
  return generate_dataset(plan.generator, plan.scenario);
}

// --- generate / run -----------------------------------------------------------

void cmd_generate(const GeneratorSpec& spec, const ScenarioSpec& scenario,
                  const std::filesystem::path& dir, bool force) {
  ValidateGeneratorSpec(spec);
  if (std::filesystem::exists(dir) && !force) {
    throw std::runtime_error("output " + dir.string() +
                             " exists; pass --force to overwrite");
  }
  const Dataset ds = generate_dataset(spec, scenario);
  save_dataset(ds, dir);
  json manifest = {{"generator", GeneratorToJson(spec)},
                   {"scenario", ScenarioToJson(scenario)},
                   {"seed", spec.seed}};
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");
}

SingleRun cmd_run(const ExperimentPlan& plan, const PolicyConfig& policy,
                  std::uint64_t seed) {
  ValidateSimConfig(plan.sim);
  const Dataset ds = ResolveDataset(plan);
  SimConfig cfg = plan.sim;
  cfg.seed = seed;
  SingleRun out;
  if (cfg.mode == SimMode::kOffline) {
    out.result = run_offline(ds, policy, cfg);
  } else {
    OnlineRun run = run_online(ds, policy, cfg);
    out.result = run.result;
    out.series = std::move(run.series);
  }
  std::filesystem::create_directories(plan.out);
  WriteText(plan.out / "results.csv", RunResultCsvHeader() + "\n" +
                                          RunResultCsvRow(out.result, true) + "\n");
  if (cfg.mode == SimMode::kOnline) {
    WriteText(plan.out / "timeseries.csv", TimeSeriesCsv(out.series));
  }
  return out;
}

// --- sweep ------------------------------------------------------------------

std::vector<SummaryRow> Summarize(const std::vector<SweepRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> groups;
  for (const SweepRow& row : rows) {
    if (!row.error.empty()) continue;
    const RunResult& r = row.result;
    const std::string key = Key(r.mode, r.policy, r.alpha);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<SummaryRow> summary;
  for (const std::string& key : order) {
    const auto& runs = groups[key];
    SummaryRow s;
    s.mode = runs.front()->mode;
    s.policy = runs.front()->policy;
    s.alpha = runs.front()->alpha;
    s.runs = runs.size();
    std::vector<double> eff, unf, msd, rho, wall;
    for (const RunResult* r : runs) {
      if (!std::isnan(r->effectiveness)) eff.push_back(r->effectiveness);
      if (!std::isnan(r->unfairness)) unf.push_back(r->unfairness);
      if (!std::isnan(r->msd)) msd.push_back(r->msd);
      if (!std::isnan(r->pearson)) rho.push_back(r->pearson);
      wall.push_back(r->wall_seconds * 1000.0);
    }
    MeanSd(eff, s.effectiveness_mean, s.effectiveness_sd);
    MeanSd(unf, s.unfairness_mean, s.unfairness_sd);
    MeanSd(msd, s.msd_mean, s.msd_sd);
    MeanSd(rho, s.pearson_mean, s.pearson_sd);
    double wall_sd = 0.0;
    MeanSd(wall, s.wall_ms_mean, wall_sd);
    summary.push_back(s);
  }
  return summary;
}

std::vector<TradeoffPoint> PolicyEnvelope(const std::vector<SummaryRow>& summary,
                                          const std::string& policy) {
  std::vector<TradeoffPoint> points;
  for (const SummaryRow& s : summary) {
    if (s.policy != policy) continue;
    if (std::isnan(s.unfairness_mean) || std::isnan(s.effectiveness_mean)) continue;
    points.push_back({s.unfairness_mean, s.effectiveness_mean});
  }
  return tradeoff_envelope(points);
}

SweepOutcome cmd_sweep(const ExperimentPlan& plan) {
  ValidatePlan(plan);
  const Dataset ds = ResolveDataset(plan);

  struct Job {
    PolicyConfig policy;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (PolicyKind kind : plan.policies) {
    for (double alpha : EffectiveAlphas(kind, plan.alpha_grid)) {
      for (std::uint64_t seed : plan.seeds) {
        jobs.push_back({PolicyConfig{kind, alpha, TieBreak::kRelevanceThenLowestId},
                        seed});
      }
    }
  }

  SweepOutcome outcome;
  outcome.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      SweepRow& row = outcome.rows[i];
      SimConfig cfg = plan.sim;
      cfg.seed = job.seed;
      try {
        row.result = cfg.mode == SimMode::kOffline
                         ? run_offline(ds, job.policy, cfg)
                         : run_online(ds, job.policy, cfg).result;
      } catch (const std::exception& e) {
        row.error = e.what();
        RunResult& r = row.result;
        r.mode = cfg.mode;
        r.policy = PolicyName(job.policy.kind);
        r.alpha = UsesAlpha(job.policy.kind) ? job.policy.alpha : 0.0;
        r.seed = job.seed;
        r.effectiveness = r.unfairness = r.msd = r.pearson = kNaN;
        r.unfairness_defined = r.pearson_defined = false;
      }
    }
  };
  const std::size_t threads = std::min(plan.workers, std::max<std::size_t>(1, jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  outcome.summary = Summarize(outcome.rows);

  std::filesystem::create_directories(plan.out);
  std::string results = RunResultCsvHeader() + "\n";
  std::string timings = TimingsHeader() + "\n";
  std::string errors = "mode,policy,alpha,seed,error\n";
  bool any_error = false;
  for (const SweepRow& row : outcome.rows) {
    const RunResult& r = row.result;
    results += RunResultCsvRow(r, plan.timing_in_results) + "\n";
    timings += ModeName(r.mode) + "," + r.policy + "," + FormatReal(r.alpha) +
               "," + std::to_string(r.seed) + "," +
               FormatReal(r.wall_seconds * 1000.0) + "\n";
    if (!row.error.empty()) {
      any_error = true;
      std::string message = row.error;
      std::replace(message.begin(), message.end(), ',', ';');
      std::replace(message.begin(), message.end(), '\n', ' ');
      errors += ModeName(r.mode) + "," + r.policy + "," + FormatReal(r.alpha) +
                "," + std::to_string(r.seed) + "," + message + "\n";
    }
  }
  WriteText(plan.out / "results.csv", results);
  WriteText(plan.out / "timings.csv", timings);
  WriteText(plan.out / "summary.csv", SummaryCsv(outcome.summary));
  if (any_error) {
    WriteText(plan.out / "errors.csv", errors);
  } else {
    std::filesystem::remove(plan.out / "errors.csv");
  }
  for (PolicyKind kind : plan.policies) {
    WriteText(plan.out / ("envelope_" + PolicySlug(kind) + ".csv"),
              EnvelopeCsv(PolicyEnvelope(outcome.summary, PolicyName(kind))));
  }
  WriteText(plan.out / "plan.json", PlanToJson(plan).dump(2) + "\n");
  return outcome;
}

// --- report -----------------------------------------------------------------

std::vector<SweepRow> ReadResultsCsv(const std::filesystem::path& path) {
  std::istringstream in(ReadText(path));
  std::string line;
  if (!std::getline(in, line) || line != RunResultCsvHeader()) {
    throw std::runtime_error(path.string() + ": missing results header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = Split(line, ',');
    if (f.size() != 9) {
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    }
    SweepRow row;
    RunResult& r = row.result;
    r.mode = ParseMode(f[0]);
    r.policy = f[1];
    r.alpha = ParseReal(f[2]);
    r.seed = std::stoull(f[3]);
    r.effectiveness = ParseReal(f[4]);
    r.unfairness = ParseReal(f[5]);
    r.unfairness_defined = !std::isnan(r.unfairness);
    r.msd = ParseReal(f[6]);
    r.pearson = ParseReal(f[7]);
    r.pearson_defined = !std::isnan(r.pearson);
    const double wall_ms = ParseReal(f[8]);
    r.wall_seconds = std::isnan(wall_ms) ? 0.0 : wall_ms / 1000.0;
    if (std::isnan(r.effectiveness)) row.error = "failed";
    rows.push_back(row);
  }
  return rows;
}

std::string TradeoffSvg(
    const std::string& title,
    const std::vector<std::pair<std::string, std::vector<TradeoffPoint>>>& curves) {
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double min_pos = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ylo = std::numeric_limits<double>::infinity();
  double yhi = -std::numeric_limits<double>::infinity();
  for (const auto& [name, pts] : curves) {
    for (const auto& p : pts) {
      if (p.unfairness > 0.0) min_pos = std::min(min_pos, p.unfairness);
      xmax = std::max(xmax, p.unfairness);
      ylo = std::min(ylo, p.effectiveness);
      yhi = std::max(yhi, p.effectiveness);
    }
  }
  if (!std::isfinite(min_pos)) min_pos = 1.0;
  // Zero unfairness is drawn one decade left of the smallest positive value.
  const double floor_x = min_pos / 10.0;
  auto lx = [&](double u) { return std::log10(std::max(u, floor_x)); };
  double x0 = lx(floor_x), x1 = lx(std::max(xmax, min_pos));
  if (x1 - x0 < 1e-9) x1 = x0 + 1.0;
  if (!std::isfinite(ylo)) ylo = 0.0, yhi = 1.0;
  if (yhi - ylo < 1e-9) yhi = ylo + 1.0;
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  auto px = [&](double u) {
    return kLeft + (lx(u) - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double e) {
    return kTop + (yhi - e) / (yhi - ylo) * (kHeight - kTop - kBottom);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
      << " " << kHeight << "\">\n"
      << "  <title>" << XmlEscape(title) << "</title>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "  <line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
      << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    const double x = px(std::pow(10.0, d));
    svg << "  <line x1=\"" << num(x) << "\" y1=\"" << kHeight - kBottom
        << "\" x2=\"" << num(x) << "\" y2=\"" << kHeight - kBottom + 5
        << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << num(x) << "\" y=\"" << kHeight - kBottom + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double e = ylo + (yhi - ylo) * i / 4.0;
    svg << "  <text x=\"" << kLeft - 8 << "\" y=\"" << num(py(e) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(e) << "</text>\n";
  }
  svg << "  <text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
      << kHeight - 15 << "\" font-size=\"13\" text-anchor=\"middle\">"
      << "unfairness (log scale)</text>\n"
      << "  <text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (kTop + kHeight - kBottom) / 2 << ")\">effectiveness</text>\n"
      << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" font-size=\"15\" "
      << "text-anchor=\"middle\">" << XmlEscape(title) << "</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& [name, pts] = curves[c];
    const char* color = kColors[c % (sizeof(kColors) / sizeof(kColors[0]))];
    // Staircase: hold each envelope value until the next threshold.
    std::string points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) {
        points += num(px(pts[i].unfairness)) + "," + num(py(pts[i - 1].effectiveness)) + " ";
      }
      points += num(px(pts[i].unfairness)) + "," + num(py(pts[i].effectiveness)) + " ";
    }
    if (!points.empty()) points.pop_back();
    svg << "  <polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    for (const auto& p : pts) {
      svg << "  <circle cx=\"" << num(px(p.unfairness)) << "\" cy=\""
          << num(py(p.effectiveness)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 20.0 * static_cast<double>(c);
    svg << "  <rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << ly - 8
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n"
        << "  <text x=\"" << kWidth - kRight + 32 << "\" y=\"" << ly + 2
        << "\" font-size=\"12\">" << XmlEscape(name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

ReportTables cmd_report(const std::filesystem::path& dir) {
  const auto results_path = dir / "results.csv";
  if (!std::filesystem::exists(results_path)) {
    throw std::runtime_error("no results.csv in " + dir.string());
  }
  std::vector<SweepRow> rows = ReadResultsCsv(results_path);
  if (std::filesystem::exists(dir / "timings.csv")) {
    std::istringstream in(ReadText(dir / "timings.csv"));
    std::string line;
    std::getline(in, line);
    for (std::size_t i = 0; i < rows.size() && std::getline(in, line); ++i) {
      const auto f = Split(line, ',');
      if (f.size() == 5) rows[i].result.wall_seconds = ParseReal(f[4]) / 1000.0;
    }
  }
  const std::vector<SummaryRow> summary = Summarize(rows);
  if (summary.empty()) throw std::runtime_error("results in " + dir.string() + " are empty");

  std::string title = dir.filename().string();
  if (std::filesystem::exists(dir / "plan.json")) {
    const json plan = json::parse(ReadText(dir / "plan.json"));
    const std::string label = plan.value("label", std::string());
    if (!label.empty()) title = label;
  }

  ReportTables tables;
  std::vector<std::string> policies;
  for (const SummaryRow& s : summary) {
    if (std::find(policies.begin(), policies.end(), s.policy) == policies.end()) {
      policies.push_back(s.policy);
    }
  }
  for (const std::string& policy : policies) {
    const SummaryRow* best = nullptr;
    for (const SummaryRow& s : summary) {
      if (s.policy != policy || std::isnan(s.unfairness_mean)) continue;
      if (!best || s.unfairness_mean < best->unfairness_mean) best = &s;
    }
    if (best) tables.min_unfairness.push_back(*best);
  }
  std::stable_sort(tables.min_unfairness.begin(), tables.min_unfairness.end(),
                   [](const SummaryRow& a, const SummaryRow& b) {
                     return a.unfairness_mean < b.unfairness_mean;
                   });

  std::string min_csv =
      "policy,alpha,unfairness_mean,unfairness_sd,effectiveness_mean,wall_ms_mean\n";
  std::string align_csv = "policy,alpha,msd_mean,msd_sd,pearson_mean,pearson_sd\n";
  std::string md = "# " + title + "\n\n## Minimum unfairness\n\n"
                   "| policy | alpha | unfairness (sd) | effectiveness | time (ms) |\n"
                   "|---|---|---|---|---|\n";
  for (const SummaryRow& s : tables.min_unfairness) {
    min_csv += s.policy + "," + FormatReal(s.alpha) + "," +
               FormatReal(s.unfairness_mean) + "," + FormatReal(s.unfairness_sd) +
               "," + FormatReal(s.effectiveness_mean) + "," +
               FormatReal(s.wall_ms_mean) + "\n";
    align_csv += s.policy + "," + FormatReal(s.alpha) + "," +
                 FormatReal(s.msd_mean) + "," + FormatReal(s.msd_sd) + "," +
                 FormatReal(s.pearson_mean) + "," + FormatReal(s.pearson_sd) + "\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "| %s | %g | %.4g (%.2g) | %.4f | %.3f |\n",
                  s.policy.c_str(), s.alpha, s.unfairness_mean, s.unfairness_sd,
                  s.effectiveness_mean, s.wall_ms_mean);
    md += buf;
  }
  md += "\n## Gain-ratio alignment at the minimum-unfairness alpha\n\n"
        "| policy | MSD (sd) | Pearson (sd) |\n|---|---|---|\n";
  for (const SummaryRow& s : tables.min_unfairness) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "| %s | %.4g (%.2g) | %.3f (%.2g) |\n",
                  s.policy.c_str(), s.msd_mean, s.msd_sd, s.pearson_mean,
                  s.pearson_sd);
    md += buf;
  }

  std::vector<std::pair<std::string, std::vector<TradeoffPoint>>> curves;
  for (const std::string& policy : policies) {
    curves.emplace_back(policy, PolicyEnvelope(summary, policy));
  }
  tables.svg = TradeoffSvg(title, curves);

  WriteText(dir / "min_unfairness.csv", min_csv);
  WriteText(dir / "alignment.csv", align_csv);
  WriteText(dir / "tradeoff.svg", tables.svg);
  WriteText(dir / "report.md", md);
  return tables;
}

}  // namespace equityrank
