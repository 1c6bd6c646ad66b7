// Copyright 2026 The cojudge Authors
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

#include "cojudge/report.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "cojudge/edit_distance.h"
#include "cojudge/io.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

using OJson = nlohmann::ordered_json;

OJson Opt(std::optional<double> const& v) { return v ? OJson(*v) : OJson(nullptr); }

std::string Fmt(std::optional<double> const& v) { return v ? FormatDouble(*v) : std::string(); }

OJson MetricsJson(JudgeMetrics const& m) {
  OJson j;
  j["judge"] = m.judge;
  j["status"] = "verified";
  j["n_val"] = m.n_val;
  j["n_test"] = m.n_test;
  j["roc_auc"] = Opt(m.roc_auc);
  j["pr_auc"] = Opt(m.pr_auc);
  j["log_loss"] = Opt(m.log_loss);
  j["brier"] = Opt(m.brier);
  j["ece"] = Opt(m.ece);
  if (m.threshold) {
    j["t_star"] = m.threshold->t_star;
    j["mcc_val"] = m.threshold->mcc_val;
    j["mcc_test"] = m.threshold->mcc_test;
    j["degenerate_val"] = m.threshold->degenerate_val;
  } else {
    j["t_star"] = nullptr;
    j["mcc_val"] = nullptr;
    j["mcc_test"] = nullptr;
    j["degenerate_val"] = nullptr;
  }
  OJson absent = OJson::object();
  for (auto const& [k, v] : m.absent_reasons) absent[k] = v;
  j["absent"] = absent;
  return j;
}

OJson AbsentJudgeJson(std::string const& judge, std::string const& reason) {
  OJson j;
  j["judge"] = judge;
  j["status"] = "absent";
  OJson absent = OJson::object();
  for (auto const* k : {"roc_auc", "pr_auc", "log_loss", "brier", "ece", "t_star", "mcc_val",
                        "mcc_test"}) {
    j[k] = nullptr;
    absent[k] = reason;
  }
  j["reason"] = reason;
  j["absent"] = absent;
  return j;
}

OJson MetricsBlock(EvaluationBlock const& eval) {
  OJson out = OJson::array();
  for (auto const& m : eval.metrics) out.push_back(MetricsJson(m));
  for (auto const& [j, reason] : eval.absent) out.push_back(AbsentJudgeJson(j, reason));
  return out;
}

OJson AgreementBlock(EvaluationBlock const& eval) {
  OJson j;
  if (!eval.agreement) {
    j["fleiss_kappa"] = nullptr;
    j["absent"] = {{"fleiss_kappa", eval.agreement_absent_reason}};
    return j;
  }
  auto const& a = *eval.agreement;
  j["judges"] = a.judges;
  j["items"] = a.items;
  j["fleiss_kappa"] = a.judges.size() >= 2 && a.items > 0 ? OJson(a.fleiss) : OJson(nullptr);
  j["mean_pairwise_kappa"] = a.pairwise.empty() ? OJson(nullptr) : OJson(a.mean_pairwise);
  j["max_pairwise_kappa"] = a.pairwise.empty() ? OJson(nullptr) : OJson(a.max_pairwise);
  j["min_pairwise_kappa"] = a.pairwise.empty() ? OJson(nullptr) : OJson(a.min_pairwise);
  OJson pairs = OJson::array();
  for (auto const& p : a.pairwise) {
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"kappa", p.kappa}, {"degenerate", p.degenerate}});
  }
  j["pairwise"] = pairs;
  j["matrix"] = a.matrix;
  j["flags"] = a.flags;
  OJson absent = OJson::object();
  if (a.judges.size() < 2) absent["fleiss_kappa"] = "fewer than two verified judges";
  j["absent"] = absent;
  return j;
}

OJson NedJson(NedSummary const& s) {
  OJson j;
  j["n"] = s.n;
  j["mean"] = s.n ? OJson(s.mean) : OJson(nullptr);
  j["std"] = s.n > 1 ? OJson(s.std) : OJson(nullptr);
  j["histogram"] = s.histogram;
  return j;
}

struct Summary {
  std::size_t n = 0;
  double mean = 0;
  double median = 0;
};

Summary Summarize(std::vector<double> v) {
  Summary s;
  s.n = v.size();
  if (v.empty()) return s;
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  auto const mid = v.size() / 2;
  s.median = v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
  return s;
}

OJson SummaryJson(Summary const& s) {
  return {{"n", s.n},
          {"mean", s.n ? OJson(s.mean) : OJson(nullptr)},
          {"median", s.n ? OJson(s.median) : OJson(nullptr)}};
}

std::vector<std::size_t> TenBins(std::vector<double> const& v) {
  std::vector<std::size_t> h(10, 0);
  for (double x : v) ++h[std::min<std::size_t>(9, static_cast<std::size_t>(std::max(0.0, x) * 10))];
  return h;
}

}  // namespace

EvaluationBlock ComputeEvaluation(PredictionTable const& table,
                                  std::map<std::string, std::string> const& absent,
                                  int ece_bins) {
  EvaluationBlock eval;
  eval.judges = table.judges;
  eval.absent = absent;
  std::map<std::string, double> thresholds;
  for (std::size_t j = 0; j < table.judges.size(); ++j) {
    auto m = EvaluateJudge(table, j, ece_bins);
    if (m.threshold) thresholds[m.judge] = m.threshold->t_star;
    std::vector<double> p;
    std::vector<int> y;
    for (auto const& r : table.wide_rows) {
      if (r.split != Split::kTest) continue;
      p.push_back(r.scores[j].p_ac);
      y.push_back(r.label);
    }
    if (auto s = ScoredSet::Create(p, y); s.ok()) {
      eval.curves[m.judge] = {RocCurve(*s), PrCurve(*s), ReliabilityBins(*s, ece_bins)};
    }
    eval.metrics.push_back(std::move(m));
  }
  std::vector<WideRow> test_rows;
  for (auto const& r : table.wide_rows) {
    if (r.split == Split::kTest) test_rows.push_back(r);
  }
  if (thresholds.size() != table.judges.size()) {
    eval.agreement_absent_reason = "a verified judge has no threshold (empty VAL or TEST split)";
  } else if (table.judges.empty()) {
    eval.agreement_absent_reason = "no verified judges";
  } else {
    auto a = ComputeAgreement(table.judges, test_rows, table.judges, thresholds);
    if (a.ok()) {
      eval.agreement = *std::move(a);
    } else {
      eval.agreement_absent_reason = std::string(a.status().message());
    }
  }
  return eval;
}

TrajectoryBlock ComputeTrajectory(std::span<Attempt const> attempts,
                                  std::map<std::string, ParticipantContext> const& contexts,
                                  PredictionTable const& table,
                                  std::map<GroupKey, Split> const& splits,
                                  PipelineConfig const& config) {
  TrajectoryBlock b;
  b.points = MeanConfidence(table);
  b.outcomes = OutcomesFromAttempts(attempts);
  int k_max = 0;
  for (auto const& o : b.outcomes) k_max = std::max(k_max, o.horizon);
  b.success = SuccessAtTurn(b.outcomes, k_max);
  b.survival = KaplanMeier(b.outcomes);
  b.solved_rate = SolvedRate(attempts);

  std::map<std::string, std::string> docs;
  for (auto const& [u, rate] : b.solved_rate) {
    auto it = contexts.find(u);
    docs[u] = it == contexts.end() ? std::string() : it->second.aggregated;
  }
  auto tfidf = TfidfEmbed(docs);
  if (tfidf.ok()) {
    b.prompt_map = TsneProject(tfidf->vectors, config.seed);
  } else {
    b.prompt_map_absent_reason = std::string(tfidf.status().message());
  }
  b.ned_test = PromptCodeNed(attempts, splits, Split::kTest);

  std::map<std::tuple<std::string, std::string, int>, std::optional<double>> delta;
  for (auto const& p : b.points) delta[{p.participant, p.problem, p.turn}] = p.delta_p_bar;

  std::size_t i = 0;
  while (i < attempts.size()) {
    std::size_t j = i;
    std::vector<Attempt> traj;
    while (j < attempts.size() && attempts[j].participant == attempts[i].participant &&
           attempts[j].problem == attempts[i].problem) {
      traj.push_back(attempts[j++]);
    }
    std::sort(traj.begin(), traj.end(), [](auto const& x, auto const& y) { return x.turn < y.turn; });
    auto const prompt = ConsecutiveChurn(traj, ChurnField::kPrompt);
    auto const code = ConsecutiveChurn(traj, ChurnField::kCode);
    auto const cb = CbChurn(traj, config.codebleu);
    for (std::size_t k = 0; k < cb.size(); ++k) {
      auto const& a = traj[k + 1];
      auto it = delta.find({a.participant, a.problem, a.turn});
      b.churn.push_back({a.participant, a.problem, a.turn, prompt[k].value, code[k].value,
                         cb[k].value, it == delta.end() ? std::nullopt : it->second,
                         cb[k].degraded});
    }
    auto conv = CbConvergence(traj, config.codebleu);
    b.convergence.insert(b.convergence.end(), conv.begin(), conv.end());
    i = j;
  }
  return b;
}

std::string JudgeMetricsJson(EvaluationBlock const& eval) {
  return MetricsBlock(eval).dump(2) + "\n";
}

std::string AgreementJson(EvaluationBlock const& eval) {
  return AgreementBlock(eval).dump(2) + "\n";
}

std::string NedSummaryJson(NedSummary const& ned) { return NedJson(ned).dump(2) + "\n"; }

std::string ReportToJson(EvaluationReport const& r) {
  OJson j;
  j["schema"] = std::string(kReportSchema);
  auto const& e = r.evaluation;
  OJson absent = OJson::object();
  for (auto const& [judge, reason] : e.absent) absent[judge] = reason;
  j["judges"] = {{"verified", e.judges}, {"absent", absent}};
  j["metrics"] = MetricsBlock(e);
  j["agreement"] = AgreementBlock(e);

  auto const& t = r.trajectory;
  OJson traj;
  traj["trajectories"] = t.outcomes.size();
  std::size_t solved = 0;
  for (auto const& o : t.outcomes) solved += o.event();
  traj["solved_trajectories"] = solved;
  OJson success = OJson::array();
  for (auto const& s : t.success) success.push_back({{"turn", s.turn}, {"success", s.value}});
  traj["success_at_turn"] = success;
  OJson survival = OJson::array();
  for (auto const& s : t.survival) {
    survival.push_back({{"time", s.time},
                        {"at_risk", s.at_risk},
                        {"events", s.events},
                        {"censored", s.censored},
                        {"survival", s.survival}});
  }
  traj["survival"] = survival;
  std::vector<double> ned_prompt, ned_code, cb;
  std::size_t degraded = 0;
  for (auto const& c : t.churn) {
    ned_prompt.push_back(c.ned_prompt);
    ned_code.push_back(c.ned_code);
    cb.push_back(c.cb_churn);
    degraded += c.degraded;
  }
  traj["churn"] = {{"ned_prompt", SummaryJson(Summarize(ned_prompt))},
                   {"ned_code", SummaryJson(Summarize(ned_code))},
                   {"cb_churn", SummaryJson(Summarize(cb))},
                   {"degraded_pairs", degraded}};
  std::vector<double> conv;
  for (auto const& c : t.convergence) conv.push_back(c.conv_cb);
  traj["convergence"] = {{"summary", SummaryJson(Summarize(conv))}, {"histogram", TenBins(conv)}};
  traj["ned_prompt_code_test"] = NedJson(t.ned_test);
  std::vector<double> rates;
  for (auto const& [u, v] : t.solved_rate) rates.push_back(v);
  traj["solved_rate"] = SummaryJson(Summarize(rates));
  if (t.prompt_map) {
    traj["prompt_map"] = {{"method", t.prompt_map->method},
                          {"fallback", t.prompt_map->fallback},
                          {"points", t.prompt_map->coords.size()},
                          {"perplexity", t.prompt_map->perplexity}};
  } else {
    traj["prompt_map"] = {{"method", nullptr}, {"absent", t.prompt_map_absent_reason}};
  }
  j["trajectory"] = traj;

  OJson grammars = OJson::object();
  for (auto const& [lang, g] : r.codebleu.grammar_overrides) {
    grammars[lang] = g ? OJson(std::string(GrammarName(*g))) : OJson(nullptr);
  }
  j["codebleu"] = {{"weights", r.codebleu.weights},
                   {"components", {"ngram", "weighted_ngram", "syntax", "dataflow"}},
                   {"max_ngram", r.codebleu.max_ngram},
                   {"keyword_weight", r.codebleu.keyword_weight},
                   {"grammar_overrides", grammars}};

  auto const& p = r.provenance;
  OJson artifacts = OJson::object();
  for (auto const& [name, sha] : p.artifacts) artifacts[name] = sha;
  j["provenance"] = {{"tool_version", p.tool_version},
                     {"config_sha256", p.config_sha256},
                     {"data_sha256", p.data_sha256},
                     {"artifacts", artifacts},
                     {"timestamps",
                      {{"data_first", p.data_first_timestamp}, {"data_last", p.data_last_timestamp}}},
                     {"degraded_flags", p.degraded_flags}};
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> TrajectoryArtifacts(TrajectoryBlock const& b) {
  std::map<std::string, std::string> out;
  std::string s = CsvRow({"participant", "problem", "turn", "p_bar", "delta_p_bar"});
  for (auto const& p : b.points) {
    s += CsvRow({p.participant, p.problem, std::to_string(p.turn), FormatDouble(p.p_bar),
                 Fmt(p.delta_p_bar)});
  }
  out["trajectory_points.csv"] = std::move(s);

  s = CsvRow({"participant", "problem", "observed_time", "event", "horizon", "first_success"});
  for (auto const& o : b.outcomes) {
    auto const* t = std::get_if<int>(&o.first_success);
    s += CsvRow({o.participant, o.problem, std::to_string(o.observed_time()),
                 o.event() ? "1" : "0", std::to_string(o.horizon),
                 t ? std::to_string(*t) : "never"});
  }
  out["outcomes.csv"] = std::move(s);

  s = CsvRow({"time", "at_risk", "events", "censored", "survival"});
  for (auto const& p : b.survival) {
    s += CsvRow({std::to_string(p.time), std::to_string(p.at_risk), std::to_string(p.events),
                 std::to_string(p.censored), FormatDouble(p.survival)});
  }
  out["survival.csv"] = std::move(s);

  s = CsvRow({"turn", "success"});
  for (auto const& p : b.success) s += CsvRow({std::to_string(p.turn), FormatDouble(p.value)});
  out["success_at_turn.csv"] = std::move(s);

  s = CsvRow({"participant", "z1", "z2", "solved_rate"});
  if (b.prompt_map) {
    for (auto const& [u, z] : b.prompt_map->coords) {
      auto it = b.solved_rate.find(u);
      s += CsvRow({u, FormatDouble(z[0]), FormatDouble(z[1]),
                   it == b.solved_rate.end() ? "" : FormatDouble(it->second)});
    }
  }
  out["prompt_map.csv"] = std::move(s);

  out["ned_summary.json"] = NedSummaryJson(b.ned_test);

  s = CsvRow({"participant", "problem", "turn", "ned_prompt", "ned_code", "cb_churn",
              "delta_p_bar", "degraded"});
  for (auto const& c : b.churn) {
    s += CsvRow({c.participant, c.problem, std::to_string(c.turn), FormatDouble(c.ned_prompt),
                 FormatDouble(c.ned_code), FormatDouble(c.cb_churn), Fmt(c.delta_p_bar),
                 c.degraded ? "1" : "0"});
  }
  out["churn.csv"] = std::move(s);

  s = CsvRow({"participant", "problem", "turn", "conv_cb", "reference_turn"});
  for (auto const& c : b.convergence) {
    s += CsvRow({c.participant, c.problem, std::to_string(c.turn), FormatDouble(c.conv_cb),
                 std::to_string(c.reference_turn)});
  }
  out["convergence.csv"] = std::move(s);
  return out;
}

std::map<std::string, std::string> PlotData(EvaluationReport const& r) {
  std::map<std::string, std::string> out;
  auto const& e = r.evaluation;
  std::string roc = CsvRow({"judge", "fpr", "tpr", "threshold"});
  std::string pr = CsvRow({"judge", "recall", "precision", "threshold"});
  std::string rel = CsvRow({"judge", "bin", "lower", "upper", "count", "mean_confidence", "accuracy"});
  for (auto const& judge : e.judges) {
    auto it = e.curves.find(judge);
    if (it == e.curves.end()) continue;
    for (auto const& p : it->second.roc) {
      roc += CsvRow({judge, FormatDouble(p.x), FormatDouble(p.y), FormatDouble(p.threshold)});
    }
    for (auto const& p : it->second.pr) {
      pr += CsvRow({judge, FormatDouble(p.x), FormatDouble(p.y), FormatDouble(p.threshold)});
    }
    for (auto const& b : it->second.reliability) {
      rel += CsvRow({judge, std::to_string(b.index), FormatDouble(b.lower), FormatDouble(b.upper),
                     std::to_string(b.count), b.count ? FormatDouble(b.mean_confidence) : "",
                     b.count ? FormatDouble(b.accuracy) : ""});
    }
  }
  out["roc_points.csv"] = std::move(roc);
  out["pr_points.csv"] = std::move(pr);
  out["reliability_bins.csv"] = std::move(rel);

  std::string kappa = CsvRow({"judge_a", "judge_b", "kappa"});
  if (e.agreement && !e.agreement->matrix.empty()) {
    auto const& a = *e.agreement;
    for (std::size_t i = 0; i < a.judges.size(); ++i) {
      for (std::size_t j = 0; j < a.judges.size(); ++j) {
        kappa += CsvRow({a.judges[i], a.judges[j], FormatDouble(a.matrix[i][j])});
      }
    }
  }
  out["kappa_matrix.csv"] = std::move(kappa);

  auto const& t = r.trajectory;
  std::string struggle = CsvRow({"participant", "problem", "turn", "p_bar"});
  for (auto const& p : t.points) {
    struggle += CsvRow({p.participant, p.problem, std::to_string(p.turn), FormatDouble(p.p_bar)});
  }
  out["struggle_curves.csv"] = std::move(struggle);

  std::string surv = CsvRow({"time", "at_risk", "events", "censored", "survival"});
  for (auto const& p : t.survival) {
    surv += CsvRow({std::to_string(p.time), std::to_string(p.at_risk), std::to_string(p.events),
                    std::to_string(p.censored), FormatDouble(p.survival)});
  }
  out["survival_curve.csv"] = std::move(surv);

  std::string succ = CsvRow({"turn", "success"});
  for (auto const& p : t.success) succ += CsvRow({std::to_string(p.turn), FormatDouble(p.value)});
  out["success_at_turn.csv"] = std::move(succ);

  std::string scatter = CsvRow({"participant", "problem", "turn", "ned_code", "cb_churn", "delta_p_bar"});
  for (auto const& c : t.churn) {
    scatter += CsvRow({c.participant, c.problem, std::to_string(c.turn), FormatDouble(c.ned_code),
                       FormatDouble(c.cb_churn), Fmt(c.delta_p_bar)});
  }
  out["churn_scatter.csv"] = std::move(scatter);

  std::vector<double> conv;
  for (auto const& c : t.convergence) conv.push_back(c.conv_cb);
  auto const hist = TenBins(conv);
  std::string ch = CsvRow({"lower", "upper", "count"});
  for (std::size_t b = 0; b < hist.size(); ++b) {
    ch += CsvRow({FormatDouble(static_cast<double>(b) / 10), FormatDouble(static_cast<double>(b + 1) / 10),
                  std::to_string(hist[b])});
  }
  out["convergence_hist.csv"] = std::move(ch);
  return out;
}

absl::Status EmitPlotData(EvaluationReport const& report, std::filesystem::path const& dir) {
  for (auto const& [name, body] : PlotData(report)) {
    if (auto s = WriteFileAtomic(dir / name, body); !s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace cojudge
