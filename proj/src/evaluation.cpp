// SPDX-License-Identifier: Apache-2.0
#include "cop/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cop/errors.hpp"
#include "cop/session.hpp"
#include "cop/text.hpp"

namespace cop::eval {

namespace {

const char* yn(bool b) { return b ? "Y" : "N"; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string(), {{"path", path.string()}});
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, "malformed JSON in " + path.string(), {{"path", path.string()}});
  return j;
}

std::optional<int> optional_revision(const Json& j, const char* key, const std::string& task) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<int>() < 0) {
    throw Error(ErrorCode::Validation, std::string(key) + " must be a non-negative integer or null",
                {{"task_id", task}});
  }
  return it->get<int>();
}

std::string readability_cell(const std::optional<Percent>& p) { return p ? p->str() : "NA"; }

Json readability_value(const std::optional<Percent>& p) { return p ? Json(p->value()) : Json("NA"); }

Json errors_json(const std::vector<CellError>& errors) {
  Json arr = Json::array();
  for (const auto& e : errors) arr.push_back({{"task_id", e.task_id}, {"error", e.error}});
  return arr;
}

std::vector<CellError> collect_errors(const std::vector<TaskResult>& results) {
  std::vector<CellError> out;
  for (const auto& r : results) {
    if (r.error) out.push_back({r.task_id, *r.error});
  }
  return out;
}

std::string element_answer(const RequirementsDocument& gold, Element e) {
  auto v = gold.get(e);
  return v && !text::trim(*v).empty() ? *v : "Not applicable";
}

}  // namespace

Percent Percent::of(std::int64_t num, std::int64_t den) {
  if (num < 0 || den <= 0) {
    throw Error(ErrorCode::OutOfRange, "percentage needs num >= 0 and den > 0", {{"num", num}, {"den", den}});
  }
  return Percent{(2000 * num + den) / (2 * den)};
}

std::string Percent::str() const {
  std::int64_t a = tenths < 0 ? -tenths : tenths;
  return std::string(tenths < 0 ? "-" : "") + std::to_string(a / 10) + "." + std::to_string(a % 10);
}

std::string Percent::delta(Percent a, Percent b) {
  Percent d{a.tenths - b.tenths};
  return (d.tenths >= 0 ? "+" : "") + d.str();
}

int primary_for_secondary(int secondary_category) {
  if (secondary_category >= 1 && secondary_category <= 3) return 1;
  if (secondary_category >= 4 && secondary_category <= 6) return 2;
  if (secondary_category >= 7 && secondary_category <= 8) return 3;
  return 0;
}

std::string_view primary_category_name(int primary_category) {
  switch (primary_category) {
    case 1: return "Data Preparation and Preprocessing";
    case 2: return "Data Analysis";
    case 3: return "Data Output and Visualization";
    default: return "";
  }
}

void EvalTask::validate() const {
  if (id.empty()) throw Error(ErrorCode::Validation, "task id is empty");
  if (text::trim(requirement_text).empty()) {
    throw Error(ErrorCode::Validation, "task has no requirement text", {{"task_id", id}});
  }
  const int expected = primary_for_secondary(secondary_category);
  if (expected == 0) {
    throw Error(ErrorCode::Validation, "secondary category must be 1..8", {{"task_id", id}});
  }
  if (primary_category != expected) {
    throw Error(ErrorCode::Validation,
                "secondary category " + std::to_string(secondary_category) + " belongs to primary category " +
                    std::to_string(expected),
                {{"task_id", id}});
  }
}

Json EvalTask::to_json() const {
  Json j = {{"id", id},
            {"primary_category", primary_category},
            {"secondary_category", secondary_category},
            {"requirement_text", requirement_text},
            {"gold", gold.to_json()}};
  if (!aliases.empty()) {
    Json a = Json::object();
    for (const auto& [e, list] : aliases) a[std::string(element_name(e))] = list;
    j["alias_sets"] = a;
  }
  return j;
}

EvalTask EvalTask::from_json(const Json& j) {
  EvalTask t;
  try {
    t.id = j.at("id").get<std::string>();
    t.primary_category = j.at("primary_category").get<int>();
    t.secondary_category = j.at("secondary_category").get<int>();
    t.requirement_text = j.at("requirement_text").get<std::string>();
    t.gold = RequirementsDocument::from_json(j.at("gold"));
    if (auto a = j.find("alias_sets"); a != j.end()) {
      for (const auto& [name, list] : a->items()) {
        auto e = element_from_name(name);
        if (!e) throw Error(ErrorCode::Validation, "unknown element in alias_sets: " + name, {{"task_id", t.id}});
        t.aliases[*e] = list.get<std::vector<std::string>>();
      }
    }
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::Validation, std::string("malformed task: ") + ex.what(), {{"task_id", t.id}});
  }
  t.validate();
  return t;
}

std::vector<EvalTask> corpus_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Validation, "corpus must be a JSON array of tasks");
  std::vector<EvalTask> tasks;
  for (const auto& item : j) tasks.push_back(EvalTask::from_json(item));
  return tasks;
}

std::vector<EvalTask> load_corpus(const std::filesystem::path& path) { return corpus_from_json(read_json_file(path)); }

void Verdict::validate() const {
  if (correct && !executable) {
    throw Error(ErrorCode::Validation, "a program that does not run cannot be correct", {{"task_id", task_id}});
  }
}

Json Verdict::to_json() const {
  return {{"task_id", task_id}, {"executable", executable}, {"correct", correct},
          {"source", source == VerdictSource::External ? "external" : "simulated"}};
}

Verdict Verdict::from_json(const Json& j) {
  Verdict v;
  try {
    v.task_id = j.at("task_id").get<std::string>();
    v.executable = j.at("executable").get<bool>();
    v.correct = j.value("correct", false);
    v.source = j.value("source", std::string("external")) == "simulated" ? VerdictSource::Simulated
                                                                          : VerdictSource::External;
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::Validation, std::string("malformed verdict: ") + ex.what());
  }
  v.validate();
  return v;
}

MatchCount match_entities(const RequirementsDocument& pred, const RequirementsDocument& gold,
                          const AliasSets* aliases) {
  MatchCount m;
  for (auto e : kAllElements) {
    const auto& g = gold.get(e);
    if (!g || text::trim(*g).empty()) continue;
    ++m.applicable;
    const auto& p = pred.get(e);
    if (!p) continue;
    const auto key = text::normalize_entity(*p);
    bool hit = key == text::normalize_entity(*g);
    if (!hit && aliases != nullptr) {
      if (auto it = aliases->find(e); it != aliases->end()) {
        hit = std::any_of(it->second.begin(), it->second.end(),
                          [&](const std::string& alias) { return text::normalize_entity(alias) == key; });
      }
    }
    if (hit) ++m.matched;
  }
  if (m.applicable == 0) throw Error(ErrorCode::Validation, "gold document has no applicable elements");
  return m;
}

Percent score_matchability(const RequirementsDocument& pred, const RequirementsDocument& gold,
                           const AliasSets* aliases) {
  return match_entities(pred, gold, aliases).percent();
}

Percent score_executability(const std::vector<Verdict>& verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::EmptyVerdicts, "no verdicts to score");
  auto n = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.executable; });
  return Percent::of(n, static_cast<std::int64_t>(verdicts.size()));
}

Percent score_accuracy(const std::vector<Verdict>& verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::EmptyVerdicts, "no verdicts to score");
  auto n = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.executable && v.correct; });
  return Percent::of(n, static_cast<std::int64_t>(verdicts.size()));
}

int trimmed_sum(const ExpertScores& scores) {
  for (int s : scores) {
    if (s < 1 || s > 10) throw Error(ErrorCode::OutOfRange, "expert scores must be in 1..10", {{"score", s}});
  }
  auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  return std::accumulate(scores.begin(), scores.end(), 0) - *lo - *hi;
}

Percent score_readability(const ExpertScores& scores) { return Percent::of(trimmed_sum(scores), 30); }

std::optional<Percent> mean_readability(const std::vector<ExpertScores>& per_task) {
  if (per_task.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (const auto& s : per_task) total += trimmed_sum(s);
  return Percent::of(total, 30 * static_cast<std::int64_t>(per_task.size()));
}

ReadabilityScores readability_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Validation, "readability file must map task ids to five scores");
  ReadabilityScores out;
  for (const auto& [task, scores] : j.items()) {
    if (!scores.is_array() || scores.size() != 5) {
      throw Error(ErrorCode::Validation, "exactly five expert scores are required", {{"task_id", task}});
    }
    ExpertScores s{};
    for (std::size_t i = 0; i < 5; ++i) {
      if (!scores[i].is_number_integer()) throw Error(ErrorCode::Validation, "scores must be integers", {{"task_id", task}});
      s[i] = scores[i].get<int>();
    }
    trimmed_sum(s);
    out[task] = s;
  }
  return out;
}

ReadabilityScores load_readability(const std::filesystem::path& path) {
  return readability_from_json(read_json_file(path));
}

VerdictScript::VerdictScript(std::map<std::string, VerdictRule> rules) : rules_(std::move(rules)) {}

void VerdictScript::set(const std::string& task_id, VerdictRule rule) { rules_[task_id] = rule; }

VerdictScript VerdictScript::from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Validation, "verdict file must be a JSON array");
  VerdictScript script;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("task_id")) {
      throw Error(ErrorCode::Validation, "every verdict entry needs a task_id");
    }
    const auto task = item.at("task_id").get<std::string>();
    VerdictRule rule;
    if (item.contains("executable")) {
      auto v = Verdict::from_json(item);
      if (v.executable) rule.first_executable_revision = 0;
      if (v.correct) rule.first_correct_revision = 0;
      rule.source = v.source;
    } else {
      rule.first_correct_revision = optional_revision(item, "first_correct_revision", task);
      rule.first_executable_revision = item.contains("first_executable_revision")
                                           ? optional_revision(item, "first_executable_revision", task)
                                           : rule.first_correct_revision;
      if (rule.first_correct_revision &&
          (!rule.first_executable_revision || *rule.first_executable_revision > *rule.first_correct_revision)) {
        throw Error(ErrorCode::Validation, "code must run no later than it becomes correct", {{"task_id", task}});
      }
    }
    script.rules_[task] = rule;
  }
  return script;
}

VerdictScript VerdictScript::load(const std::filesystem::path& path) { return from_json(read_json_file(path)); }

Verdict VerdictScript::verdict(const std::string& task_id, int revision) const {
  Verdict v{task_id, false, false, VerdictSource::Simulated};
  auto it = rules_.find(task_id);
  if (it == rules_.end()) return v;
  const auto& r = it->second;
  v.source = r.source;
  v.executable = r.first_executable_revision && revision >= *r.first_executable_revision;
  v.correct = v.executable && r.first_correct_revision && revision >= *r.first_correct_revision;
  return v;
}

Json TaskResult::to_json() const {
  Json j = {{"task_id", task_id},
            {"config", config.to_json()},
            {"completed", completed},
            {"phase", final_phase},
            {"matched", match.matched},
            {"applicable", match.applicable},
            {"matchability", match.applicable > 0 ? match.percent().value() : 0.0},
            {"verdict", verdict.to_json()},
            {"revisions", revisions},
            {"exhausted", exhausted}};
  j["error"] = error ? *error : Json(nullptr);
  return j;
}

TaskResult run_task(const EvalTask& task, const AblationConfig& config, const Engine& engine,
                    const VerdictScript& verdicts) {
  TaskResult result;
  result.task_id = task.id;
  result.config = config;
  result.verdict = {task.id, false, false, VerdictSource::Simulated};

  ManualClock clock(engine.clock_epoch);
  std::unique_ptr<llm::Backend> backend = engine.backend_factory ? engine.backend_factory() : nullptr;
  if (!backend || engine.kbs == nullptr) {
    result.error = Error(ErrorCode::BackendUnavailable, "evaluation engine has no backend or knowledge bases").to_json();
    result.final_phase = "Failed";
    result.match = {0, match_entities(task.gold, task.gold).applicable};
    return result;
  }
  std::optional<llm::RecordingBackend> recorder;
  llm::Backend* active = backend.get();
  if (engine.capture_prompts) active = &recorder.emplace(*backend);
  llm::StageClient client(*active, engine.settings);

  Session session(task.id, SessionConfig{config, "scripted"}, *engine.kbs, client, clock);
  try {
    session.start(task.requirement_text);
    while (session.phase() == Phase::Clarifying) {
      requirements::Answers answers;
      for (auto e : session.runner().completeness().missing()) {
        answers[std::string(element_name(e))] = element_answer(task.gold, e);
      }
      session.post_answers(answers);
    }
    while (session.phase() == Phase::AwaitingFeedback) {
      const int revision = session.runner().current_code()->revision;
      auto v = verdicts.verdict(task.id, revision);
      auto fb = !v.executable ? debug::DebugFeedback::crashed(engine.feedback_text.console_error)
                : !v.correct  ? debug::DebugFeedback::wrong_output(engine.feedback_text.observed_output)
                              : debug::DebugFeedback::success();
      session.post_feedback(fb);
    }
  } catch (const Error& e) {
    result.error = e.to_json();
  }

  const auto& runner = session.runner();
  result.final_phase = std::string(to_string(session.phase()));
  result.completed = session.phase() == Phase::Done;
  if (!result.error && session.phase() == Phase::Failed) result.error = session.view().at("error");
  result.revisions = static_cast<int>(runner.pool().code_history().size());
  result.exhausted = runner.debug_session().exhausted;
  result.pool_snapshot = runner.pool().snapshot_json();
  result.event_log = session.events_jsonl();
  if (recorder) result.exchanges = recorder->exchanges();

  if (result.completed && runner.requirements()) {
    result.predicted = *runner.requirements();
    result.match = match_entities(*result.predicted, task.gold, &task.aliases);
    result.verdict = verdicts.verdict(task.id, runner.current_code()->revision);
  } else {
    result.match = {0, match_entities(task.gold, task.gold).applicable};
  }
  return result;
}

Json MetricReport::to_json() const {
  return {{"ma", matchability.value()}, {"exe", executability.value()}, {"acc", accuracy.value()},
          {"re", readability_value(readability)}};
}

MetricReport summarize(const std::vector<TaskResult>& results, const ReadabilityScores& readability) {
  MetricReport r;
  std::int64_t matched = 0;
  std::int64_t applicable = 0;
  std::vector<Verdict> verdicts;
  std::vector<ExpertScores> scores;
  for (const auto& t : results) {
    matched += t.match.matched;
    applicable += t.match.applicable;
    verdicts.push_back(t.verdict);
    if (auto it = readability.find(t.task_id); t.completed && it != readability.end()) scores.push_back(it->second);
  }
  r.matchability = applicable > 0 ? Percent::of(matched, applicable) : Percent{};
  r.executability = score_executability(verdicts);
  r.accuracy = score_accuracy(verdicts);
  r.readability = mean_readability(scores);
  return r;
}

std::vector<AblationConfig> all_mechanism_configs(int max_debug_iterations) {
  std::vector<AblationConfig> out;
  for (int mask = 7; mask >= 0; --mask) {
    out.push_back({(mask & 4) != 0, (mask & 2) != 0, (mask & 1) != 0, max_debug_iterations});
  }
  return out;
}

AblationTable run_ablation(const std::vector<EvalTask>& tasks, const std::vector<AblationConfig>& configs,
                           const Engine& engine, const VerdictScript& verdicts, const ReadabilityScores& readability) {
  if (tasks.empty() || configs.empty()) throw Error(ErrorCode::Validation, "ablation needs tasks and configs");
  AblationTable table;
  for (const auto& cfg : configs) {
    AblationRow row;
    row.config = cfg;
    for (const auto& task : tasks) row.results.push_back(run_task(task, cfg, engine, verdicts));
    row.report = summarize(row.results, readability);
    row.errors = collect_errors(row.results);
    table.rows.push_back(std::move(row));
  }
  return table;
}

SweepTable run_debug_sweep(const std::vector<EvalTask>& tasks, const std::vector<int>& ks, const Engine& engine,
                           const VerdictScript& verdicts, AblationConfig base) {
  if (tasks.empty() || ks.empty()) throw Error(ErrorCode::Validation, "sweep needs tasks and iteration caps");
  SweepTable table;
  for (int k : ks) {
    if (k < 0) throw Error(ErrorCode::Validation, "iteration caps must be non-negative", {{"k", k}});
    AblationConfig cfg = base;
    cfg.max_debug_iterations = k;
    SweepRow row;
    row.k = k;
    row.label = "Debugging@" + std::to_string(k);
    std::vector<Verdict> verdict_list;
    for (const auto& task : tasks) {
      row.results.push_back(run_task(task, cfg, engine, verdicts));
      verdict_list.push_back(row.results.back().verdict);
    }
    row.executability = score_executability(verdict_list);
    row.accuracy = score_accuracy(verdict_list);
    row.errors = collect_errors(row.results);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::optional<ReportFormat> report_format_from_string(std::string_view s) {
  if (text::iequals(s, "csv")) return ReportFormat::Csv;
  if (text::iequals(s, "json")) return ReportFormat::Json;
  return std::nullopt;
}

std::string ablation_csv(const AblationTable& table) {
  std::ostringstream out;
  out << "pool,retrieval,feedback,ma,exe,acc,re\n";
  for (const auto& row : table.rows) {
    const auto& r = row.report;
    out << yn(row.config.pool) << ',' << yn(row.config.retrieval) << ',' << yn(row.config.feedback) << ','
        << r.matchability.str() << ',' << r.executability.str() << ',' << r.accuracy.str() << ','
        << readability_cell(r.readability) << '\n';
  }
  return out.str();
}

Json ablation_json(const AblationTable& table) {
  const AblationRow* reference = nullptr;
  for (const auto& row : table.rows) {
    if (row.config.pool && row.config.retrieval && row.config.feedback) {
      reference = &row;
      break;
    }
  }
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json j = {{"pool", yn(row.config.pool)},
              {"retrieval", yn(row.config.retrieval)},
              {"feedback", yn(row.config.feedback)},
              {"max_debug_iterations", row.config.max_debug_iterations}};
    j.update(row.report.to_json());
    if (reference != nullptr) {
      const auto& a = row.report;
      const auto& b = reference->report;
      Json d = {{"ma", Percent::delta(a.matchability, b.matchability)},
                {"exe", Percent::delta(a.executability, b.executability)},
                {"acc", Percent::delta(a.accuracy, b.accuracy)}};
      d["re"] = a.readability && b.readability ? Json(Percent::delta(*a.readability, *b.readability)) : Json("NA");
      j["delta_vs_all_on"] = d;
    }
    j["errors"] = errors_json(row.errors);
    rows.push_back(std::move(j));
  }
  return {{"columns", {"pool", "retrieval", "feedback", "ma", "exe", "acc", "re"}}, {"rows", rows}};
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "strategy,exe,acc\n";
  for (const auto& row : table.rows) {
    out << row.label << ',' << row.executability.str() << ',' << row.accuracy.str() << '\n';
  }
  return out.str();
}

Json sweep_json(const SweepTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"strategy", row.label},
                    {"k", row.k},
                    {"exe", row.executability.value()},
                    {"acc", row.accuracy.value()},
                    {"errors", errors_json(row.errors)}});
  }
  return {{"columns", {"strategy", "exe", "acc"}}, {"rows", rows}};
}

std::string run_csv(const std::vector<TaskResult>& results, const MetricReport& report,
                    const ReadabilityScores& readability) {
  std::ostringstream out;
  out << "task,ma,exe,acc,re\n";
  for (const auto& r : results) {
    auto it = readability.find(r.task_id);
    std::optional<Percent> re;
    if (r.completed && it != readability.end()) re = score_readability(it->second);
    out << r.task_id << ',' << r.match.percent().str() << ',' << yn(r.verdict.executable) << ','
        << yn(r.verdict.executable && r.verdict.correct) << ',' << readability_cell(re) << '\n';
  }
  out << "ALL," << report.matchability.str() << ',' << report.executability.str() << ',' << report.accuracy.str()
      << ',' << readability_cell(report.readability) << '\n';
  return out.str();
}

Json run_json(const std::vector<TaskResult>& results, const MetricReport& report,
              const ReadabilityScores& readability) {
  Json tasks = Json::array();
  for (const auto& r : results) {
    Json j = r.to_json();
    auto it = readability.find(r.task_id);
    j["readability"] = r.completed && it != readability.end() ? Json(score_readability(it->second).value()) : Json("NA");
    tasks.push_back(std::move(j));
  }
  return {{"tasks", tasks}, {"summary", report.to_json()}};
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string(), {{"path", path.string()}});
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string(), {{"path", path.string()}});
}

void emit_report(const AblationTable& table, ReportFormat format, const std::filesystem::path& path) {
  if (table.rows.empty()) throw Error(ErrorCode::Validation, "nothing to report");
  write_text_file(path, format == ReportFormat::Csv ? ablation_csv(table) : ablation_json(table).dump(2) + "\n");
}

void emit_report(const SweepTable& table, ReportFormat format, const std::filesystem::path& path) {
  if (table.rows.empty()) throw Error(ErrorCode::Validation, "nothing to report");
  write_text_file(path, format == ReportFormat::Csv ? sweep_csv(table) : sweep_json(table).dump(2) + "\n");
}

}  // namespace cop::eval
