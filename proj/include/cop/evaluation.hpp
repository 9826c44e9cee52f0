// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/ablation.hpp"
#include "cop/documents.hpp"
#include "cop/knowledge_base.hpp"
#include "cop/llm_backend.hpp"

namespace cop::eval {

/// A percentage held as an exact count of tenths.
struct Percent {
  std::int64_t tenths = 0;

  /// 100 * num / den rounded half-up to one decimal, in exact integer
  /// arithmetic. Requires num >= 0 and den > 0.
  static Percent of(std::int64_t num, std::int64_t den);

  double value() const { return static_cast<double>(tenths) / 10.0; }
  /// "87.5", "100.0", "-3.2"
  std::string str() const;
  /// Signed difference, "+4.3" / "-1.0" / "+0.0".
  static std::string delta(Percent a, Percent b);

  auto operator<=>(const Percent&) const = default;
};

using AliasSets = std::map<Element, std::vector<std::string>>;

struct EvalTask {
  std::string id;
  int primary_category = 1;    // 1..3
  int secondary_category = 1;  // 1..8
  std::string requirement_text;
  RequirementsDocument gold;
  AliasSets aliases;

  /// Throws Error(Validation) when the categories are out of range or
  /// inconsistent (1-3 -> 1, 4-6 -> 2, 7-8 -> 3).
  void validate() const;
  Json to_json() const;
  static EvalTask from_json(const Json& j);
};

int primary_for_secondary(int secondary_category);
std::string_view primary_category_name(int primary_category);

std::vector<EvalTask> corpus_from_json(const Json& j);
std::vector<EvalTask> load_corpus(const std::filesystem::path& path);

enum class VerdictSource { External, Simulated };

struct Verdict {
  std::string task_id;
  bool executable = false;
  bool correct = false;
  VerdictSource source = VerdictSource::Simulated;

  /// Throws Error(Validation) when correct but not executable.
  void validate() const;
  Json to_json() const;
  static Verdict from_json(const Json& j);
  bool operator==(const Verdict&) const = default;
};

struct MatchCount {
  int matched = 0;
  int applicable = 0;
  Percent percent() const { return Percent::of(matched, applicable); }
};

/// Per-element normalized equality against the gold value or one of its
/// aliases; gold elements without a value are not applicable. Throws
/// Error(Validation) when the gold document has no values.
MatchCount match_entities(const RequirementsDocument& pred, const RequirementsDocument& gold,
                          const AliasSets* aliases = nullptr);
Percent score_matchability(const RequirementsDocument& pred, const RequirementsDocument& gold,
                           const AliasSets* aliases = nullptr);

/// Both throw Error(EmptyVerdicts) on an empty list. A non-executable
/// program counts as incorrect.
Percent score_executability(const std::vector<Verdict>& verdicts);
Percent score_accuracy(const std::vector<Verdict>& verdicts);

using ExpertScores = std::array<int, 5>;
/// Sum of the three middle scores; throws Error(OutOfRange) for values
/// outside 1..10.
int trimmed_sum(const ExpertScores& scores);
Percent score_readability(const ExpertScores& scores);
/// Mean of per-task readability, in exact arithmetic. nullopt when empty.
std::optional<Percent> mean_readability(const std::vector<ExpertScores>& per_task);

using ReadabilityScores = std::map<std::string, ExpertScores>;
ReadabilityScores readability_from_json(const Json& j);
ReadabilityScores load_readability(const std::filesystem::path& path);

/// Per task, the first revision that runs and the first revision that is
/// also correct; nullopt means never.
struct VerdictRule {
  std::optional<int> first_executable_revision;
  std::optional<int> first_correct_revision;
  VerdictSource source = VerdictSource::Simulated;
};

/// Declarative verdict source for desk-scale runs.
class VerdictScript {
 public:
  VerdictScript() = default;
  explicit VerdictScript(std::map<std::string, VerdictRule> rules);

  /// Accepts either an array of {task_id, first_correct_revision,
  /// first_executable_revision?} rules or an array of Verdict objects
  /// (an external verdict applies to every revision).
  static VerdictScript from_json(const Json& j);
  static VerdictScript load(const std::filesystem::path& path);

  /// Unknown tasks are never executable.
  Verdict verdict(const std::string& task_id, int revision) const;
  void set(const std::string& task_id, VerdictRule rule);
  const std::map<std::string, VerdictRule>& rules() const { return rules_; }

 private:
  std::map<std::string, VerdictRule> rules_;
};

/// Feedback a user would give for `v`.
struct FeedbackText {
  std::string console_error = "Error: script failed to run";
  std::string observed_output = "Output does not match the expected result";
};

/// Fresh backend per pipeline run, so scripted state never leaks between
/// cells.
using BackendFactory = std::function<std::unique_ptr<llm::Backend>()>;

struct Engine {
  const kb::KnowledgeBases* kbs = nullptr;
  BackendFactory backend_factory;
  llm::LlmSettings settings = llm::LlmSettings::defaults();
  std::int64_t clock_epoch = 1735689600;
  FeedbackText feedback_text;
  bool capture_prompts = false;
};

struct TaskResult {
  std::string task_id;
  AblationConfig config;
  bool completed = false;
  std::optional<Json> error;
  std::optional<RequirementsDocument> predicted;
  MatchCount match;
  Verdict verdict;
  int revisions = 0;
  bool exhausted = false;
  std::string final_phase;
  Json pool_snapshot;
  std::string event_log;  // JSON lines
  std::vector<llm::Exchange> exchanges;  // only with Engine::capture_prompts

  Json to_json() const;
};

/// One full pipeline run answering clarifications from the gold document
/// and feedback from the verdict script. Never throws for pipeline
/// errors; a failed run scores zero with verdict (N, N).
TaskResult run_task(const EvalTask& task, const AblationConfig& config, const Engine& engine,
                    const VerdictScript& verdicts);

struct MetricReport {
  Percent matchability;
  Percent executability;
  Percent accuracy;
  std::optional<Percent> readability;

  Json to_json() const;
};

/// Matchability is micro-averaged over tasks; readability averages the
/// scored tasks among completed runs.
MetricReport summarize(const std::vector<TaskResult>& results, const ReadabilityScores& readability);

struct CellError {
  std::string task_id;
  Json error;
};

struct AblationRow {
  AblationConfig config;
  MetricReport report;
  std::vector<CellError> errors;
  std::vector<TaskResult> results;
};

struct AblationTable {
  std::vector<AblationRow> rows;
};

/// The eight pool/retrieval/feedback combinations, all-on first.
std::vector<AblationConfig> all_mechanism_configs(int max_debug_iterations = kDefaultMaxDebugIterations);

AblationTable run_ablation(const std::vector<EvalTask>& tasks, const std::vector<AblationConfig>& configs,
                           const Engine& engine, const VerdictScript& verdicts, const ReadabilityScores& readability);

struct SweepRow {
  int k = 0;
  std::string label;  // "Debugging@k"
  Percent executability;
  Percent accuracy;
  std::vector<CellError> errors;
  std::vector<TaskResult> results;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

inline const std::vector<int> kDefaultSweepKs = {0, 1, 3, 5};

SweepTable run_debug_sweep(const std::vector<EvalTask>& tasks, const std::vector<int>& ks, const Engine& engine,
                           const VerdictScript& verdicts, AblationConfig base = {});

enum class ReportFormat { Csv, Json };
std::optional<ReportFormat> report_format_from_string(std::string_view s);

/// "pool,retrieval,feedback,ma,exe,acc,re" with Y/N flags; "NA" for a
/// missing readability.
std::string ablation_csv(const AblationTable& table);
/// Rows with metrics, per-cell errors and deltas against the all-on row.
Json ablation_json(const AblationTable& table);
/// "strategy,exe,acc"
std::string sweep_csv(const SweepTable& table);
Json sweep_json(const SweepTable& table);
/// "task,ma,exe,acc,re": per-task rows followed by an "ALL" summary row.
std::string run_csv(const std::vector<TaskResult>& results, const MetricReport& report,
                    const ReadabilityScores& readability);
Json run_json(const std::vector<TaskResult>& results, const MetricReport& report,
              const ReadabilityScores& readability);

/// Throws Error(Validation) on an empty table and Error(IoFailure) when
/// the file cannot be written.
void emit_report(const AblationTable& table, ReportFormat format, const std::filesystem::path& path);
void emit_report(const SweepTable& table, ReportFormat format, const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cop::eval
