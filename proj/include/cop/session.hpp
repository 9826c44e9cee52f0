// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/ablation.hpp"
#include "cop/errors.hpp"
#include "cop/pipeline.hpp"

namespace cop {

enum class Phase { Clarifying, Designing, Generating, AwaitingFeedback, Annotating, Done, Failed };
std::string_view to_string(Phase p);
std::optional<Phase> phase_from_string(std::string_view s);
/// The declared phase graph; Done and Failed are terminal.
bool phase_transition_allowed(Phase from, Phase to);

enum class EventKind {
  TaskCreated,
  ClarificationAsked,
  AnswersReceived,
  StageCompleted,
  FeedbackReceived,
  RepairProduced,
  AnnotationProduced,
  Failed,
};
std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

/// Payloads always carry "phase" (after the event), "pool_writes" (pool
/// entries written by the step) and "state" (TaskRunner::state_json()).
struct SessionEvent {
  int seq = 0;
  std::string timestamp;
  EventKind kind = EventKind::TaskCreated;
  Json payload;

  Json to_json() const;
  static SessionEvent from_json(const Json& j);
};

struct SessionConfig {
  AblationConfig ablation;
  std::string backend = "scripted";

  Json to_json() const;
  static SessionConfig from_json(const Json& j);
};

/// True for errors caused by the request itself; those leave the session
/// untouched. Every other error moves the session to Failed.
bool is_request_error(ErrorCode code);

/// One interactive task: a TaskRunner plus its append-only event log and
/// phase. Not thread-safe; SessionManager serializes access.
class Session {
 public:
  using EventSink = std::function<void(const SessionEvent&)>;

  Session(std::string id, SessionConfig config, const kb::KnowledgeBases& kbs, llm::StageClient& client,
          const Clock& clock);

  /// Runs requirement analysis and, when nothing is missing, design and
  /// generation. Throws Error(Validation) for blank text.
  Json start(std::string_view requirement_text);
  /// Throws Error(WrongPhase) outside Clarifying.
  Json post_answers(const requirements::Answers& answers);
  /// Throws Error(WrongPhase) outside AwaitingFeedback.
  Json post_feedback(const debug::DebugFeedback& fb);

  /// Compact view returned by every request.
  Json view() const;
  /// Pool snapshot with every code revision, for display and diffing.
  Json artifacts() const;

  const std::string& id() const { return id_; }
  Phase phase() const { return phase_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<SessionEvent>& events() const { return events_; }
  Json events_json() const;
  /// One compact JSON object per line.
  std::string events_jsonl() const;
  const TaskRunner& runner() const { return runner_; }

  void set_event_sink(EventSink sink) { sink_ = std::move(sink); }

  /// Rebuilds a session from its log without backend calls. Throws
  /// Error(CorruptLog) naming the offending seq.
  static std::unique_ptr<Session> replay(const std::vector<SessionEvent>& log, const kb::KnowledgeBases& kbs,
                                         llm::StageClient& client, const Clock& clock);

 private:
  void emit(EventKind kind, Json payload);
  template <typename F>
  void guarded(F&& step);
  void advance();
  void finish_feedback();
  std::optional<requirements::ClarificationRequest> pending_clarification() const;

  std::string id_;
  SessionConfig config_;
  const Clock* clock_;
  TaskRunner runner_;
  Phase phase_ = Phase::Clarifying;
  std::vector<SessionEvent> events_;
  std::size_t journal_mark_ = 0;
  std::optional<Json> error_;
  EventSink sink_;
};

/// 32 lowercase hex digits from a random 128-bit value.
std::string random_session_id();

/// Owns live sessions. Requests to one session are serialized; different
/// sessions proceed in parallel. With a sessions directory every event is
/// appended to <dir>/<id>.jsonl as it happens.
class SessionManager {
 public:
  using IdGenerator = std::function<std::string()>;

  /// `backend` may be null, in which case creating a session fails with
  /// Error(BackendUnavailable).
  SessionManager(const kb::KnowledgeBases& kbs, llm::Backend* backend, llm::LlmSettings settings, const Clock& clock,
                 std::optional<std::filesystem::path> sessions_dir = std::nullopt,
                 IdGenerator ids = random_session_id);

  /// {"session_id": ..., "response": view}
  Json create(std::string_view requirement_text, const SessionConfig& config);
  Json answers(const std::string& id, const requirements::Answers& answers);
  Json feedback(const std::string& id, const debug::DebugFeedback& fb);
  Json view(const std::string& id);
  Json artifacts(const std::string& id);
  std::vector<SessionEvent> events(const std::string& id);
  std::vector<std::string> ids() const;

  /// Replays every <id>.jsonl in the sessions directory; returns the
  /// number of sessions recovered.
  std::size_t load_persisted();

  const kb::KnowledgeBases& knowledge_bases() const { return *kbs_; }

 private:
  struct Slot {
    std::mutex mu;
    std::unique_ptr<llm::StageClient> client;
    std::unique_ptr<Session> session;
  };

  std::shared_ptr<Slot> find(const std::string& id) const;
  void require_backend() const;
  template <typename F>
  Json with_session(const std::string& id, F&& f);
  void attach_persistence(Session& s);

  const kb::KnowledgeBases* kbs_;
  llm::Backend* backend_;
  llm::LlmSettings settings_;
  const Clock* clock_;
  std::optional<std::filesystem::path> dir_;
  IdGenerator ids_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

/// Reads a JSON-lines event log. Throws Error(IoFailure) or
/// Error(CorruptLog).
std::vector<SessionEvent> read_event_log(const std::filesystem::path& path);

}  // namespace cop
