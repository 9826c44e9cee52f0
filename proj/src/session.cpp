// SPDX-License-Identifier: Apache-2.0
#include "cop/session.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include "cop/errors.hpp"
#include "cop/text.hpp"

namespace cop {

namespace {

constexpr std::array<Phase, 7> kAllPhases = {Phase::Clarifying, Phase::Designing,  Phase::Generating,
                                             Phase::AwaitingFeedback, Phase::Annotating, Phase::Done,
                                             Phase::Failed};

constexpr std::array<EventKind, 8> kAllEventKinds = {
    EventKind::TaskCreated,      EventKind::ClarificationAsked, EventKind::AnswersReceived,
    EventKind::StageCompleted,   EventKind::FeedbackReceived,   EventKind::RepairProduced,
    EventKind::AnnotationProduced, EventKind::Failed};

[[noreturn]] void corrupt(int seq, const std::string& why) {
  throw Error(ErrorCode::CorruptLog, "corrupt event log at seq " + std::to_string(seq) + ": " + why, {{"seq", seq}});
}

Json answers_json(const requirements::Answers& answers) {
  Json j = Json::object();
  for (const auto& [k, v] : answers) j[k] = v;
  return j;
}

// Stands in for a missing backend so recovered sessions stay readable.
class UnavailableBackend final : public llm::Backend {
 public:
  std::string complete(const llm::CompletionRequest&) override {
    throw Error(ErrorCode::BackendUnavailable, "no language model backend is configured");
  }
};

llm::Backend& unavailable_backend() {
  static UnavailableBackend backend;
  return backend;
}

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Clarifying: return "Clarifying";
    case Phase::Designing: return "Designing";
    case Phase::Generating: return "Generating";
    case Phase::AwaitingFeedback: return "AwaitingFeedback";
    case Phase::Annotating: return "Annotating";
    case Phase::Done: return "Done";
    case Phase::Failed: return "Failed";
  }
  return "Unknown";
}

std::optional<Phase> phase_from_string(std::string_view s) {
  for (auto p : kAllPhases) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

bool phase_transition_allowed(Phase from, Phase to) {
  if (to == Phase::Failed) return from != Phase::Done && from != Phase::Failed;
  switch (from) {
    case Phase::Clarifying: return to == Phase::Clarifying || to == Phase::Designing;
    case Phase::Designing: return to == Phase::Generating;
    case Phase::Generating: return to == Phase::AwaitingFeedback || to == Phase::Annotating;
    case Phase::AwaitingFeedback: return to == Phase::Generating || to == Phase::Annotating;
    case Phase::Annotating: return to == Phase::Done;
    case Phase::Done:
    case Phase::Failed: return false;
  }
  return false;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::TaskCreated: return "TaskCreated";
    case EventKind::ClarificationAsked: return "ClarificationAsked";
    case EventKind::AnswersReceived: return "AnswersReceived";
    case EventKind::StageCompleted: return "StageCompleted";
    case EventKind::FeedbackReceived: return "FeedbackReceived";
    case EventKind::RepairProduced: return "RepairProduced";
    case EventKind::AnnotationProduced: return "AnnotationProduced";
    case EventKind::Failed: return "Failed";
  }
  return "Unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (auto k : kAllEventKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

Json SessionEvent::to_json() const {
  return {{"seq", seq}, {"timestamp", timestamp}, {"kind", std::string(to_string(kind))}, {"payload", payload}};
}

SessionEvent SessionEvent::from_json(const Json& j) {
  SessionEvent e;
  try {
    e.seq = j.at("seq").get<int>();
    e.timestamp = j.at("timestamp").get<std::string>();
    auto kind = event_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) corrupt(e.seq, "unknown event kind");
    e.kind = *kind;
    e.payload = j.at("payload");
  } catch (const Json::exception& ex) {
    corrupt(e.seq, ex.what());
  }
  return e;
}

Json SessionConfig::to_json() const { return {{"ablation", ablation.to_json()}, {"backend", backend}}; }

SessionConfig SessionConfig::from_json(const Json& j) {
  SessionConfig c;
  if (!j.is_object()) throw Error(ErrorCode::Validation, "session config must be an object");
  if (auto a = j.find("ablation"); a != j.end()) c.ablation = AblationConfig::from_json(*a);
  if (auto b = j.find("backend"); b != j.end()) {
    if (!b->is_string()) throw Error(ErrorCode::Validation, "backend must be a string");
    c.backend = b->get<std::string>();
  }
  return c;
}

bool is_request_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation:
    case ErrorCode::UnknownElement:
    case ErrorCode::EmptyAnswer:
    case ErrorCode::InvalidFeedback:
    case ErrorCode::WrongPhase:
    case ErrorCode::WrongState:
    case ErrorCode::UnknownSession:
    case ErrorCode::BackendUnavailable: return true;
    default: return false;
  }
}

Session::Session(std::string id, SessionConfig config, const kb::KnowledgeBases& kbs, llm::StageClient& client,
                 const Clock& clock)
    : id_(std::move(id)), config_(std::move(config)), clock_(&clock), runner_(kbs, client, clock, config_.ablation) {}

void Session::emit(EventKind kind, Json payload) {
  const auto& journal = runner_.pool().journal();
  Json writes = Json::array();
  for (std::size_t i = journal_mark_; i < journal.size(); ++i) writes.push_back(journal[i].to_json());
  journal_mark_ = journal.size();

  payload["phase"] = std::string(to_string(phase_));
  payload["pool_writes"] = std::move(writes);
  payload["state"] = runner_.state_json();
  SessionEvent e{static_cast<int>(events_.size()) + 1, clock_->now(), kind, std::move(payload)};
  events_.push_back(e);
  if (sink_) sink_(events_.back());
}

template <typename F>
void Session::guarded(F&& step) {
  try {
    step();
  } catch (const Error& e) {
    if (is_request_error(e.code())) throw;
    phase_ = Phase::Failed;
    error_ = e.to_json();
    emit(EventKind::Failed, {{"error", *error_}});
  } catch (const std::exception& e) {
    phase_ = Phase::Failed;
    error_ = Json{{"error", "Internal"}, {"message", e.what()}, {"details", Json::object()}};
    emit(EventKind::Failed, {{"error", *error_}});
  }
}

void Session::advance() {
  runner_.finalize_requirements();
  phase_ = Phase::Designing;
  emit(EventKind::StageCompleted, {{"stage", "requirement_analysis"}});

  runner_.design_algorithm();
  phase_ = Phase::Generating;
  emit(EventKind::StageCompleted, {{"stage", "algorithm_design"}});

  const auto& code = runner_.generate_code();
  phase_ = runner_.needs_annotation() ? Phase::Annotating : Phase::AwaitingFeedback;
  emit(EventKind::StageCompleted, {{"stage", "code_implementation"}, {"revision", code.revision}});

  if (runner_.needs_annotation()) finish_feedback();
}

void Session::finish_feedback() {
  if (runner_.needs_repair()) {
    const auto& code = runner_.repair_code();
    phase_ = Phase::AwaitingFeedback;
    emit(EventKind::RepairProduced, {{"revision", code.revision}});
  } else if (runner_.needs_annotation()) {
    runner_.annotate_code();
    phase_ = Phase::Done;
    emit(EventKind::AnnotationProduced, {{"exhausted", runner_.debug_session().exhausted}});
  }
}

Json Session::start(std::string_view requirement_text) {
  if (!events_.empty()) throw Error(ErrorCode::WrongPhase, "session already started");
  if (text::trim(requirement_text).empty()) throw Error(ErrorCode::Validation, "requirement text is empty");
  phase_ = Phase::Clarifying;
  emit(EventKind::TaskCreated,
       {{"session_id", id_}, {"requirement_text", std::string(requirement_text)}, {"config", config_.to_json()}});
  guarded([&] {
    if (auto c = runner_.analyze(requirement_text)) {
      emit(EventKind::ClarificationAsked, {{"clarification", c->to_json()}, {"round", runner_.clarification_rounds()}});
      return;
    }
    advance();
  });
  return view();
}

Json Session::post_answers(const requirements::Answers& answers) {
  if (phase_ != Phase::Clarifying || !runner_.clarification_pending()) {
    throw Error(ErrorCode::WrongPhase, "answers are only accepted while clarifying",
                {{"phase", std::string(to_string(phase_))}});
  }
  guarded([&] {
    auto next = runner_.answer(answers);
    emit(EventKind::AnswersReceived, {{"answers", answers_json(answers)}, {"round", runner_.clarification_rounds()}});
    if (next) {
      emit(EventKind::ClarificationAsked, {{"clarification", next->to_json()}, {"round", runner_.clarification_rounds()}});
      return;
    }
    advance();
  });
  return view();
}

Json Session::post_feedback(const debug::DebugFeedback& fb) {
  if (phase_ != Phase::AwaitingFeedback) {
    throw Error(ErrorCode::WrongPhase, "feedback is only accepted while awaiting feedback",
                {{"phase", std::string(to_string(phase_))}});
  }
  fb.validate();
  guarded([&] {
    const auto& next = runner_.feedback(fb);
    phase_ = runner_.needs_repair() ? Phase::Generating : Phase::Annotating;
    emit(EventKind::FeedbackReceived, {{"feedback", fb.to_json()}, {"transition", next.to_json()}});
    finish_feedback();
  });
  return view();
}

std::optional<requirements::ClarificationRequest> Session::pending_clarification() const {
  if (phase_ != Phase::Clarifying || !runner_.clarification_pending()) return std::nullopt;
  return requirements::build_clarification(runner_.completeness());
}

Json Session::view() const {
  Json v = {{"session_id", id_},
            {"phase", std::string(to_string(phase_))},
            {"event_count", events_.size()},
            {"clarification_round", runner_.clarification_rounds()},
            {"exhausted", runner_.debug_session().exhausted},
            {"debug", runner_.debug_session().to_json()}};
  if (auto c = pending_clarification()) v["clarification"] = c->to_json();
  if (const auto& code = runner_.current_code()) v["code"] = code->to_json();
  if (const auto& a = runner_.annotated()) v["annotated"] = a->text;
  if (error_) v["error"] = *error_;
  return v;
}

Json Session::artifacts() const {
  Json a = view();
  a["config"] = config_.to_json();
  a["pool"] = runner_.pool().snapshot_json();
  if (const auto& r = runner_.requirements()) a["requirements"] = r->to_json();
  if (const auto& d = runner_.design()) a["design"] = d->to_json();
  Json revisions = Json::array();
  for (const auto& e : runner_.pool().code_history()) {
    revisions.push_back({{"revision", e.revision},
                         {"provenance", e.revision == 0 ? "generated" : "repaired"},
                         {"created_at", e.created_at},
                         {"source", e.payload}});
  }
  a["code_revisions"] = std::move(revisions);
  a["kb_hits"] = runner_.support_hits().to_json();
  return a;
}

Json Session::events_json() const {
  Json arr = Json::array();
  for (const auto& e : events_) arr.push_back(e.to_json());
  return arr;
}

std::string Session::events_jsonl() const {
  std::string out;
  for (const auto& e : events_) out += e.to_json().dump() + "\n";
  return out;
}

std::unique_ptr<Session> Session::replay(const std::vector<SessionEvent>& log, const kb::KnowledgeBases& kbs,
                                         llm::StageClient& client, const Clock& clock) {
  if (log.empty() || log.front().kind != EventKind::TaskCreated) {
    throw Error(ErrorCode::CorruptLog, "corrupt event log: no TaskCreated", {{"seq", 1}});
  }
  std::unique_ptr<Session> s;
  std::vector<PoolEntry> writes;
  std::optional<Phase> prev;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& e = log[i];
    const int expected = static_cast<int>(i) + 1;
    if (e.seq != expected) corrupt(expected, "expected seq " + std::to_string(expected));
    if (i > 0 && e.kind == EventKind::TaskCreated) corrupt(e.seq, "TaskCreated after the first event");
    try {
      auto phase = phase_from_string(e.payload.at("phase").get<std::string>());
      if (!phase) corrupt(e.seq, "unknown phase");
      if (prev && *prev != *phase && !phase_transition_allowed(*prev, *phase)) {
        corrupt(e.seq, "illegal phase transition " + std::string(to_string(*prev)) + " -> " +
                           std::string(to_string(*phase)));
      }
      if (i == 0) {
        s = std::make_unique<Session>(e.payload.at("session_id").get<std::string>(),
                                      SessionConfig::from_json(e.payload.at("config")), kbs, client, clock);
      }
      for (const auto& w : e.payload.at("pool_writes")) {
        auto kind = artifact_kind_from_string(w.at("kind").get<std::string>());
        if (!kind) corrupt(e.seq, "unknown artifact kind");
        writes.push_back({*kind, w.at("payload"), w.at("revision").get<int>(), w.at("created_at").get<std::string>()});
      }
      if (e.kind == EventKind::Failed) s->error_ = e.payload.at("error");
      prev = phase;
    } catch (const Json::exception& ex) {
      corrupt(e.seq, ex.what());
    }
    s->events_.push_back(e);
  }
  try {
    s->runner_.restore(writes, log.back().payload.at("state"));
  } catch (const Json::exception& ex) {
    corrupt(log.back().seq, ex.what());
  } catch (const Error& ex) {
    if (ex.code() == ErrorCode::CorruptLog) throw;
    corrupt(log.back().seq, ex.what());
  }
  s->phase_ = *prev;
  s->journal_mark_ = s->runner_.pool().journal().size();
  return s;
}

std::string random_session_id() {
  static thread_local std::mt19937_64 rng{[] {
    std::random_device rd;
    std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
    return std::mt19937_64(seq);
  }()};
  std::ostringstream out;
  out << std::hex;
  for (int i = 0; i < 2; ++i) {
    auto v = rng();
    for (int nibble = 15; nibble >= 0; --nibble) out << ((v >> (nibble * 4)) & 0xF);
  }
  return out.str();
}

std::vector<SessionEvent> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read event log: " + path.string(), {{"path", path.string()}});
  std::vector<SessionEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) corrupt(static_cast<int>(events.size()) + 1, "malformed JSON line");
    events.push_back(SessionEvent::from_json(j));
  }
  return events;
}

SessionManager::SessionManager(const kb::KnowledgeBases& kbs, llm::Backend* backend, llm::LlmSettings settings,
                               const Clock& clock, std::optional<std::filesystem::path> sessions_dir, IdGenerator ids)
    : kbs_(&kbs), backend_(backend), settings_(settings), clock_(&clock), dir_(std::move(sessions_dir)),
      ids_(std::move(ids)) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create sessions directory: " + dir_->string());
  }
}

void SessionManager::attach_persistence(Session& s) {
  if (!dir_) return;
  auto path = *dir_ / (s.id() + ".jsonl");
  s.set_event_sink([path](const SessionEvent& e) {
    std::ofstream out(path, std::ios::app);
    out << e.to_json().dump() << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "cannot append to " + path.string());
  });
}

std::shared_ptr<SessionManager::Slot> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) throw Error(ErrorCode::UnknownSession, "unknown session: " + id, {{"session_id", id}});
  return it->second;
}

template <typename F>
Json SessionManager::with_session(const std::string& id, F&& f) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  return f(*slot->session);
}

Json SessionManager::create(std::string_view requirement_text, const SessionConfig& config) {
  if (text::trim(requirement_text).empty()) throw Error(ErrorCode::Validation, "requirement text is empty");
  require_backend();

  auto slot = std::make_shared<Slot>();
  std::string id;
  {
    std::lock_guard lock(mu_);
    do {
      id = ids_();
    } while (slots_.count(id) != 0);
    slots_[id] = slot;
  }
  std::lock_guard lock(slot->mu);
  slot->client = std::make_unique<llm::StageClient>(*backend_, settings_);
  slot->session = std::make_unique<Session>(id, config, *kbs_, *slot->client, *clock_);
  attach_persistence(*slot->session);
  Json response = slot->session->start(requirement_text);
  return {{"session_id", id}, {"response", std::move(response)}};
}

void SessionManager::require_backend() const {
  if (backend_ == nullptr) throw Error(ErrorCode::BackendUnavailable, "no language model backend is configured");
}

Json SessionManager::answers(const std::string& id, const requirements::Answers& answers) {
  find(id);
  require_backend();
  return with_session(id, [&](Session& s) { return s.post_answers(answers); });
}

Json SessionManager::feedback(const std::string& id, const debug::DebugFeedback& fb) {
  find(id);
  require_backend();
  return with_session(id, [&](Session& s) { return s.post_feedback(fb); });
}

Json SessionManager::view(const std::string& id) {
  return with_session(id, [](Session& s) { return s.view(); });
}

Json SessionManager::artifacts(const std::string& id) {
  return with_session(id, [](Session& s) { return s.artifacts(); });
}

std::vector<SessionEvent> SessionManager::events(const std::string& id) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  return slot->session->events();
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : slots_) out.push_back(id);
  return out;
}

std::size_t SessionManager::load_persisted() {
  if (!dir_) return 0;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t loaded = 0;
  for (const auto& path : files) {
    auto slot = std::make_shared<Slot>();
    slot->client = std::make_unique<llm::StageClient>(backend_ ? *backend_ : unavailable_backend(), settings_);
    slot->session = Session::replay(read_event_log(path), *kbs_, *slot->client, *clock_);
    attach_persistence(*slot->session);
    std::lock_guard lock(mu_);
    slots_[slot->session->id()] = slot;
    ++loaded;
  }
  return loaded;
}

}  // namespace cop
