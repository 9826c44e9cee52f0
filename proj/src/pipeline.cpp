// SPDX-License-Identifier: Apache-2.0
#include "cop/pipeline.hpp"

#include "cop/errors.hpp"

namespace cop {

namespace {

using debug::DebugState;

[[noreturn]] void wrong_state(const std::string& what) { throw Error(ErrorCode::WrongState, what); }

Json hits_json(const std::vector<kb::RetrievalHit>& hits) {
  Json arr = Json::array();
  for (const auto& h : hits) arr.push_back(h.to_json());
  return arr;
}

std::vector<kb::RetrievalHit> hits_from_json(const Json& arr) {
  std::vector<kb::RetrievalHit> out;
  for (const auto& j : arr) {
    kb::RetrievalHit h;
    h.record_id = j.at("record_id").get<std::string>();
    h.score = j.at("score").get<double>();
    auto kind = kb::kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::CorruptLog, "unknown KB kind in recorded hits");
    h.kind = *kind;
    h.snippet = j.at("snippet").get<std::string>();
    out.push_back(std::move(h));
  }
  return out;
}

debug::DebugSession debug_from_json(const Json& j) {
  debug::DebugSession s;
  s.iteration = j.at("iteration").get<int>();
  s.max_iterations = j.at("max_iterations").get<int>();
  s.exhausted = j.at("exhausted").get<bool>();
  const auto state = j.at("state").get<std::string>();
  for (auto st : {DebugState::AwaitingFeedback, DebugState::Repairing, DebugState::Annotating, DebugState::Done}) {
    if (debug::to_string(st) == state) s.state = st;
  }
  return s;
}

}  // namespace

TaskRunner::TaskRunner(const kb::KnowledgeBases& kbs, llm::StageClient& client, const Clock& clock,
                       AblationConfig config)
    : kbs_(&kbs), client_(&client), clock_(&clock), config_(config), pool_(clock) {
  debug_.max_iterations = config_.max_debug_iterations;
}

requirements::ConditionalFlags TaskRunner::classify() {
  const std::string goal = raw_.get(Element::AnalysisGoal).value_or("");
  auto flags = requirements::classify_conditional_need(goal + " " + requirement_text_, client_);
  // A user who states an extent evidently needs it.
  flags.spatial_needed = flags.spatial_needed || raw_.has(Element::SpatialExtent);
  flags.temporal_needed = flags.temporal_needed || raw_.has(Element::TemporalExtent);
  return flags;
}

std::optional<requirements::ClarificationRequest> TaskRunner::analyze(std::string_view requirement_text) {
  if (analyzed_) wrong_state("requirements were already analyzed");
  raw_ = requirements::extract_elements(requirement_text, *client_);
  requirement_text_ = std::string(requirement_text);
  flags_ = classify();
  report_ = requirements::check_completeness(raw_, flags_);
  analyzed_ = true;
  if (report_.overall == requirements::Overall::NeedsClarification) return requirements::build_clarification(report_);
  return std::nullopt;
}

bool TaskRunner::clarification_pending() const {
  return analyzed_ && report_.overall == requirements::Overall::NeedsClarification;
}

std::optional<requirements::ClarificationRequest> TaskRunner::answer(const requirements::Answers& answers) {
  if (!clarification_pending()) wrong_state("no clarification is pending");
  if (rounds_ >= kMaxClarificationRounds) {
    throw Error(ErrorCode::ClarificationExhausted,
                "clarification limit of " + std::to_string(kMaxClarificationRounds) + " rounds reached",
                {{"rounds", rounds_}});
  }
  raw_ = requirements::merge_answers(raw_, answers);
  ++rounds_;
  flags_.spatial_needed = flags_.spatial_needed || raw_.has(Element::SpatialExtent);
  flags_.temporal_needed = flags_.temporal_needed || raw_.has(Element::TemporalExtent);
  report_ = requirements::check_completeness(raw_, flags_);
  if (report_.overall == requirements::Overall::NeedsClarification) return requirements::build_clarification(report_);
  return std::nullopt;
}

const RequirementsDocument& TaskRunner::finalize_requirements() {
  if (!analyzed_ || clarification_pending() || requirements_) wrong_state("requirements cannot be finalized now");
  requirements_ = requirements::finalize(raw_, flags_, *client_, pool_);
  return *requirements_;
}

const AlgorithmDesignDocument& TaskRunner::design_algorithm() {
  if (!requirements_ || design_) wrong_state("algorithm design needs finalized requirements");
  design_ = design::design(*requirements_, *client_, pool_);
  return *design_;
}

code::PromptContext TaskRunner::context() const {
  return code::assemble_context(pool_, hits_, config_, &*requirements_, &*design_);
}

const code::CodeArtifact& TaskRunner::generate_code() {
  if (!design_ || code_) wrong_state("code generation needs an algorithm design");
  hits_ = config_.retrieval ? code::retrieve_support(*requirements_, *design_, *kbs_) : code::SupportHits{};
  code_ = code::generate(context(), *client_, pool_);
  debug_.state = config_.feedback ? DebugState::AwaitingFeedback : DebugState::Annotating;
  return *code_;
}

const debug::DebugSession& TaskRunner::feedback(const debug::DebugFeedback& fb) {
  if (!code_ || !config_.feedback) wrong_state("feedback is not expected for this task");
  if (debug_.state != DebugState::AwaitingFeedback) wrong_state("feedback is only accepted while awaiting feedback");
  fb.validate();
  auto next = debug::next_transition(debug_, fb);
  debug::append_transcript(pool_, {{"event", "feedback"},
                                   {"iteration", debug_.iteration},
                                   {"revision", code_->revision},
                                   {"feedback", fb.to_json()}});
  debug_ = next;
  last_feedback_ = fb;
  return debug_;
}

const code::CodeArtifact& TaskRunner::repair_code() {
  if (!needs_repair() || !last_feedback_) wrong_state("no repair is pending");
  code_ = debug::repair(debug_, *code_, *last_feedback_, context(), *client_, pool_);
  return *code_;
}

const debug::AnnotatedCode& TaskRunner::annotate_code() {
  if (!code_ || !needs_annotation()) wrong_state("annotation is not pending");
  annotated_ = debug::annotate(debug_, *code_, context(), *client_, pool_, *clock_);
  return *annotated_;
}

Json TaskRunner::state_json() const {
  Json j = {{"requirement_text", requirement_text_},
            {"analyzed", analyzed_},
            {"raw", raw_.to_json()},
            {"flags", flags_.to_json()},
            {"clarification_rounds", rounds_},
            {"hits",
             {{"platform", hits_json(hits_.platform)},
              {"dataset", hits_json(hits_.dataset)},
              {"function", hits_json(hits_.function)}}},
            {"debug", debug_.to_json()}};
  j["last_feedback"] = last_feedback_ ? last_feedback_->to_json() : Json(nullptr);
  return j;
}

void TaskRunner::restore(const std::vector<PoolEntry>& writes, const Json& state) {
  pool_.clear();
  for (const auto& w : writes) pool_.put_at(w.kind, w.payload, w.created_at);

  requirement_text_ = state.at("requirement_text").get<std::string>();
  analyzed_ = state.at("analyzed").get<bool>();
  raw_ = RawElements::from_json(state.at("raw"));
  flags_ = requirements::ConditionalFlags::from_json(state.at("flags"));
  rounds_ = state.at("clarification_rounds").get<int>();
  const auto& hits = state.at("hits");
  hits_ = {hits_from_json(hits.at("platform")), hits_from_json(hits.at("dataset")),
           hits_from_json(hits.at("function"))};
  debug_ = debug_from_json(state.at("debug"));
  last_feedback_.reset();
  if (const auto& fb = state.at("last_feedback"); !fb.is_null()) last_feedback_ = debug::DebugFeedback::from_json(fb);
  report_ = analyzed_ ? requirements::check_completeness(raw_, flags_) : requirements::CompletenessReport{};

  requirements_.reset();
  design_.reset();
  code_.reset();
  annotated_.reset();
  if (auto e = pool_.get(ArtifactKind::RequirementsDoc)) requirements_ = RequirementsDocument::from_json(e->payload);
  if (auto e = pool_.get(ArtifactKind::AlgorithmDesign)) design_ = AlgorithmDesignDocument::from_json(e->payload);
  if (!pool_.code_history().empty() && requirements_) {
    const auto& last = pool_.code_history().back();
    code_ = code::CodeArtifact{requirements_->value_or_empty(Element::ProgrammingLanguage),
                               requirements_->value_or_empty(Element::Platform), last.payload.get<std::string>(),
                               last.revision,
                               last.revision == 0 ? code::Provenance::Generated : code::Provenance::Repaired};
  }
  if (auto e = pool_.get(ArtifactKind::AnnotatedCode); e && code_) {
    annotated_ = debug::parse_annotated(e->payload.get<std::string>(), code_->language);
  }
}

}  // namespace cop
