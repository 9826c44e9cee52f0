// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cop/session.hpp"
#include "fixtures.hpp"

using namespace cop;
using debug::DebugFeedback;

namespace {

struct Rig {
  Rig() : backend(llm::ScriptedBackend::from_json(fx::fixture_script())), client(backend) {}
  std::unique_ptr<Session> make(AblationConfig cfg = {}) {
    return std::make_unique<Session>("s1", SessionConfig{cfg, "scripted"}, fx::fixture_kbs(), client, clock);
  }
  ManualClock clock;
  llm::ScriptedBackend backend;
  llm::StageClient client;
};

std::vector<std::string> kinds(const Session& s) {
  std::vector<std::string> out;
  for (const auto& e : s.events()) out.emplace_back(to_string(e.kind));
  return out;
}

std::unique_ptr<Session> replay_offline(const std::vector<SessionEvent>& log) {
  static ManualClock clock(0);
  static fx::LambdaBackend refuse([](const llm::CompletionRequest&) -> std::string { throw std::logic_error("x"); });
  static llm::StageClient client(refuse);
  auto s = Session::replay(log, fx::fixture_kbs(), client, clock);
  EXPECT_EQ(refuse.calls, 0);
  return s;
}

std::optional<ErrorCode> replay_error(const std::vector<SessionEvent>& log) {
  try {
    replay_offline(log);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cop_session_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(PhaseGraph, DeclaredEdges) {
  EXPECT_TRUE(phase_transition_allowed(Phase::Clarifying, Phase::Designing));
  EXPECT_TRUE(phase_transition_allowed(Phase::Generating, Phase::Annotating));
  EXPECT_TRUE(phase_transition_allowed(Phase::AwaitingFeedback, Phase::Generating));
  EXPECT_TRUE(phase_transition_allowed(Phase::Annotating, Phase::Failed));
  EXPECT_FALSE(phase_transition_allowed(Phase::Clarifying, Phase::Generating));
  EXPECT_FALSE(phase_transition_allowed(Phase::Done, Phase::Failed));
  EXPECT_FALSE(phase_transition_allowed(Phase::Failed, Phase::Clarifying));
  EXPECT_EQ(phase_from_string("AwaitingFeedback"), Phase::AwaitingFeedback);
  EXPECT_FALSE(phase_from_string("Sleeping"));
}

TEST(Session, RunsToFeedbackThenDone) {
  Rig rig;
  auto s = rig.make();
  auto v = s->start(fx::corpus_task("cat2").requirement_text);
  EXPECT_EQ(v["phase"], "AwaitingFeedback");
  EXPECT_EQ(v["code"]["revision"], 0);
  EXPECT_EQ(kinds(*s), (std::vector<std::string>{"TaskCreated", "StageCompleted", "StageCompleted",
                                                 "StageCompleted"}));

  v = s->post_feedback(DebugFeedback::crashed("ReferenceError"));
  EXPECT_EQ(v["phase"], "AwaitingFeedback");
  EXPECT_EQ(v["code"]["revision"], 1);
  v = s->post_feedback(DebugFeedback::success());
  EXPECT_EQ(v["phase"], "Done");
  EXPECT_TRUE(v.contains("annotated"));
  EXPECT_EQ(s->artifacts()["code_revisions"].size(), 2u);

  int seq = 0;
  for (const auto& e : s->events()) {
    EXPECT_EQ(e.seq, ++seq);
    EXPECT_TRUE(e.payload.contains("pool_writes"));
    EXPECT_TRUE(e.payload.contains("state"));
  }
}

TEST(Session, RequestErrorsLeaveSessionUntouched) {
  Rig rig;
  auto s = rig.make();
  EXPECT_THROW(s->start("   "), Error);
  s->start(fx::corpus_task("cat2").requirement_text);
  const auto before = s->events_jsonl();
  try {
    s->post_answers({{"Output_Format", "CSV"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongPhase);
  }
  EXPECT_THROW(s->post_feedback({false, false, std::nullopt, std::nullopt}), Error);
  EXPECT_THROW(s->start("again"), Error);
  EXPECT_EQ(s->events_jsonl(), before);
  EXPECT_EQ(s->phase(), Phase::AwaitingFeedback);
}

TEST(Session, FeedbackOffEndsDoneWithoutFeedback) {
  Rig rig;
  AblationConfig cfg;
  cfg.feedback = false;
  auto s = rig.make(cfg);
  EXPECT_EQ(s->start(fx::corpus_task("cat5").requirement_text)["phase"], "Done");
  EXPECT_EQ(s->events().back().kind, EventKind::AnnotationProduced);
}

TEST(Session, PipelineFailureMovesToFailed) {
  Rig rig;
  auto s = rig.make();
  auto v = s->start("Compute something nobody scripted.");
  EXPECT_EQ(v["phase"], "Failed");
  EXPECT_EQ(v["error"]["error"], "NoScriptedRule");
  EXPECT_EQ(s->events().back().kind, EventKind::Failed);
  EXPECT_THROW(s->post_feedback(DebugFeedback::success()), Error);
}

TEST(Session, ReplayMatchesLiveSession) {
  Rig rig;
  auto s = rig.make();
  s->start(fx::corpus_task("cat3").requirement_text);
  s->post_feedback(DebugFeedback::crashed("boom"));
  auto mid = replay_offline(s->events());
  EXPECT_EQ(mid->artifacts().dump(), s->artifacts().dump());
  EXPECT_EQ(mid->phase(), Phase::AwaitingFeedback);

  s->post_feedback(DebugFeedback::wrong_output("0"));
  s->post_feedback(DebugFeedback::success());
  auto end = replay_offline(s->events());
  EXPECT_EQ(end->artifacts().dump(), s->artifacts().dump());
  EXPECT_EQ(end->events_jsonl(), s->events_jsonl());
  EXPECT_EQ(end->phase(), Phase::Done);
}

TEST(Session, ReplayedSessionContinuesLikeTheOriginal) {
  Rig a;
  auto live = a.make();
  live->start(fx::corpus_task("cat2").requirement_text);

  Rig b;
  auto resumed = Session::replay(live->events(), fx::fixture_kbs(), b.client, a.clock);
  live->post_feedback(DebugFeedback::success());
  EXPECT_EQ(resumed->phase(), Phase::AwaitingFeedback);
  EXPECT_EQ(resumed->post_feedback(DebugFeedback::success())["phase"], "Done");
  EXPECT_EQ(resumed->runner().annotated()->body, live->runner().annotated()->body);
}

TEST(Session, CorruptLogsAreRejected) {
  Rig rig;
  auto s = rig.make();
  s->start(fx::corpus_task("cat2").requirement_text);
  s->post_feedback(DebugFeedback::success());
  const auto log = s->events();

  EXPECT_EQ(replay_error({}), ErrorCode::CorruptLog);
  EXPECT_EQ(replay_error({log.begin() + 1, log.end()}), ErrorCode::CorruptLog);

  auto gap = log;
  gap.erase(gap.begin() + 2);
  try {
    replay_offline(gap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptLog);
    EXPECT_EQ(e.details()["seq"], 3);
  }

  auto jump = log;
  jump[1].payload["phase"] = "Done";
  EXPECT_EQ(replay_error(jump), ErrorCode::CorruptLog);

  auto bad_kind = log;
  bad_kind[1].payload["pool_writes"][0]["kind"] = "Nope";
  EXPECT_EQ(replay_error(bad_kind), ErrorCode::CorruptLog);

  auto no_state = log;
  no_state.back().payload.erase("state");
  EXPECT_EQ(replay_error(no_state), ErrorCode::CorruptLog);

  auto dir = temp_dir("corrupt");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "x.jsonl") << log[0].to_json().dump() << "\n{not json\n";
  try {
    read_event_log(dir / "x.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptLog);
    EXPECT_EQ(e.details()["seq"], 2);
  }
  EXPECT_THROW(read_event_log(dir / "missing.jsonl"), Error);
}

TEST(SessionId, HexFormat) {
  auto id = random_session_id();
  EXPECT_EQ(id.size(), 32u);
  EXPECT_EQ(id.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_NE(id, random_session_id());
}

TEST(SessionManager, BackendUnavailableAndUnknownSession) {
  ManualClock clock;
  SessionManager m(fx::fixture_kbs(), nullptr, llm::LlmSettings::defaults(), clock);
  try {
    m.create("clip an image", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
  }
  try {
    m.view("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSession);
  }
  EXPECT_TRUE(m.ids().empty());
}

TEST(SessionManager, PersistsAndReloads) {
  auto dir = temp_dir("persist");
  ManualClock clock;
  auto backend = llm::ScriptedBackend::from_json(fx::fixture_script());
  int n = 0;
  auto ids = [&n] { return "id" + std::to_string(++n); };
  Json artifacts;
  {
    SessionManager m(fx::fixture_kbs(), &backend, llm::LlmSettings::defaults(), clock, dir, ids);
    auto r = m.create(fx::corpus_task("cat6").requirement_text, {});
    EXPECT_EQ(r["session_id"], "id1");
    EXPECT_EQ(r["response"]["phase"], "AwaitingFeedback");
    m.feedback("id1", DebugFeedback::crashed("x"));
    artifacts = m.artifacts("id1");
    EXPECT_EQ(m.events("id1").size(), read_event_log(dir / "id1.jsonl").size());
  }
  SessionManager again(fx::fixture_kbs(), nullptr, llm::LlmSettings::defaults(), clock, dir, ids);
  EXPECT_EQ(again.load_persisted(), 1u);
  EXPECT_EQ(again.ids(), std::vector<std::string>{"id1"});
  EXPECT_EQ(again.artifacts("id1").dump(), artifacts.dump());
  // No backend after reload: the request is refused and the session kept.
  const auto logged = read_event_log(dir / "id1.jsonl").size();
  try {
    again.feedback("id1", DebugFeedback::success());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
  }
  EXPECT_EQ(again.view("id1")["phase"], "AwaitingFeedback");
  EXPECT_EQ(read_event_log(dir / "id1.jsonl").size(), logged);
  std::filesystem::remove_all(dir);
}
