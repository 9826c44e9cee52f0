// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "httplib.h"

#include "cop/service.hpp"
#include "fixtures.hpp"

using namespace cop;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest()
      : backend_(llm::ScriptedBackend::from_json(fx::fixture_script())),
        sessions_(fx::fixture_kbs(), &backend_, llm::LlmSettings::defaults(), clock_, std::nullopt,
                  [this] { return "task" + std::to_string(++next_); }),
        service_(sessions_) {}

  HttpResponse get(const std::string& path, const std::map<std::string, std::string>& q = {}) {
    return service_.handle("GET", path, q, "");
  }
  HttpResponse post(const std::string& path, const Json& body) {
    return service_.handle("POST", path, {}, body.dump());
  }
  std::string create(const std::string& task_id) {
    auto r = post("/api/tasks", {{"requirement_text", fx::corpus_task(task_id).requirement_text}});
    EXPECT_EQ(r.status, 201);
    return r.body["session_id"];
  }

  int next_ = 0;
  ManualClock clock_;
  llm::ScriptedBackend backend_;
  SessionManager sessions_;
  Service service_;
};

}  // namespace

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status(ErrorCode::Validation), 400);
  EXPECT_EQ(http_status(ErrorCode::InvalidFeedback), 400);
  EXPECT_EQ(http_status(ErrorCode::UnknownSession), 404);
  EXPECT_EQ(http_status(ErrorCode::WrongPhase), 409);
  EXPECT_EQ(http_status(ErrorCode::BackendUnavailable), 503);
  EXPECT_EQ(http_status(ErrorCode::NoScriptedRule), 500);
}

TEST_F(ServiceTest, TaskLifecycle) {
  auto created = post("/api/tasks", {{"requirement_text", fx::corpus_task("cat2").requirement_text}});
  ASSERT_EQ(created.status, 201);
  EXPECT_EQ(created.body["session_id"], "task1");
  EXPECT_EQ(created.body["response"]["phase"], "AwaitingFeedback");

  auto fb = post("/api/tasks/task1/feedback", {{"executable", true}, {"correct", false}, {"observed_output", "0"}});
  EXPECT_EQ(fb.status, 200);
  EXPECT_EQ(fb.body["code"]["revision"], 1);
  fb = post("/api/tasks/task1/feedback", {{"executable", true}, {"correct", true}});
  EXPECT_EQ(fb.body["phase"], "Done");

  auto view = get("/api/tasks/task1");
  EXPECT_EQ(view.status, 200);
  EXPECT_EQ(view.body["phase"], "Done");
  auto art = get("/api/tasks/task1/artifacts");
  EXPECT_EQ(art.status, 200);
  EXPECT_EQ(art.body["code_revisions"].size(), 2u);
  EXPECT_TRUE(art.body.contains("requirements"));
  EXPECT_TRUE(art.body.contains("design"));
  EXPECT_TRUE(art.body["pool"].is_array() || art.body["pool"].is_object());
}

TEST_F(ServiceTest, ConfigIsHonoured) {
  auto r = post("/api/tasks", {{"requirement_text", fx::corpus_task("cat4").requirement_text},
                               {"config", {{"ablation", {{"feedback", false}}}}}});
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body["response"]["phase"], "Done");
  EXPECT_EQ(get("/api/tasks/" + r.body["session_id"].get<std::string>() + "/artifacts").body["config"]["ablation"]
                ["feedback"],
            false);
}

TEST_F(ServiceTest, ClarificationAnswers) {
  const auto& task = fx::corpus_task("cat2");
  auto doc = task.gold;
  doc.get(Element::OutputFormat).reset();
  llm::ScriptedBackend b({{llm::Stage::RequirementAnalysis, task.requirement_text, doc.to_json().dump(), false}});
  for (const auto& j : fx::fixture_script()) b.add_rule(llm::ScriptedRule::from_json(j));
  SessionManager m(fx::fixture_kbs(), &b, llm::LlmSettings::defaults(), clock_, std::nullopt, [] { return "c1"; });
  Service svc(m);
  auto r = svc.handle("POST", "/api/tasks", {}, Json{{"requirement_text", task.requirement_text}}.dump());
  EXPECT_EQ(r.body["response"]["phase"], "Clarifying");
  EXPECT_EQ(r.body["response"]["clarification"]["missing"], Json::array({"output_format"}));

  auto bad = svc.handle("POST", "/api/tasks/c1/answers", {}, R"({"answers":{"Output_Format":""}})");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(bad.body["error"], "EmptyAnswer");
  bad = svc.handle("POST", "/api/tasks/c1/answers", {}, R"({"answers":["GeoTIFF"]})");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(svc.handle("POST", "/api/tasks/c1/feedback", {}, R"({"executable":true,"correct":true})").status, 409);

  auto ok = svc.handle("POST", "/api/tasks/c1/answers", {}, R"({"answers":{"Output_Format":"GeoTIFF"}})");
  EXPECT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body["phase"], "AwaitingFeedback");
  EXPECT_EQ(svc.handle("POST", "/api/tasks/c1/answers", {}, R"({"answers":{"Platform":"x"}})").status, 409);
}

TEST_F(ServiceTest, ErrorStatuses) {
  EXPECT_EQ(post("/api/tasks", Json::object()).status, 400);
  EXPECT_EQ(service_.handle("POST", "/api/tasks", {}, "{oops").status, 400);
  EXPECT_EQ(post("/api/tasks", {{"requirement_text", "  "}}).status, 400);
  auto unknown = get("/api/tasks/nope");
  EXPECT_EQ(unknown.status, 404);
  EXPECT_EQ(unknown.body["error"], "UnknownSession");
  EXPECT_EQ(get("/api/tasks/nope/artifacts").status, 404);
  EXPECT_EQ(get("/api/elsewhere").status, 404);
  EXPECT_EQ(service_.handle("DELETE", "/api/tasks/x", {}, "").status, 404);

  auto id = create("cat1");
  EXPECT_EQ(post("/api/tasks/" + id + "/feedback", {{"executable", false}}).status, 400);
  EXPECT_EQ(post("/api/tasks/" + id + "/answers", {{"answers", {{"Platform", "x"}}}}).status, 409);

  auto failed = post("/api/tasks", {{"requirement_text", "Nothing in the script covers this."}});
  EXPECT_EQ(failed.status, 201);
  EXPECT_EQ(failed.body["response"]["phase"], "Failed");
}

TEST_F(ServiceTest, NoBackendIs503) {
  SessionManager m(fx::fixture_kbs(), nullptr, llm::LlmSettings::defaults(), clock_);
  Service svc(m);
  auto r = svc.handle("POST", "/api/tasks", {}, R"({"requirement_text":"clip"})");
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(r.body["error"], "BackendUnavailable");
}

TEST_F(ServiceTest, KbSearch) {
  auto r = get("/api/kb/function/search", {{"q", "clip image"}, {"platform", "Google Earth Engine"}, {"k", "3"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["kind"], "function");
  ASSERT_FALSE(r.body["hits"].empty());
  EXPECT_LE(r.body["hits"].size(), 3u);
  for (const auto& h : r.body["hits"]) {
    const auto* rec = fx::fixture_kbs().function->get_by_id(h["record_id"].get<std::string>());
    ASSERT_NE(rec, nullptr);
    EXPECT_EQ(*kb::record_platform(*rec), "Google Earth Engine");
  }
  EXPECT_EQ(get("/api/kb/dataset/search", {{"q", "precipitation"}}).status, 200);
  EXPECT_EQ(get("/api/kb/function/search").status, 400);
  EXPECT_EQ(get("/api/kb/function/search", {{"q", "x"}, {"k", "two"}}).status, 400);
  EXPECT_EQ(get("/api/kb/widgets/search", {{"q", "x"}}).status, 400);
}

TEST_F(ServiceTest, RealHttpRoundTrip) {
  int port = service_.serve_in_background();
  ASSERT_GT(port, 0);
  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Post("/api/tasks", Json{{"requirement_text", fx::corpus_task("cat7").requirement_text}}.dump(),
                      "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  auto id = Json::parse(res->body)["session_id"].get<std::string>();
  auto got = cli.Get("/api/tasks/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(got->get_header_value("Content-Type").rfind("application/json", 0), 0u);
  auto search = cli.Get("/api/kb/dataset/search?q=land%20cover&k=2");
  ASSERT_TRUE(search);
  EXPECT_EQ(Json::parse(search->body)["query"], "land cover");
  auto missing = cli.Get("/api/tasks/zzz");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  service_.stop();
}
