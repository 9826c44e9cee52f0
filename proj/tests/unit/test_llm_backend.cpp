// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "cop/errors.hpp"
#include "cop/llm_backend.hpp"
#include "fixtures.hpp"

using namespace cop;
using namespace cop::llm;

namespace {

CompletionRequest request(Stage stage, std::string user) {
  CompletionRequest r;
  r.stage = stage;
  r.messages = {{Role::System, "sys"}, {Role::User, std::move(user)}};
  return r;
}

ScriptedRule rule(Stage s, std::string match, std::string response, bool once = false) {
  return {s, std::move(match), std::move(response), once};
}

}  // namespace

TEST(CompletionRequest, Validation) {
  auto ok = request(Stage::CodeImplementation, "hi");
  EXPECT_NO_THROW(ok.validate());
  auto r = ok;
  r.messages.clear();
  EXPECT_THROW(r.validate(), Error);
  r = ok;
  r.messages[0].role = Role::User;
  EXPECT_THROW(r.validate(), Error);
  r = ok;
  r.messages[1].content.clear();
  EXPECT_THROW(r.validate(), Error);
  r = ok;
  r.temperature = 2.5;
  EXPECT_THROW(r.validate(), Error);
  r = ok;
  r.max_tokens = 0;
  EXPECT_THROW(r.validate(), Error);
}

TEST(CompletionRequest, LastUserMessage) {
  auto r = request(Stage::CodeImplementation, "first");
  r.messages.push_back({Role::Assistant, "reply"});
  r.messages.push_back({Role::User, "second"});
  r.messages.push_back({Role::Assistant, "reply2"});
  EXPECT_EQ(r.last_user_message(), "second");
}

TEST(ScriptedBackend, FirstMatchingRuleWinsInDeclarationOrder) {
  ScriptedBackend b({rule(Stage::CodeImplementation, "landsat", "A"), rule(Stage::CodeImplementation, "", "B"),
                     rule(Stage::AlgorithmDesign, "", "C")});
  EXPECT_EQ(b.complete(request(Stage::CodeImplementation, "clip landsat")), "A");
  EXPECT_EQ(b.complete(request(Stage::CodeImplementation, "sentinel")), "B");
  EXPECT_EQ(b.complete(request(Stage::AlgorithmDesign, "landsat")), "C");
  EXPECT_EQ(b.call_count(), 3u);
}

TEST(ScriptedBackend, ConsumeOnceAndRewind) {
  ScriptedBackend b({rule(Stage::CodeDebugging, "", "first", true), rule(Stage::CodeDebugging, "", "later")});
  EXPECT_EQ(b.complete(request(Stage::CodeDebugging, "x")), "first");
  EXPECT_EQ(b.complete(request(Stage::CodeDebugging, "x")), "later");
  b.rewind();
  EXPECT_EQ(b.complete(request(Stage::CodeDebugging, "x")), "first");
}

TEST(ScriptedBackend, NoRuleThrows) {
  ScriptedBackend b({rule(Stage::CodeImplementation, "gdal", "x")});
  try {
    b.complete(request(Stage::CodeImplementation, "folium"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoScriptedRule);
  }
}

TEST(ScriptedBackend, JsonRoundTrip) {
  auto r = rule(Stage::CodeAnnotation, "m", "resp", true);
  auto back = ScriptedRule::from_json(r.to_json());
  EXPECT_EQ(back.stage, Stage::CodeAnnotation);
  EXPECT_EQ(back.match_substring, "m");
  EXPECT_TRUE(back.consume_once);
  EXPECT_EQ(r.to_json()["stage_tag"], "code_annotation");
  EXPECT_THROW(ScriptedRule::from_json(Json::parse(R"({"stage_tag":"bogus","response":"x"})")), Error);
  auto fixture = ScriptedBackend::load(fx::fixtures_dir() / "script.json");
  EXPECT_EQ(fixture.call_count(), 0u);
}

TEST(RecordingBackend, RecordsExchanges) {
  ScriptedBackend inner({rule(Stage::CodeImplementation, "", "code")});
  RecordingBackend rec(inner);
  rec.complete(request(Stage::CodeImplementation, "one"));
  rec.complete(request(Stage::CodeImplementation, "two"));
  auto ex = rec.exchanges();
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[1].request.last_user_message(), "two");
  EXPECT_EQ(ex[1].response, "code");
  rec.clear();
  EXPECT_TRUE(rec.exchanges().empty());
}

TEST(ExtractJson, FencesThenBareThenEmbedded) {
  EXPECT_EQ(extract_json("Sure:\n```json\n{\"a\": 1}\n```")->at("a"), 1);
  EXPECT_EQ(extract_json("```\nnot json\n```\n```json\n[1,2]\n```")->size(), 2u);
  EXPECT_EQ(extract_json(" {\"b\": \"x}\"} ")->at("b"), "x}");
  EXPECT_EQ(extract_json("The document is {\"c\": {\"d\": [1]}} as requested.")->at("c")["d"][0], 1);
  EXPECT_FALSE(extract_json("no json here").has_value());
}

TEST(CompleteJson, ReasksWithViolationsThenSucceeds) {
  fx::LambdaBackend b([](const CompletionRequest& r) -> std::string {
    if (r.messages.size() == 2) return "{\"Platform\": 3}";
    EXPECT_NE(r.last_user_message().find("field must be a string or null: Platform"), std::string::npos);
    return "{\"Platform\": \"GEE\"}";
  });
  auto out = complete_json(b, request(Stage::RequirementAnalysis, "x"), kSchemaRequirementsExtraction, 2);
  EXPECT_EQ(out.reask_count, 1);
  EXPECT_EQ(out.document["Platform"], "GEE");
  EXPECT_EQ(b.calls, 2);
}

TEST(CompleteJson, GivesUpAfterBoundedReasks) {
  fx::LambdaBackend b([](const CompletionRequest&) { return std::string("nothing"); });
  try {
    complete_json(b, request(Stage::AlgorithmDesign, "x"), kSchemaAlgorithmDesign, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StructuredOutputFailure);
    EXPECT_EQ(e.details()["violations"].size(), 3u);
  }
  EXPECT_EQ(b.calls, 3);
  EXPECT_THROW(complete_json(b, request(Stage::AlgorithmDesign, "x"), "unknown-schema"), Error);
}

TEST(LlmSettings, Defaults) {
  auto s = LlmSettings::defaults();
  EXPECT_EQ(s.for_stage(Stage::RequirementAnalysis).temperature, 0.0);
  EXPECT_EQ(s.for_stage(Stage::AlgorithmDesign).temperature, 0.0);
  EXPECT_EQ(s.for_stage(Stage::CodeImplementation).temperature, 0.2);
  EXPECT_EQ(s.for_stage(Stage::CodeDebugging).temperature, 0.2);
  EXPECT_EQ(s.for_stage(Stage::CodeAnnotation).temperature, 0.2);
  EXPECT_EQ(s.max_reasks, 2);
}

TEST(StageClient, AppliesStageSettings) {
  fx::LambdaBackend b([](const CompletionRequest& r) {
    EXPECT_EQ(r.stage, Stage::CodeDebugging);
    EXPECT_DOUBLE_EQ(r.temperature, 0.2);
    return std::string("ok");
  });
  StageClient c(b);
  EXPECT_EQ(c.text(Stage::CodeDebugging, {{Role::System, "s"}, {Role::User, "u"}}), "ok");
}

class FakeProvider : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      if (fail_first_ > 0) {
        --fail_first_;
        res.status = 503;
        return;
      }
      res.status = status_;
      res.set_content(reply_, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  HttpBackend backend() {
    HttpBackendOptions o;
    o.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1/";
    o.api_key = "k";
    o.model = "m";
    o.timeout_seconds = 5;
    o.backoff_ms = 1;
    return HttpBackend(o);
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  int fail_first_ = 0;
  int status_ = 200;
  std::string reply_ = R"({"choices":[{"message":{"role":"assistant","content":"hello"}}]})";
  std::string last_body_;
  std::string last_auth_;
};

TEST_F(FakeProvider, SendsOpenAiShapedRequest) {
  auto b = backend();
  EXPECT_EQ(b.complete(request(Stage::CodeImplementation, "hi")), "hello");
  auto body = Json::parse(last_body_);
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "hi");
  EXPECT_EQ(body["max_tokens"], 4096);
  EXPECT_EQ(last_auth_, "Bearer k");
}

TEST_F(FakeProvider, RetriesServerErrors) {
  fail_first_ = 2;
  auto b = backend();
  EXPECT_EQ(b.complete(request(Stage::CodeImplementation, "hi")), "hello");
  EXPECT_EQ(hits_.load(), 3);
}

TEST_F(FakeProvider, GivesUpAfterRetries) {
  fail_first_ = 10;
  auto b = backend();
  try {
    b.complete(request(Stage::CodeImplementation, "hi"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Transport);
  }
  EXPECT_EQ(hits_.load(), 3);
}

TEST_F(FakeProvider, ClientErrorsAreNotRetried) {
  status_ = 401;
  auto b = backend();
  EXPECT_THROW(b.complete(request(Stage::CodeImplementation, "hi")), Error);
  EXPECT_EQ(hits_.load(), 1);
}

TEST_F(FakeProvider, EmptyContentIsRefusal) {
  reply_ = R"({"choices":[{"message":{"role":"assistant","content":""}}]})";
  auto b = backend();
  try {
    b.complete(request(Stage::CodeImplementation, "hi"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProviderRefusal);
  }
}

TEST(HttpBackend, RejectsBaseUrlWithoutScheme) {
  HttpBackendOptions o;
  o.base_url = "localhost:8080";
  EXPECT_THROW(HttpBackend{o}, Error);
}
