// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "cop/errors.hpp"
#include "cop/knowledge_base.hpp"
#include "fixtures.hpp"

using namespace cop;
using namespace cop::kb;

namespace {

Json function_record(const std::string& id, const std::string& platform, const std::string& language,
                     const std::string& description) {
  return {{"Operator_id", id},        {"Full_name", "lib." + id}, {"Short_name", id},
          {"Library_name", "lib"},    {"Language", language},     {"Platform", platform},
          {"Description", description}, {"Usage", id + "()"},    {"Parameters", ""},
          {"Output_type", "Image"}};
}

Json dataset_record(const std::string& id, const std::string& description, const std::string& platform = "") {
  Json j = {{"Dataset_id", id},          {"Name", id},      {"Provider", "p"},
            {"Snippet", "load('" + id + "')"}, {"Tags", Json::array({"tag"})},
            {"Description", description}, {"DOI", ""},       {"Website", ""}};
  if (!platform.empty()) j["Platform"] = platform;
  return j;
}

Json platform_record(const std::string& id, const std::string& name) {
  return {{"Platform_id", id},
          {"Name", name},
          {"Description", "desc"},
          {"Platform_type", "cloud"},
          {"Task_suitability", ""},
          {"Data_source_interfaces", ""},
          {"Access_permissions", ""},
          {"Technical_support", ""},
          {"Cross_platform_compatibility", ""}};
}

}  // namespace

TEST(Tokenize, LowercasesAndSplitsCamelCase) {
  EXPECT_EQ(tokenize("ee.Image.normalizedDifference(NIR, red)"),
            (std::vector<std::string>{"ee", "image", "normalized", "difference", "nir", "red"}));
  EXPECT_EQ(tokenize("HTMLParser GeoTIFF SR_B4 MOD14A2"),
            (std::vector<std::string>{"html", "parser", "geo", "tiff", "sr", "b4", "mod14a2"}));
  EXPECT_EQ(tokenize("  --  "), std::vector<std::string>{});
  EXPECT_EQ(tokenize("S\xC3\xA3o Paulo"), (std::vector<std::string>{"s\xc3\xa3o", "paulo"}));
}

TEST(KbIndex, LoadsFixtureKnowledgeBases) {
  const auto& kbs = fx::fixture_kbs();
  ASSERT_TRUE(kbs.platform && kbs.function && kbs.dataset);
  EXPECT_EQ(kbs.platform->size(), 14u);
  EXPECT_GE(kbs.function->size(), 100u);
  EXPECT_LE(kbs.function->size(), 200u);
  EXPECT_LE(kbs.dataset->size(), 200u);
  EXPECT_NE(kbs.function->get_by_id("google_ee_image_clip"), nullptr);
  EXPECT_EQ(kbs.function->get_by_id("nope"), nullptr);
}

TEST(KbIndex, MissingFieldIsNamedForEveryKind) {
  struct Case {
    KbKind kind;
    Json record;
  };
  std::vector<Case> cases = {{KbKind::Function, function_record("a", "P", "Python", "d")},
                             {KbKind::Dataset, dataset_record("a", "d")},
                             {KbKind::Platform, platform_record("a", "P")}};
  for (const auto& c : cases) {
    for (auto field : required_fields(c.kind)) {
      Json rec = c.record;
      rec.erase(std::string(field));
      try {
        KbIndex::from_json(Json::array({c.record, rec}), c.kind);
        ADD_FAILURE() << "accepted record without " << field;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
        EXPECT_NE(std::string(e.what()).find(std::string(field)), std::string::npos) << e.what();
        EXPECT_EQ(e.details()["violations"][0]["field"], std::string(field));
        EXPECT_EQ(e.details()["violations"][0]["record_index"], 1);
      }
    }
  }
}

TEST(KbIndex, RejectsWrongTypesAndBlankIds) {
  Json rec = dataset_record("a", "d");
  rec["Tags"] = "not-a-list";
  EXPECT_THROW(KbIndex::from_json(Json::array({rec}), KbKind::Dataset), Error);
  Json f = function_record("", "P", "Python", "d");
  EXPECT_THROW(KbIndex::from_json(Json::array({f}), KbKind::Function), Error);
  EXPECT_THROW(KbIndex::from_json(Json::object(), KbKind::Function), Error);
}

TEST(KbIndex, RejectsDuplicateIds) {
  try {
    KbIndex::from_json(Json::array({function_record("dup", "P", "R", "x"), function_record("dup", "P", "R", "y")}),
                       KbKind::Function);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateId);
    EXPECT_EQ(e.details()["id"], "dup");
  }
}

TEST(KbIndex, LoadReportsIoAndParseErrors) {
  try {
    KbIndex::load("/nonexistent/function.json", KbKind::Function);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
}

TEST(KbSearch, ScoresMatchHandComputedBm25) {
  // Three documents; "clip" occurs in two of them.
  auto idx = KbIndex::from_json(Json::array({function_record("a", "P", "Python", "clip raster"),
                                             function_record("b", "P", "Python", "clip clip"),
                                             function_record("c", "P", "Python", "buffer")}),
                                KbKind::Function);
  // Index text: full name, short name, description, usage.
  // a: lib a a clip raster a -> 6 tokens; b: lib b b clip clip b -> 6; c: lib c c buffer c -> 5.
  const double avg = 17.0 / 3.0;
  const double idf = std::log(1.0 + (3.0 - 2.0 + 0.5) / (2.0 + 0.5));
  auto term = [&](double tf, double dl) { return idf * (tf * 2.2) / (tf + 1.2 * (0.25 + 0.75 * dl / avg)); };
  auto hits = idx.search("Clip", {}, 10);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].record_id, "b");
  EXPECT_NEAR(hits[0].score, term(2, 6), 1e-12);
  EXPECT_EQ(hits[1].record_id, "a");
  EXPECT_NEAR(hits[1].score, term(1, 6), 1e-12);
}

TEST(KbSearch, RepeatedQueryTermsCountOnce) {
  const auto& f = *fx::fixture_kbs().function;
  auto once = f.search("clip", {}, 5);
  auto twice = f.search("clip clip CLIP", {}, 5);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once[i].score, twice[i].score);
}

TEST(KbSearch, TiesBreakByIdAscending) {
  auto idx = KbIndex::from_json(Json::array({dataset_record("zeta", "forest"), dataset_record("alpha", "forest"),
                                             dataset_record("mid", "forest")}),
                                KbKind::Dataset);
  auto hits = idx.search("forest", {}, 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].record_id, "alpha");
  EXPECT_EQ(hits[1].record_id, "mid");
  EXPECT_EQ(hits[2].record_id, "zeta");
}

TEST(KbSearch, FiltersAreCaseInsensitiveAndDoNotLeak) {
  const auto& f = *fx::fixture_kbs().function;
  auto hits = f.search("clip raster image export", {std::string("google earth engine"), std::string("JAVASCRIPT")}, 50);
  ASSERT_FALSE(hits.empty());
  for (const auto& h : hits) {
    auto rec = f.get_by_id(h.record_id);
    EXPECT_EQ(*record_platform(*rec), "Google Earth Engine");
    EXPECT_EQ(*record_language(*rec), "JavaScript");
  }
}

TEST(KbSearch, DatasetWithoutPlatformIsExcludedByPlatformFilter) {
  auto idx = KbIndex::from_json(Json::array({dataset_record("a", "rain", "GEE"), dataset_record("b", "rain")}),
                                KbKind::Dataset);
  EXPECT_EQ(idx.search("rain", {}, 5).size(), 2u);
  auto hits = idx.search("rain", {std::string("gee"), std::nullopt}, 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].record_id, "a");
  // Language has no meaning for datasets.
  EXPECT_EQ(idx.search("rain", {std::nullopt, std::string("R")}, 5).size(), 2u);
}

TEST(KbSearch, EmptyQueryAndBadK) {
  const auto& f = *fx::fixture_kbs().function;
  EXPECT_TRUE(f.search("   ", {}, 5).empty());
  EXPECT_TRUE(f.search("zzzqqq", {}, 5).empty());
  EXPECT_THROW(f.search("clip", {}, 0), Error);
}

TEST(KbSearch, SnippetsCarryMarker) {
  for (auto kind : {KbKind::Platform, KbKind::Function, KbKind::Dataset}) {
    auto hits = fx::fixture_kbs().get(kind)->search("landsat image earth engine python", {}, 3);
    ASSERT_FALSE(hits.empty());
    for (const auto& h : hits) {
      EXPECT_EQ(h.snippet.rfind(kSnippetMarker, 0), 0u) << h.snippet;
      EXPECT_EQ(h.kind, kind);
    }
  }
}

TEST(KbSearch, MatchesFrozenReferenceScores) {
  auto cases = fx::read_json(fx::fixtures_dir() / "oracle" / "bm25_expected.json");
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) {
    auto kind = *kind_from_string(c["kind"].get<std::string>());
    SearchFilters f;
    if (!c["platform"].is_null()) f.platform = c["platform"].get<std::string>();
    if (!c["language"].is_null()) f.language = c["language"].get<std::string>();
    auto hits = fx::fixture_kbs().get(kind)->search(c["query"].get<std::string>(), f, c["k"].get<int>());
    ASSERT_EQ(hits.size(), c["hits"].size()) << c["query"];
    for (std::size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(hits[i].record_id, c["hits"][i]["record_id"]) << c["query"];
      EXPECT_NEAR(hits[i].score, c["hits"][i]["score"].get<double>(), 1e-9);
    }
  }
}

TEST(KnowledgeBases, MissingFilesGiveNull) {
  auto kbs = KnowledgeBases::load_dir("/nonexistent");
  EXPECT_EQ(kbs.function, nullptr);
  EXPECT_EQ(kbs.get(KbKind::Dataset), nullptr);
}
