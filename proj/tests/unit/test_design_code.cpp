// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "cop/algorithm_design.hpp"
#include "cop/code_implementation.hpp"
#include "cop/errors.hpp"
#include "cop/info_pool.hpp"
#include "cop/prompts.hpp"
#include "fixtures.hpp"

using namespace cop;

namespace {

RequirementsDocument gee_doc() {
  RequirementsDocument d;
  d.get(Element::Platform) = "Google Earth Engine";
  d.get(Element::ProgrammingLanguage) = "JavaScript";
  d.get(Element::AnalysisGoal) = "Clip Landsat imagery to the Brazilian region.";
  d.get(Element::SpatialExtent) = "Brazil";
  d.get(Element::DataSourceAndFormat) = "Landsat imagery";
  d.get(Element::AnalysisMethodology) = "Image clipping";
  d.get(Element::OutputFormat) = "GeoTIFF";
  return d;
}

AlgorithmDesignDocument two_modules() {
  AlgorithmDesignDocument d;
  d.modules.push_back({1, "Load Brazil boundary", "d", "i", "o", "ee.FeatureCollection"});
  d.modules.push_back({2, "Export GeoTIFF", "d", "i", "o", "Export.image.toDrive"});
  return d;
}

std::vector<prompts::Section> user_sections(const std::vector<llm::ChatMessage>& m) {
  return prompts::parse_sections(m.back().content);
}

std::vector<std::string> titles(const std::vector<prompts::Section>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(x.title);
  return out;
}

}  // namespace

TEST(InfoPool, PutGetAndRevisions) {
  ManualClock clock;
  InfoPool pool(clock);
  EXPECT_FALSE(pool.has(ArtifactKind::CodeDraft));
  pool.put(ArtifactKind::CodeDraft, "a();");
  const auto& second = pool.put(ArtifactKind::CodeDraft, "b();");
  EXPECT_EQ(second.revision, 1);
  EXPECT_EQ(pool.get(ArtifactKind::CodeDraft)->payload, "b();");
  EXPECT_EQ(pool.code_history().size(), 2u);
  pool.put(ArtifactKind::RequirementsDoc, gee_doc().to_json());
  auto snap = pool.snapshot();
  ASSERT_EQ(snap.size(), 3u);
  EXPECT_EQ(snap[0].kind, ArtifactKind::RequirementsDoc);
  EXPECT_EQ(snap[1].revision, 0);
  EXPECT_EQ(snap[2].revision, 1);
  EXPECT_EQ(pool.journal().size(), 3u);
  EXPECT_EQ(pool.journal()[0].created_at, "2025-01-01T00:00:00Z");
  pool.clear();
  EXPECT_TRUE(pool.snapshot().empty());
  EXPECT_TRUE(pool.journal().empty());
}

TEST(InfoPool, RejectsPayloadsNotMatchingKind) {
  ManualClock clock;
  InfoPool pool(clock);
  EXPECT_THROW(pool.put(ArtifactKind::CodeDraft, Json::object()), Error);
  EXPECT_THROW(pool.put(ArtifactKind::DebugTranscript, Json::array({1})), Error);
  EXPECT_THROW(pool.put(ArtifactKind::RequirementsDoc, Json::parse(R"({"requirements":{}})")), Error);
  EXPECT_THROW(pool.put(ArtifactKind::AlgorithmDesign, Json::parse(R"({"Algorithm":[]})")), Error);
  EXPECT_TRUE(pool.journal().empty());
}

TEST(InfoPool, JournalReplayRebuildsIdenticalSnapshot) {
  ManualClock a_clock;
  InfoPool a(a_clock);
  a.put(ArtifactKind::RequirementsDoc, gee_doc().to_json());
  a.put(ArtifactKind::AlgorithmDesign, two_modules().to_json());
  a.put(ArtifactKind::CodeDraft, "x();");
  a.put(ArtifactKind::DebugTranscript, Json::array({Json::object({{"event", "feedback"}})}));
  a.put(ArtifactKind::CodeDraft, "y();");
  ManualClock other(0);
  InfoPool b(other);
  for (const auto& e : a.journal()) b.put_at(e.kind, e.payload, e.created_at);
  EXPECT_EQ(a.snapshot_json().dump(), b.snapshot_json().dump());
}

TEST(DesignValidation, StructuralRules) {
  EXPECT_TRUE(design::validate_design(two_modules()).empty());
  AlgorithmDesignDocument empty;
  EXPECT_EQ(design::validate_design(empty).at(0).message, "empty design");
  auto d = two_modules();
  d.modules[1].sequence = 3;
  d.modules[0].output = " ";
  auto v = design::validate_design(d);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], (design::DesignViolation{1, "output", "empty output"}));
  EXPECT_EQ(v[1], (design::DesignViolation{2, "sequence", "non-consecutive sequence"}));
  EXPECT_EQ(design::validate_design(two_modules(), 1).at(0).message, "module count > 1");
}

TEST(Design, PromptCarriesOnlyRequirementsAndResultIsStored) {
  ManualClock clock;
  InfoPool pool(clock);
  auto req = gee_doc();
  pool.put(ArtifactKind::RequirementsDoc, req.to_json());
  fx::LambdaBackend b([&](const llm::CompletionRequest& r) {
    auto s = user_sections(r.messages);
    EXPECT_EQ(titles(s), std::vector<std::string>{std::string(prompts::kRequirementsDocument)});
    EXPECT_EQ(Json::parse(s[0].body), req.to_json());
    return two_modules().to_json().dump();
  });
  llm::StageClient client(b);
  EXPECT_EQ(design::design(req, client, pool), two_modules());
  EXPECT_EQ(pool.get(ArtifactKind::AlgorithmDesign)->payload, two_modules().to_json());
}

TEST(Design, RejectsStaleRequirementsAndInvalidDesigns) {
  ManualClock clock;
  InfoPool pool(clock);
  fx::LambdaBackend b([](const llm::CompletionRequest&) {
    auto d = two_modules();
    d.modules[0].sequence = 2;
    return d.to_json().dump();
  });
  llm::StageClient client(b);
  try {
    design::design(gee_doc(), client, pool);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingArtifact);
  }
  pool.put(ArtifactKind::RequirementsDoc, gee_doc().to_json());
  try {
    design::design(gee_doc(), client, pool);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DesignInvalid);
  }
  EXPECT_FALSE(pool.has(ArtifactKind::AlgorithmDesign));
}

TEST(Retrieval, QueryAndFilters) {
  auto req = gee_doc();
  auto d = two_modules();
  EXPECT_EQ(code::support_query(req, d),
            "Clip Landsat imagery to the Brazilian region. Image clipping Load Brazil boundary Export GeoTIFF");
  auto hits = code::retrieve_support(req, d, fx::fixture_kbs(), 5);
  ASSERT_FALSE(hits.function.empty());
  ASSERT_FALSE(hits.platform.empty());
  EXPECT_EQ(hits.platform[0].record_id, "P01");
  for (const auto& h : hits.function) {
    auto rec = fx::fixture_kbs().function->get_by_id(h.record_id);
    EXPECT_EQ(*kb::record_platform(*rec), "Google Earth Engine");
  }
  for (const auto& h : hits.dataset) {
    auto rec = fx::fixture_kbs().dataset->get_by_id(h.record_id);
    EXPECT_EQ(*kb::record_platform(*rec), "Google Earth Engine");
  }
  auto snippets = code::render_snippets(hits);
  EXPECT_EQ(snippets.size(), hits.platform.size() + hits.dataset.size() + hits.function.size());
  EXPECT_EQ(snippets.front(), hits.platform.front().snippet);
  EXPECT_EQ(snippets.back(), hits.function.back().snippet);
  EXPECT_TRUE(code::retrieve_support(req, d, kb::KnowledgeBases{}, 5).function.empty());
}

TEST(Context, PoolOnReadsPoolPoolOffNeedsPassedDocuments) {
  ManualClock clock;
  InfoPool pool(clock);
  code::SupportHits hits;
  AblationConfig on;
  try {
    code::assemble_context(pool, hits, on);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingArtifact);
  }
  pool.put(ArtifactKind::RequirementsDoc, gee_doc().to_json());
  pool.put(ArtifactKind::AlgorithmDesign, two_modules().to_json());
  auto ctx = code::assemble_context(pool, hits, on);
  EXPECT_EQ(ctx.platform(), "Google Earth Engine");
  EXPECT_EQ(ctx.design, two_modules());

  AblationConfig off;
  off.pool = false;
  EXPECT_THROW(code::assemble_context(pool, hits, off), Error);
  auto req = gee_doc();
  auto d = two_modules();
  ctx = code::assemble_context(InfoPool(clock), hits, off, &req, &d);
  EXPECT_EQ(ctx.language(), "JavaScript");
}

TEST(CodePrompt, SectionsFollowMechanisms) {
  code::PromptContext ctx{gee_doc(), two_modules(), {"<<KB>> FUNCTION ee.Image.clip"}, {}};
  EXPECT_EQ(titles(user_sections(code::code_prompt(ctx))),
            (std::vector<std::string>{"Target", "User Requirements Document", "Algorithm Design Document",
                                      "Knowledge Base"}));
  ctx.ablation.pool = false;
  ctx.kb_snippets.clear();
  auto msgs = code::code_prompt(ctx);
  EXPECT_EQ(titles(user_sections(msgs)), std::vector<std::string>{"Algorithm Design Document"});
  EXPECT_EQ(msgs.back().content.find("<<KB>>"), std::string::npos);
}

TEST(Generate, StripsFencesAndStoresRevisions) {
  ManualClock clock;
  InfoPool pool(clock);
  fx::LambdaBackend b([](const llm::CompletionRequest&) { return std::string("```javascript\nvar a = 1;\n```"); });
  llm::StageClient client(b);
  code::PromptContext ctx{gee_doc(), two_modules(), {}, {}};
  auto art = code::generate(ctx, client, pool);
  EXPECT_EQ(art.source, "var a = 1;");
  EXPECT_EQ(art.revision, 0);
  EXPECT_EQ(art.language, "JavaScript");
  EXPECT_EQ(art.to_json()["provenance"], "generated");
  EXPECT_EQ(code::generate(ctx, client, pool).revision, 1);

  fx::LambdaBackend blank([](const llm::CompletionRequest&) { return std::string("```\n\n```"); });
  llm::StageClient blank_client(blank);
  try {
    code::generate(ctx, blank_client, pool);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCode);
  }
}

TEST(Generate, SourceExtensions) {
  EXPECT_EQ(code::source_extension("JavaScript"), ".js");
  EXPECT_EQ(code::source_extension("python"), ".py");
  EXPECT_EQ(code::source_extension("R"), ".R");
  EXPECT_EQ(code::source_extension("Julia"), ".txt");
}
