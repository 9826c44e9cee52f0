// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "cop/debug_annotate.hpp"
#include "cop/errors.hpp"
#include "cop/prompts.hpp"
#include "fixtures.hpp"

using namespace cop;
using namespace cop::debug;

namespace {

AlgorithmDesignDocument design_of(int n) {
  AlgorithmDesignDocument d;
  for (int i = 1; i <= n; ++i) d.modules.push_back({i, "Step " + std::to_string(i), "d", "i", "o", "x"});
  return d;
}

code::PromptContext python_ctx(bool pool = true) {
  RequirementsDocument r;
  r.get(Element::Platform) = "Python GDAL";
  r.get(Element::ProgrammingLanguage) = "Python";
  r.get(Element::AnalysisGoal) = "Average precipitation";
  r.get(Element::DataSourceAndFormat) = "CHIRPS";
  r.get(Element::OutputFormat) = "GeoTIFF";
  code::PromptContext ctx{r, design_of(2), {}, {}};
  ctx.ablation.pool = pool;
  return ctx;
}

const char* kOriginal = "import numpy as np\n\ndata = np.zeros(3)\nprint(data.mean())\n";

const char* kCompliant =
    "# Created: 2025-01-01T00:00:00Z\n"
    "# Platform: Python GDAL\n"
    "# Description: Average precipitation\n"
    "\n"
    "# Load the data\n"
    "import numpy as np\n"
    "\n"
    "data = np.zeros(3)  # three months\n"
    "# Report the mean\n"
    "print(data.mean())\n";

std::vector<std::string> check(const std::string& text, int modules = 2, const std::string& lang = "Python",
                               const std::string& original = kOriginal) {
  return check_annotation(parse_annotated(text, lang), design_of(modules), lang, original);
}

std::vector<std::string> titles(const std::vector<llm::ChatMessage>& m) {
  std::vector<std::string> out;
  for (const auto& s : prompts::parse_sections(m.back().content)) out.push_back(s.title);
  return out;
}

}  // namespace

TEST(Feedback, ValidationAndJson) {
  EXPECT_NO_THROW(DebugFeedback::success().validate());
  EXPECT_THROW((DebugFeedback{false, false, std::nullopt, std::nullopt}.validate()), Error);
  EXPECT_THROW((DebugFeedback{true, false, std::nullopt, std::nullopt}.validate()), Error);
  EXPECT_THROW((DebugFeedback{false, false, std::string("  "), std::nullopt}.validate()), Error);
  auto fb = DebugFeedback::from_json(Json::parse(R"({"executable":false,"correct":true,"error_text":"boom"})"));
  EXPECT_FALSE(fb.correct);
  EXPECT_EQ(fb.error_text, "boom");
  EXPECT_EQ(DebugFeedback::from_json(fb.to_json()), fb);
  EXPECT_THROW(DebugFeedback::from_json(Json::parse(R"({"executable":true})")), Error);
  EXPECT_THROW(DebugFeedback::from_json(Json::parse(R"({"executable":"yes"})")), Error);
  EXPECT_THROW(DebugFeedback::from_json(Json::parse(R"({"executable":false,"error_text":5})")), Error);
}

TEST(Transition, ExhaustiveOverIterationsAndFeedbackShapes) {
  const std::vector<DebugFeedback> shapes = {DebugFeedback::success(), DebugFeedback::wrong_output("x"),
                                             DebugFeedback::crashed("e"),
                                             DebugFeedback{false, true, std::string("e"), std::nullopt}};
  for (int it = 0; it <= 3; ++it) {
    for (const auto& fb : shapes) {
      DebugSession s{it, 3, DebugState::AwaitingFeedback, false};
      auto n = next_transition(s, fb);
      if (fb.passed()) {
        EXPECT_EQ(n, (DebugSession{it, 3, DebugState::Annotating, false}));
      } else if (it < 3) {
        EXPECT_EQ(n, (DebugSession{it + 1, 3, DebugState::Repairing, false}));
      } else {
        EXPECT_EQ(n, (DebugSession{3, 3, DebugState::Annotating, true}));
      }
    }
  }
}

TEST(Transition, RejectsWrongStateAndBadFeedback) {
  for (auto st : {DebugState::Repairing, DebugState::Annotating, DebugState::Done}) {
    try {
      next_transition({0, 3, st, false}, DebugFeedback::success());
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::WrongState);
    }
  }
  EXPECT_THROW(next_transition({}, DebugFeedback{false, false, std::nullopt, std::nullopt}), Error);
}

TEST(Transition, ZeroCapAnnotatesImmediately) {
  auto n = next_transition({0, 0, DebugState::AwaitingFeedback, false}, DebugFeedback::crashed("e"));
  EXPECT_EQ(n.state, DebugState::Annotating);
  EXPECT_TRUE(n.exhausted);
}

TEST(Repair, PromptSectionsAndStateChange) {
  ManualClock clock;
  InfoPool pool(clock);
  pool.put(ArtifactKind::CodeDraft, "print(1)");
  code::CodeArtifact cur{"Python", "Python GDAL", "print(1)", 0, code::Provenance::Generated};
  auto ctx = python_ctx();
  ctx.kb_snippets = {"<<KB>> FUNCTION osgeo.gdal.Open"};
  auto fb = DebugFeedback::crashed("NameError: x");
  EXPECT_EQ(titles(repair_prompt(cur, fb, ctx)),
            (std::vector<std::string>{"Target", "User Requirements Document", "Algorithm Design Document",
                                      "Knowledge Base", "Current Code", "Execution Feedback"}));
  auto off = python_ctx(false);
  auto msgs = repair_prompt(cur, DebugFeedback::wrong_output("3"), off);
  EXPECT_EQ(titles(msgs), (std::vector<std::string>{"Current Code", "Execution Feedback"}));
  EXPECT_EQ(prompts::parse_sections(msgs.back().content)[1].body,
            "Executable: Y\nResult correct: N\nObserved output:\n3");

  fx::LambdaBackend b([](const llm::CompletionRequest& r) {
    EXPECT_EQ(r.stage, llm::Stage::CodeDebugging);
    return std::string("```python\nprint(2)\n```");
  });
  llm::StageClient client(b);
  DebugSession s{0, 3, DebugState::AwaitingFeedback, false};
  EXPECT_THROW(repair(s, cur, fb, ctx, client, pool), Error);
  s = next_transition(s, fb);
  auto fixed = repair(s, cur, fb, ctx, client, pool);
  EXPECT_EQ(fixed.source, "print(2)");
  EXPECT_EQ(fixed.revision, 1);
  EXPECT_EQ(fixed.provenance, code::Provenance::Repaired);
  EXPECT_EQ(s.state, DebugState::AwaitingFeedback);
  EXPECT_EQ(s.iteration, 1);
  auto transcript = pool.get(ArtifactKind::DebugTranscript)->payload;
  ASSERT_EQ(transcript.size(), 1u);
  EXPECT_EQ(transcript[0]["event"], "repair");
  EXPECT_EQ(transcript[0]["to_revision"], 1);
}

TEST(CommentToken, Languages) {
  EXPECT_EQ(comment_token("JavaScript"), "//");
  EXPECT_EQ(comment_token("python"), "#");
  EXPECT_EQ(comment_token("R"), "#");
  EXPECT_FALSE(comment_token("Fortran"));
  EXPECT_THROW(parse_annotated("x", "Fortran"), Error);
}

TEST(ParseAnnotated, HeaderFieldsAndSynonyms) {
  auto a = parse_annotated(kCompliant, "Python");
  EXPECT_EQ(a.header.created_at, "2025-01-01T00:00:00Z");
  EXPECT_EQ(a.header.platform, "Python GDAL");
  EXPECT_EQ(a.header.summary, "Average precipitation");
  EXPECT_EQ(a.header_lines, 3);
  EXPECT_EQ(a.body.rfind("\n# Load the data", 0), 0u);

  auto js = parse_annotated("// Creation time: t\n// Applicable platform: GEE\n// Functionality: clip\nvar a = 1;\n",
                            "JavaScript");
  EXPECT_EQ(js.header.created_at, "t");
  EXPECT_EQ(js.header.platform, "GEE");
  EXPECT_EQ(js.header.summary, "clip");
}

TEST(CheckAnnotation, CompliantPasses) { EXPECT_TRUE(check(kCompliant).empty()); }

TEST(CheckAnnotation, MissingHeader) {
  const char* text = "# Load the data\nimport numpy as np\ndata = np.zeros(3)\n# Report\nprint(data.mean())\n";
  EXPECT_EQ(check(text), std::vector<std::string>{"missing header"});
}

TEST(CheckAnnotation, IncompleteHeader) {
  std::string text = kCompliant;
  text.replace(text.find("# Platform: Python GDAL\n"), 24, "");
  EXPECT_EQ(check(text), std::vector<std::string>{"incomplete header: missing Platform"});
}

TEST(CheckAnnotation, TooFewComments) {
  EXPECT_EQ(check(kCompliant, 3), std::vector<std::string>{"comments(2) < modules(3)"});
}

TEST(CheckAnnotation, WrongCommentToken) {
  std::string text = kCompliant;
  text += "// trailing note\n";
  auto v = check(text);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "wrong comment token");
  // Shebang on the first line is fine.
  EXPECT_TRUE(check(std::string("#!/usr/bin/env python3\n") + kCompliant, 2, "Python",
                    std::string(kOriginal)).empty());
  // A JavaScript file with '#' comments is flagged.
  auto js = check("// Created: t\n// Platform: GEE\n// Description: d\n# step one\nvar a = 1;\n// step two\n", 1,
                  "JavaScript", "var a = 1;\n");
  EXPECT_EQ(js, std::vector<std::string>{"wrong comment token"});
}

TEST(CheckAnnotation, BodyDrift) {
  std::string text = kCompliant;
  text.replace(text.find("np.zeros(3)"), 11, "np.ones(3)");
  EXPECT_EQ(check(text), std::vector<std::string>{"body drift"});
  // Reordered lines drift too? No: the comparison is a multiset, whitespace-insensitive.
  std::string moved = "# Created: a\n# Platform: b\n# Description: c\n# one\ndata   =   np.zeros(3)\n# two\n"
                      "import numpy as np\nprint(data.mean())\n";
  EXPECT_TRUE(check(moved).empty());
  // Dropping a line, or returning no code at all, is drift.
  std::string dropped = kCompliant;
  dropped.replace(dropped.find("print(data.mean())\n"), 19, "");
  EXPECT_EQ(check(dropped), std::vector<std::string>{"body drift"});
  EXPECT_EQ(check("# Created: a\n# Platform: b\n# Description: c\n# x\n# y\n"),
            std::vector<std::string>{"body drift"});
}

TEST(CheckAnnotation, HashInsideStringsIsCode) {
  const char* original = "s = \"#not a comment\"\nu = 'https://x'\n";
  const char* annotated = "# Created: a\n# Platform: b\n# Description: c\n# one\ns = \"#not a comment\"\n# two\n"
                          "u = 'https://x'  # link\n";
  EXPECT_TRUE(check(annotated, 2, "Python", original).empty());
}

TEST(AnnotationPrompt, MetadataAndSections) {
  code::CodeArtifact c{"Python", "Python GDAL", "print(1)", 2, code::Provenance::Repaired};
  auto on = annotation_prompt(c, python_ctx(), "2025-01-01T00:00:05Z");
  EXPECT_EQ(titles(on), (std::vector<std::string>{"Annotation Metadata", "User Requirements Document",
                                                  "Algorithm Design Document", "Current Code"}));
  auto s = prompts::parse_sections(on.back().content);
  EXPECT_EQ(s[0].body, "Created: 2025-01-01T00:00:05Z\nPlatform: Python GDAL\nProgramming language: Python");
  auto off = annotation_prompt(c, python_ctx(false), "t");
  EXPECT_EQ(titles(off), (std::vector<std::string>{"Annotation Metadata", "Current Code"}));
}

TEST(Annotate, OneCorrectiveReaskThenSuccess) {
  ManualClock clock;
  InfoPool pool(clock);
  code::CodeArtifact c{"Python", "Python GDAL", kOriginal, 0, code::Provenance::Generated};
  fx::LambdaBackend b([](const llm::CompletionRequest& r) {
    if (r.messages.size() == 2) return std::string("# no header\nimport numpy as np\n");
    EXPECT_NE(r.last_user_message().find("- missing header"), std::string::npos);
    EXPECT_NE(r.last_user_message().find("<<< Current Code >>>"), std::string::npos);
    return std::string("```python\n") + kCompliant + "```";
  });
  llm::StageClient client(b);
  DebugSession s{0, 3, DebugState::Annotating, false};
  auto a = annotate(s, c, python_ctx(), client, pool, clock);
  EXPECT_EQ(b.calls, 2);
  EXPECT_EQ(s.state, DebugState::Done);
  EXPECT_EQ(a.header.platform, "Python GDAL");
  EXPECT_TRUE(pool.has(ArtifactKind::AnnotatedCode));
}

TEST(Annotate, FailsAfterSecondInvalidReply) {
  ManualClock clock;
  InfoPool pool(clock);
  code::CodeArtifact c{"Python", "Python GDAL", kOriginal, 0, code::Provenance::Generated};
  fx::LambdaBackend b([](const llm::CompletionRequest&) { return std::string("print('changed')\n"); });
  llm::StageClient client(b);
  DebugSession s{0, 3, DebugState::Annotating, false};
  try {
    annotate(s, c, python_ctx(), client, pool, clock);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AnnotationInvalid);
    EXPECT_EQ(std::string(e.what()), "missing header");
    EXPECT_GE(e.details()["violations"].size(), 2u);
  }
  EXPECT_EQ(b.calls, 2);
  EXPECT_EQ(s.state, DebugState::Annotating);
  EXPECT_FALSE(pool.has(ArtifactKind::AnnotatedCode));

  DebugSession waiting;
  EXPECT_THROW(annotate(waiting, c, python_ctx(), client, pool, clock), Error);
}
