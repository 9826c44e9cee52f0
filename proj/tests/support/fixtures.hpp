// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cop/evaluation.hpp"
#include "cop/json.hpp"
#include "cop/knowledge_base.hpp"
#include "cop/llm_backend.hpp"

namespace cop::fx {

inline std::filesystem::path fixtures_dir() { return COP_FIXTURES_DIR; }

inline Json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

inline const kb::KnowledgeBases& fixture_kbs() {
  static const kb::KnowledgeBases kbs = kb::KnowledgeBases::load_dir(fixtures_dir() / "kb");
  return kbs;
}

inline const Json& fixture_script() {
  static const Json j = read_json(fixtures_dir() / "script.json");
  return j;
}

inline const std::vector<eval::EvalTask>& fixture_corpus() {
  static const std::vector<eval::EvalTask> tasks = eval::load_corpus(fixtures_dir() / "corpus.json");
  return tasks;
}

inline const eval::VerdictScript& fixture_verdicts() {
  static const eval::VerdictScript v = eval::VerdictScript::load(fixtures_dir() / "verdicts.json");
  return v;
}

inline const eval::ReadabilityScores& fixture_readability() {
  static const eval::ReadabilityScores r = eval::load_readability(fixtures_dir() / "readability.json");
  return r;
}

inline eval::BackendFactory script_factory(Json rules) {
  return [rules = std::move(rules)] {
    return std::make_unique<llm::ScriptedBackend>(llm::ScriptedBackend::from_json(rules));
  };
}

inline eval::Engine fixture_engine(bool capture = false) {
  eval::Engine e;
  e.kbs = &fixture_kbs();
  e.backend_factory = script_factory(fixture_script());
  e.capture_prompts = capture;
  return e;
}

inline const eval::EvalTask& corpus_task(const std::string& id) {
  for (const auto& t : fixture_corpus()) {
    if (t.id == id) return t;
  }
  throw std::runtime_error("no fixture task " + id);
}

/// Backend answering every call through a callback.
class LambdaBackend final : public llm::Backend {
 public:
  using Fn = std::function<std::string(const llm::CompletionRequest&)>;
  explicit LambdaBackend(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const llm::CompletionRequest& r) override {
    ++calls;
    return fn_(r);
  }
  int calls = 0;

 private:
  Fn fn_;
};

}  // namespace cop::fx
