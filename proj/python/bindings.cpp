// SPDX-License-Identifier: Apache-2.0
// JSON crosses the boundary as text; the Python package decodes it.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "cop/debug_annotate.hpp"
#include "cop/errors.hpp"
#include "cop/evaluation.hpp"
#include "cop/knowledge_base.hpp"
#include "cop/session.hpp"

namespace py = pybind11;

namespace {

cop::kb::KbKind parse_kind(const std::string& kind) {
  auto k = cop::kb::kind_from_string(kind);
  if (!k) throw cop::Error(cop::ErrorCode::Validation, "unknown knowledge base kind: " + kind);
  return *k;
}

std::string kb_search(const std::string& path, const std::string& kind, const std::string& query,
                      std::optional<std::string> platform, std::optional<std::string> language, int k) {
  auto index = cop::kb::KbIndex::load(path, parse_kind(kind));
  auto hits = index.search(query, {platform, language}, k);
  cop::Json out = cop::Json::array();
  for (const auto& h : hits) out.push_back(h.to_json());
  return out.dump();
}

int kb_validate(const std::string& path, const std::string& kind) {
  return static_cast<int>(cop::kb::KbIndex::load(path, parse_kind(kind)).size());
}

std::string readability(const std::vector<int>& scores) {
  if (scores.size() != 5) throw cop::Error(cop::ErrorCode::Validation, "readability needs exactly five scores");
  cop::eval::ExpertScores s{};
  std::copy(scores.begin(), scores.end(), s.begin());
  return cop::eval::score_readability(s).str();
}

std::vector<cop::eval::Verdict> to_verdicts(const std::vector<std::pair<bool, bool>>& pairs) {
  std::vector<cop::eval::Verdict> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back({std::to_string(i), pairs[i].first, pairs[i].first && pairs[i].second,
                   cop::eval::VerdictSource::External});
  }
  return out;
}

std::string run_corpus(const std::string& corpus, const std::string& script, const std::string& verdicts,
                       const std::string& kb_dir, const std::string& config_json) {
  auto tasks = cop::eval::load_corpus(corpus);
  auto kbs = cop::kb::KnowledgeBases::load_dir(kb_dir);
  auto script_json = cop::Json::parse(std::ifstream(script));
  cop::eval::Engine engine;
  engine.kbs = &kbs;
  engine.backend_factory = [script_json] {
    return std::make_unique<cop::llm::ScriptedBackend>(cop::llm::ScriptedBackend::from_json(script_json));
  };
  auto config = config_json.empty() ? cop::AblationConfig{} : cop::AblationConfig::from_json(cop::Json::parse(config_json));
  auto vs = cop::eval::VerdictScript::load(verdicts);
  std::vector<cop::eval::TaskResult> results;
  for (const auto& t : tasks) results.push_back(cop::eval::run_task(t, config, engine, vs));
  auto report = cop::eval::summarize(results, {});
  return cop::eval::run_json(results, report, {}).dump();
}

std::string replay_log(const std::string& path, const std::string& kb_dir) {
  auto log = cop::read_event_log(path);
  auto kbs = kb_dir.empty() ? cop::kb::KnowledgeBases{} : cop::kb::KnowledgeBases::load_dir(kb_dir);
  cop::llm::ScriptedBackend none;
  cop::llm::StageClient client(none);
  cop::ManualClock clock;
  auto session = cop::Session::replay(log, kbs, client, clock);
  return session->artifacts().dump();
}

std::vector<std::string> check_annotation(const std::string& annotated, const std::string& language,
                                          const std::string& design_json, const std::string& original) {
  auto parsed = cop::debug::parse_annotated(annotated, language);
  auto design = cop::AlgorithmDesignDocument::from_json(cop::Json::parse(design_json));
  return cop::debug::check_annotation(parsed, design, language, original);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the cop geospatial code-generation engine";

  py::register_exception<cop::Error>(m, "CopError");

  m.def("tokenize", &cop::kb::tokenize, py::arg("text"));
  m.def("kb_search", &kb_search, py::arg("path"), py::arg("kind"), py::arg("query"),
        py::arg("platform") = std::nullopt, py::arg("language") = std::nullopt, py::arg("k") = 5);
  m.def("kb_validate", &kb_validate, py::arg("path"), py::arg("kind"));
  m.def("percent", [](std::int64_t num, std::int64_t den) { return cop::eval::Percent::of(num, den).str(); },
        py::arg("num"), py::arg("den"));
  m.def("readability", &readability, py::arg("scores"));
  m.def("executability", [](const std::vector<std::pair<bool, bool>>& v) {
    return cop::eval::score_executability(to_verdicts(v)).str();
  }, py::arg("verdicts"));
  m.def("accuracy", [](const std::vector<std::pair<bool, bool>>& v) {
    return cop::eval::score_accuracy(to_verdicts(v)).str();
  }, py::arg("verdicts"));
  m.def("run_corpus", &run_corpus, py::arg("corpus"), py::arg("script"), py::arg("verdicts"), py::arg("kb_dir"),
        py::arg("config_json") = std::string());
  m.def("replay_log", &replay_log, py::arg("path"), py::arg("kb_dir") = std::string());
  m.def("check_annotation", &check_annotation, py::arg("annotated"), py::arg("language"), py::arg("design_json"),
        py::arg("original"));
}
