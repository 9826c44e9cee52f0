// SPDX-License-Identifier: Apache-2.0
// cop: command-line front end for the pipeline, the service and the
// evaluation harness.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cop/errors.hpp"
#include "cop/evaluation.hpp"
#include "cop/service.hpp"
#include "cop/session.hpp"
#include "cop/text.hpp"

namespace fs = std::filesystem;
using namespace cop;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string(), {{"path", path.string()}});
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json(const fs::path& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, "malformed JSON in " + path.string());
  return j;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::unique_ptr<llm::Backend> make_backend(const std::string& script) {
  if (!script.empty()) return std::make_unique<llm::ScriptedBackend>(llm::ScriptedBackend::load(script));
  return std::make_unique<llm::HttpBackend>(llm::HttpBackendOptions::from_env());
}

AblationConfig load_config(const std::string& path) {
  return path.empty() ? AblationConfig{} : AblationConfig::from_json(read_json(path));
}

std::string prompt_line(const std::string& question) {
  std::cout << question << std::flush;
  std::string line;
  if (!std::getline(std::cin, line)) throw Error(ErrorCode::Validation, "input closed");
  return text::trim(line);
}

// Reads lines until an empty one.
std::string prompt_block(const std::string& question) {
  std::cout << question << " (end with an empty line)\n" << std::flush;
  std::string out, line;
  while (std::getline(std::cin, line) && !text::trim(line).empty()) out += line + "\n";
  return text::trim(out);
}

bool prompt_yes_no(const std::string& question) {
  for (;;) {
    auto a = text::to_lower(prompt_line(question + " (Y/N): "));
    if (a == "y" || a == "yes") return true;
    if (a == "n" || a == "no") return false;
  }
}

struct RunOptions {
  std::string requirements;
  bool interactive = false;
  std::string script;
  std::string kb_dir;
  std::string config;
  std::string log;
  std::string artifacts;
};

int run_command(const RunOptions& o) {
  auto kbs = kb::KnowledgeBases::load_dir(o.kb_dir);
  auto backend = make_backend(o.script);
  llm::StageClient client(*backend);
  SystemClock clock;
  Session session(random_session_id(), SessionConfig{load_config(o.config), o.script.empty() ? "http" : "scripted"},
                  kbs, client, clock);
  session.start(read_file(o.requirements));

  while (o.interactive && session.phase() == Phase::Clarifying) {
    auto view = session.view();
    std::cout << view["clarification"]["prompt"].get<std::string>() << "\n";
    requirements::Answers answers;
    for (const auto& name : view["clarification"]["missing"]) {
      std::string element = name.get<std::string>();
      std::string answer;
      while (answer.empty()) answer = prompt_line(element + ": ");
      answers[element] = answer;
    }
    session.post_answers(answers);
  }
  while (o.interactive && session.phase() == Phase::AwaitingFeedback) {
    const auto& code = *session.runner().current_code();
    std::cout << "\n--- code revision " << code.revision << " ---\n" << code.source << "\n---\n";
    debug::DebugFeedback fb;
    fb.executable = prompt_yes_no("Did the code run");
    if (!fb.executable) {
      fb.error_text = prompt_block("Paste the console error");
    } else {
      fb.correct = prompt_yes_no("Is the result correct");
      if (!fb.correct) fb.observed_output = prompt_block("Describe the observed output");
    }
    try {
      session.post_feedback(fb);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidFeedback) throw;
      std::cout << e.what() << "\n";
    }
  }

  if (!o.log.empty()) {
    std::ofstream out(o.log, std::ios::binary);
    out << session.events_jsonl();
  }
  if (!o.artifacts.empty()) {
    std::ofstream out(o.artifacts, std::ios::binary);
    out << session.artifacts().dump(2) << "\n";
  }

  auto view = session.view();
  switch (session.phase()) {
    case Phase::Done:
      std::cout << view["annotated"].get<std::string>() << "\n";
      if (view["exhausted"].get<bool>()) std::cerr << "note: debug iteration limit reached\n";
      return 0;
    case Phase::Failed: std::cerr << view["error"].dump(2) << "\n"; return 1;
    default: std::cout << view.dump(2) << "\n"; return session.phase() == Phase::Clarifying ? 2 : 0;
  }
}

struct EvalOptions {
  std::string corpus;
  std::string script;
  std::string verdicts;
  std::string readability;
  std::string kb_dir;
  std::string config;
  std::vector<int> ks = eval::kDefaultSweepKs;
  std::string out;
  std::string format = "csv";
};

struct EvalSetup {
  kb::KnowledgeBases kbs;
  std::vector<eval::EvalTask> tasks;
  eval::VerdictScript verdicts;
  eval::ReadabilityScores readability;
  eval::Engine engine;
  eval::ReportFormat format = eval::ReportFormat::Csv;
};

std::unique_ptr<EvalSetup> eval_setup(const EvalOptions& o) {
  auto s = std::make_unique<EvalSetup>();
  s->kbs = kb::KnowledgeBases::load_dir(o.kb_dir);
  s->tasks = eval::load_corpus(o.corpus);
  if (!o.verdicts.empty()) s->verdicts = eval::VerdictScript::load(o.verdicts);
  if (!o.readability.empty()) s->readability = eval::load_readability(o.readability);
  auto format = eval::report_format_from_string(o.format);
  if (!format) throw Error(ErrorCode::Validation, "format must be csv or json");
  s->format = *format;
  s->engine.kbs = &s->kbs;
  if (o.script.empty()) {
    s->engine.backend_factory = [] { return std::make_unique<llm::HttpBackend>(llm::HttpBackendOptions::from_env()); };
  } else {
    Json rules = read_json(o.script);
    s->engine.backend_factory = [rules] {
      return std::make_unique<llm::ScriptedBackend>(llm::ScriptedBackend::from_json(rules));
    };
  }
  return s;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    eval::write_text_file(path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged geospatial code generation engine"};
  app.require_subcommand(1);
  const std::string default_kb = env_or("COP_KB_DIR", "fixtures/kb");

  // kb
  auto* kb_cmd = app.add_subcommand("kb", "Knowledge base tools");
  kb_cmd->require_subcommand(1);
  std::string kb_kind, kb_path, kb_dest, kb_query, kb_platform, kb_language, kb_dir = default_kb, kb_file;
  int kb_k = 5;
  auto* kb_import = kb_cmd->add_subcommand("import", "Validate a KB file and optionally install it");
  kb_import->add_option("kind", kb_kind, "platform | function | dataset")->required();
  kb_import->add_option("path", kb_path, "JSON array of records")->required()->check(CLI::ExistingFile);
  kb_import->add_option("--into", kb_dest, "Copy to <dir>/<kind>.json after validation");
  auto* kb_search = kb_cmd->add_subcommand("search", "BM25 search over one knowledge base");
  kb_search->add_option("kind", kb_kind, "platform | function | dataset")->required();
  kb_search->add_option("-q,--query", kb_query, "Query text")->required();
  kb_search->add_option("--platform", kb_platform, "Platform filter");
  kb_search->add_option("--language", kb_language, "Language filter");
  kb_search->add_option("-k", kb_k, "Number of hits")->capture_default_str();
  kb_search->add_option("--kb-dir", kb_dir, "Directory with <kind>.json files")->capture_default_str();
  kb_search->add_option("--file", kb_file, "Search this file instead of --kb-dir");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one task end to end");
  RunOptions run;
  run.kb_dir = default_kb;
  run_cmd->add_option("requirements", run.requirements, "Text file with the task requirements")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_flag("--interactive", run.interactive, "Ask for clarifications and debug feedback on the terminal");
  run_cmd->add_option("--script", run.script, "Scripted backend rules (default: HTTP backend from env)");
  run_cmd->add_option("--kb-dir", run.kb_dir, "Knowledge base directory")->capture_default_str();
  run_cmd->add_option("--config", run.config, "Ablation config JSON");
  run_cmd->add_option("--log", run.log, "Write the session event log (JSON lines)");
  run_cmd->add_option("--artifacts", run.artifacts, "Write the artifact snapshot (JSON)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1", serve_script, serve_static, serve_kb = default_kb;
  serve_cmd->add_option("--port", port, "Port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--script", serve_script, "Scripted backend rules (default: HTTP backend from env)");
  serve_cmd->add_option("--kb-dir", serve_kb, "Knowledge base directory")->capture_default_str();
  serve_cmd->add_option("--static", serve_static, "Directory of UI assets to serve at /");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "Rebuild a session from its event log and print its artifacts");
  std::string replay_log, replay_kb = default_kb;
  replay_cmd->add_option("log", replay_log, "Event log (JSON lines)")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--kb-dir", replay_kb, "Knowledge base directory")->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluation harness");
  eval_cmd->require_subcommand(1);
  EvalOptions ev;
  ev.kb_dir = default_kb;
  auto add_eval_options = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", ev.corpus, "Task corpus JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--script", ev.script, "Scripted backend rules (default: HTTP backend from env)");
    cmd->add_option("--verdicts", ev.verdicts, "Verdict script or external verdicts JSON");
    cmd->add_option("--readability", ev.readability, "Expert readability scores JSON");
    cmd->add_option("--kb-dir", ev.kb_dir, "Knowledge base directory")->capture_default_str();
    cmd->add_option("--out", ev.out, "Output file (default: stdout)");
    cmd->add_option("--format", ev.format, "csv | json")->capture_default_str();
  };
  auto* eval_run = eval_cmd->add_subcommand("run", "Score one configuration over the corpus");
  add_eval_options(eval_run);
  eval_run->add_option("--config", ev.config, "Ablation config JSON");
  auto* eval_ablate = eval_cmd->add_subcommand("ablate", "All eight pool/retrieval/feedback configurations");
  add_eval_options(eval_ablate);
  auto* eval_sweep = eval_cmd->add_subcommand("sweep", "Debug iteration sweep");
  add_eval_options(eval_sweep);
  eval_sweep->add_option("--ks", ev.ks, "Iteration caps")->delimiter(',')->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (kb_cmd->parsed()) {
      auto kind = kb::kind_from_string(kb_kind);
      if (!kind) throw Error(ErrorCode::Validation, "unknown KB kind: " + kb_kind);
      if (kb_import->parsed()) {
        auto index = kb::KbIndex::load(kb_path, *kind);
        if (!kb_dest.empty()) {
          fs::create_directories(kb_dest);
          fs::copy_file(kb_path, fs::path(kb_dest) / (kb_kind + ".json"), fs::copy_options::overwrite_existing);
        }
        std::cout << "imported " << index.size() << " " << kb_kind << " records\n";
        return 0;
      }
      auto path = kb_file.empty() ? fs::path(kb_dir) / (kb_kind + ".json") : fs::path(kb_file);
      auto index = kb::KbIndex::load(path, *kind);
      kb::SearchFilters filters;
      if (!kb_platform.empty()) filters.platform = kb_platform;
      if (!kb_language.empty()) filters.language = kb_language;
      Json hits = Json::array();
      for (const auto& h : index.search(kb_query, filters, kb_k)) hits.push_back(h.to_json());
      std::cout << hits.dump(2) << "\n";
      return 0;
    }
    if (run_cmd->parsed()) return run_command(run);
    if (serve_cmd->parsed()) {
      auto kbs = kb::KnowledgeBases::load_dir(serve_kb);
      std::unique_ptr<llm::Backend> backend = make_backend(serve_script);
      SystemClock clock;
      std::optional<fs::path> sessions_dir;
      if (const char* d = std::getenv("COP_SESSIONS_DIR"); d && *d) sessions_dir = fs::path(d);
      SessionManager sessions(kbs, backend.get(), llm::LlmSettings::defaults(), clock, sessions_dir);
      if (auto n = sessions.load_persisted(); n > 0) std::cerr << "recovered " << n << " sessions\n";
      std::optional<fs::path> static_dir;
      if (!serve_static.empty()) static_dir = fs::path(serve_static);
      Service service(sessions, static_dir);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      return service.serve(host, port) ? 0 : 1;
    }
    if (replay_cmd->parsed()) {
      auto kbs = kb::KnowledgeBases::load_dir(replay_kb);
      llm::ScriptedBackend none;
      llm::StageClient client(none);
      SystemClock clock;
      auto session = Session::replay(read_event_log(replay_log), kbs, client, clock);
      std::cout << session->artifacts().dump(2) << "\n";
      return 0;
    }
    if (eval_cmd->parsed()) {
      auto s = eval_setup(ev);
      if (eval_run->parsed()) {
        auto config = load_config(ev.config);
        std::vector<eval::TaskResult> results;
        for (const auto& task : s->tasks) results.push_back(eval::run_task(task, config, s->engine, s->verdicts));
        auto report = eval::summarize(results, s->readability);
        write_output(ev.out, s->format == eval::ReportFormat::Csv
                                 ? eval::run_csv(results, report, s->readability)
                                 : eval::run_json(results, report, s->readability).dump(2) + "\n");
      } else if (eval_ablate->parsed()) {
        auto table = eval::run_ablation(s->tasks, eval::all_mechanism_configs(), s->engine, s->verdicts,
                                        s->readability);
        write_output(ev.out, s->format == eval::ReportFormat::Csv ? eval::ablation_csv(table)
                                                                  : eval::ablation_json(table).dump(2) + "\n");
      } else {
        auto table = eval::run_debug_sweep(s->tasks, ev.ks, s->engine, s->verdicts);
        write_output(ev.out, s->format == eval::ReportFormat::Csv ? eval::sweep_csv(table)
                                                                  : eval::sweep_json(table).dump(2) + "\n");
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.to_json().dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
