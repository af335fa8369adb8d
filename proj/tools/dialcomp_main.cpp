#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dialcomp/formatter.hpp"
#include "dialcomp/ingest.hpp"
#include "dialcomp/metrics.hpp"
#include "dialcomp/mixer.hpp"
#include "dialcomp/registry.hpp"
#include "dialcomp/text.hpp"
#include "nlohmann/json.hpp"

namespace {

using dialcomp::FormattedExample;
using ojson = nlohmann::ordered_json;

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("DIALCOMP_LOG");
    if (!env) return LogLevel::info;
    std::string v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "dialcomp: " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug)
    std::cerr << "dialcomp: debug: " << msg << "\n";
}

void log_error(const std::string& msg) {
  std::cerr << "dialcomp: error: " << msg << "\n";
}

dialcomp::Registry resolve_registry(const std::string& registry_path) {
  if (registry_path.empty()) return dialcomp::builtin_registry();
  return dialcomp::load_registry(registry_path);
}

struct CorpusLine {
  size_t line_no;
  FormattedExample example;
};

struct LoadedCorpus {
  std::vector<CorpusLine> lines;
  std::vector<size_t> malformed_lines;
};

LoadedCorpus read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  LoadedCorpus out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto example = dialcomp::example_from_jsonl(line);
    if (!example) {
      out.malformed_lines.push_back(line_no);
      continue;
    }
    out.lines.push_back({line_no, std::move(*example)});
  }
  return out;
}

int cmd_compile(const std::string& plan_path, const std::string& registry_path,
                const std::string& out_path, const std::string& seed_text) {
  dialcomp::MixturePlan plan = dialcomp::load_plan(plan_path);
  if (!seed_text.empty()) plan.master_seed = std::stoull(seed_text);
  dialcomp::Registry registry = resolve_registry(registry_path);

  const std::string report_path = out_path + ".report.json";
  dialcomp::MixtureReport report =
      dialcomp::compile(plan, registry, out_path, report_path);
  for (const std::string& w : report.warnings) log_info(w);
  log_debug("corpus written to " + out_path);
  std::cout << report.to_json();
  return 0;
}

int cmd_stats(const std::string& corpus_path) {
  LoadedCorpus corpus = read_corpus_file(corpus_path);

  struct TaskStats {
    size_t lines = 0;
    size_t nota_correct = 0;
    size_t nota_distractor = 0;
    size_t truncated = 0;
  };
  std::map<std::string, TaskStats> per_task;
  std::vector<size_t> invalid_lines;
  for (const CorpusLine& line : corpus.lines) {
    TaskStats& t = per_task[line.example.task_name];
    ++t.lines;
    if (line.example.flags.count("nota_correct")) ++t.nota_correct;
    if (line.example.flags.count("nota_distractor")) ++t.nota_distractor;
    if (line.example.flags.count("truncated")) ++t.truncated;
    if (!dialcomp::validate_format(line.example.input_text).empty())
      invalid_lines.push_back(line.line_no);
  }
  for (size_t n : corpus.malformed_lines)
    log_info("line " + std::to_string(n) + ": malformed record");
  for (size_t n : invalid_lines)
    log_info("line " + std::to_string(n) + ": format validation failed");

  ojson j;
  j["per_task"] = ojson::object();
  for (const auto& [task, t] : per_task) {
    ojson e;
    e["lines"] = t.lines;
    e["nota_correct"] = t.nota_correct;
    e["nota_distractor"] = t.nota_distractor;
    e["truncated"] = t.truncated;
    j["per_task"][task] = e;
  }
  const size_t total = corpus.lines.size();
  j["total_lines"] = total;
  j["malformed_lines"] = corpus.malformed_lines;
  j["invalid_lines"] = invalid_lines;
  const double validity =
      total == 0 ? 100.0
                 : 100.0 * static_cast<double>(total - invalid_lines.size()) /
                       static_cast<double>(total);
  j["format_validity_percent"] = validity;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_inspect(const std::string& corpus_path, const std::string& instance_id) {
  LoadedCorpus corpus = read_corpus_file(corpus_path);
  const FormattedExample* found = nullptr;
  for (const CorpusLine& line : corpus.lines)
    if (line.example.provenance.instance_id == instance_id) {
      found = &line.example;
      break;
    }
  if (!found) {
    log_error("instance '" + instance_id + "' not found in " + corpus_path);
    return 1;
  }

  auto segments = dialcomp::split_segments(found->input_text);
  if (!segments) {
    log_error("instance '" + instance_id + "' does not parse into segments");
    return 1;
  }
  if (segments->reassemble() != found->input_text) {
    log_error("segment reconstruction mismatch for '" + instance_id + "'");
    return 1;
  }

  auto show = [](std::string_view label, std::string_view value) {
    std::cout << label << ": " << dialcomp::trim(value) << "\n";
  };
  std::cout << "task        : " << found->task_name << "\n";
  std::cout << "category    : " << dialcomp::to_string(found->category) << "\n";
  std::cout << "provenance  : " << found->provenance.source_dataset << " / "
            << found->provenance.dialogue_id << "\n";
  std::string flags;
  for (const std::string& f : found->flags) {
    if (!flags.empty()) flags += ", ";
    flags += f;
  }
  std::cout << "flags       : " << (flags.empty() ? "-" : flags) << "\n";
  show("instruction ", segments->instruction);
  show("fields      ", segments->fields);
  show("context     ", segments->context);
  if (!dialcomp::trim(segments->options).empty())
    show("options     ", segments->options);
  show("prompt      ", segments->prompt);
  show("output      ", found->output_text);
  return 0;
}

std::vector<dialcomp::Prediction> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictions file " + path);
  std::vector<dialcomp::Prediction> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ojson j = ojson::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("instance_id")) {
      log_info("predictions line " + std::to_string(line_no) + ": malformed");
      continue;
    }
    dialcomp::Prediction p;
    p.instance_id = j["instance_id"].get<std::string>();
    if (j.contains("text")) p.text = j["text"].get<std::string>();
    if (j.contains("token_scores")) {
      dialcomp::TokenScores s;
      s.yes = j["token_scores"].value("yes", 0.0);
      s.no = j["token_scores"].value("no", 0.0);
      p.token_scores = s;
    }
    if (j.contains("grade")) p.grade = j["grade"].get<double>();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<dialcomp::RatingRecord> read_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ratings file " + path);
  std::vector<dialcomp::RatingRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ojson j = ojson::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("instance_id") ||
        !j.contains("rating") || !j.contains("rating_field")) {
      log_info("ratings line " + std::to_string(line_no) + ": malformed");
      continue;
    }
    dialcomp::RatingRecord r;
    r.instance_id = j["instance_id"].get<std::string>();
    r.rating = j["rating"].get<double>();
    r.rating_field = j["rating_field"].get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_score(const std::string& task, const std::string& preds_path,
              const std::string& refs_path, const std::string& ratings_path,
              const std::string& registry_path) {
  dialcomp::Registry registry = resolve_registry(registry_path);
  const dialcomp::TaskSpec* spec = registry.find(task);
  if (!spec || spec->metrics.empty()) {
    log_error("no metric profile for task '" + task + "'");
    return 1;
  }

  LoadedCorpus refs = read_corpus_file(refs_path);
  std::vector<const FormattedExample*> task_refs;
  for (const CorpusLine& line : refs.lines)
    if (line.example.task_name == task) task_refs.push_back(&line.example);
  if (task_refs.empty()) {
    log_error("no reference lines for task '" + task + "' in " + refs_path);
    return 1;
  }

  std::vector<dialcomp::Prediction> preds = read_predictions(preds_path);
  std::map<std::string, const dialcomp::Prediction*> preds_by_id;
  for (const auto& p : preds) preds_by_id[p.instance_id] = &p;

  size_t joined = 0;
  for (const FormattedExample* r : task_refs)
    if (preds_by_id.count(r->provenance.instance_id)) ++joined;
  const size_t missing = task_refs.size() - joined;
  if (missing > 0)
    log_info(std::to_string(missing) + " reference instances have no prediction");

  ojson out;
  out["task"] = task;
  out["counts"] = {{"references", task_refs.size()},
                   {"predictions", preds.size()},
                   {"scored", joined},
                   {"missing", missing}};
  out["metrics"] = ojson::object();

  for (const std::string& metric : spec->metrics) {
    if (metric == "accuracy") {
      std::vector<dialcomp::GoldInstance> golds;
      for (const FormattedExample* r : task_refs) {
        dialcomp::GoldInstance g;
        g.instance_id = r->provenance.instance_id;
        g.gold = r->output_text;
        if (auto segments = dialcomp::split_segments(r->input_text))
          if (auto opts = dialcomp::parse_options_segment(segments->options))
            g.options = opts->labels;
        golds.push_back(std::move(g));
      }
      auto result = dialcomp::classification_accuracy(preds, golds);
      out["metrics"]["accuracy"] = result.accuracy;
      out["metrics"]["out_of_option_rate"] = result.out_of_option_rate;
    } else if (metric == "bleu2" || metric == "rouge_l" ||
               metric == "knowledge_f1") {
      double sum = 0.0;
      size_t n = 0;
      for (const FormattedExample* r : task_refs) {
        auto it = preds_by_id.find(r->provenance.instance_id);
        if (it == preds_by_id.end()) continue;
        const std::string& cand = it->second->text;
        if (metric == "bleu2") {
          std::vector<std::string> references{r->output_text};
          sum += dialcomp::bleu2(cand, references);
        } else if (metric == "rouge_l") {
          sum += dialcomp::rouge_l(cand, r->output_text);
        } else {
          sum += dialcomp::knowledge_f1(cand, r->output_text);
        }
        ++n;
      }
      out["metrics"][metric] = n == 0 ? 0.0 : sum / static_cast<double>(n);
    } else if (metric == "begins_with_accuracy") {
      std::vector<std::string> texts;
      std::vector<std::string> phrases;
      for (const FormattedExample* r : task_refs) {
        auto it = preds_by_id.find(r->provenance.instance_id);
        if (it == preds_by_id.end()) continue;
        auto phrase =
            dialcomp::parse_field_value(r->input_text, "[INITIAL PHRASE]");
        if (!phrase) continue;
        texts.push_back(it->second->text);
        phrases.push_back(*phrase);
      }
      out["metrics"]["begins_with_accuracy"] =
          texts.empty() ? 0.0 : dialcomp::begins_with_accuracy(texts, phrases);
    } else if (metric == "spearman") {
      if (ratings_path.empty()) {
        log_info("spearman requested but no --ratings file given");
        continue;
      }
      std::map<std::string, double> scores;
      for (const FormattedExample* r : task_refs) {
        auto it = preds_by_id.find(r->provenance.instance_id);
        if (it == preds_by_id.end() || !it->second->token_scores) continue;
        const auto& s = *it->second->token_scores;
        if (s.yes == 0.0 && s.no == 0.0) continue;
        scores[r->provenance.instance_id] =
            dialcomp::relevance_score(s.yes, s.no);
      }
      auto ratings = read_ratings(ratings_path);
      auto rho = dialcomp::correlate_ratings(scores, ratings);
      ojson fields = ojson::object();
      for (const auto& [field, value] : rho) fields[field] = value;
      out["metrics"]["spearman"] = fields;
    }
  }

  // External neural-metric columns pass through untouched.
  double grade_sum = 0.0;
  size_t grade_n = 0;
  for (const FormattedExample* r : task_refs) {
    auto it = preds_by_id.find(r->provenance.instance_id);
    if (it != preds_by_id.end() && it->second->grade) {
      grade_sum += *it->second->grade;
      ++grade_n;
    }
  }
  if (grade_n > 0)
    out["metrics"]["grade_external"] = grade_sum / static_cast<double>(grade_n);

  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialcomp - dialogue instruction corpus compiler and scorer"};
  app.require_subcommand(1);

  std::string plan_path, registry_path, out_path, seed_text;
  auto* compile = app.add_subcommand("compile", "compile a training mixture");
  compile->add_option("--plan", plan_path, "mixture plan JSON")->required();
  compile->add_option("--registry", registry_path,
                      "task registry JSON (defaults to the builtin set)");
  compile->add_option("--out", out_path, "output corpus path")->required();
  compile->add_option("--seed", seed_text, "master seed override");

  std::string stats_corpus;
  auto* stats = app.add_subcommand("stats", "summarize a compiled corpus");
  stats->add_option("--corpus", stats_corpus, "corpus JSONL path")->required();

  std::string inspect_corpus, inspect_instance;
  auto* inspect =
      app.add_subcommand("inspect", "pretty-print one compiled example");
  inspect->add_option("--corpus", inspect_corpus, "corpus JSONL path")->required();
  inspect->add_option("--instance", inspect_instance, "instance id")->required();

  std::string score_task, score_preds, score_refs, score_ratings,
      score_registry;
  auto* score = app.add_subcommand("score", "score model predictions");
  score->add_option("--task", score_task, "task name")->required();
  score->add_option("--preds", score_preds, "predictions JSONL")->required();
  score->add_option("--refs", score_refs, "reference corpus JSONL")->required();
  score->add_option("--ratings", score_ratings, "human ratings JSONL");
  score->add_option("--registry", score_registry,
                    "task registry JSON (defaults to the builtin set)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compile->parsed())
      return cmd_compile(plan_path, registry_path, out_path, seed_text);
    if (stats->parsed()) return cmd_stats(stats_corpus);
    if (inspect->parsed()) return cmd_inspect(inspect_corpus, inspect_instance);
    if (score->parsed())
      return cmd_score(score_task, score_preds, score_refs, score_ratings,
                       score_registry);
  } catch (const std::exception& e) {
    log_error(e.what());
    return 1;
  }
  return 1;
}
