#include "dialcomp/mixer.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "dialcomp/text.hpp"
#include "nlohmann/json.hpp"

namespace dialcomp {

using ojson = nlohmann::ordered_json;

MixturePlan parse_plan(const std::string& json_text,
                       const std::filesystem::path& base_dir,
                       const std::string& origin) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const ojson::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }

  MixturePlan plan;
  if (doc.contains("master_seed"))
    plan.master_seed = doc["master_seed"].get<uint64_t>();
  if (doc.contains("per_task_cap")) {
    auto cap = doc["per_task_cap"].get<int64_t>();
    if (cap < 1) throw std::runtime_error(origin + ": per_task_cap must be >= 1");
    plan.per_task_cap = static_cast<size_t>(cap);
  }
  if (doc.contains("workers")) {
    plan.workers = doc["workers"].get<int>();
    if (plan.workers < 1)
      throw std::runtime_error(origin + ": workers must be >= 1");
  }
  if (doc.contains("input_budget"))
    plan.format.input_budget = doc["input_budget"].get<int>();
  if (doc.contains("output_budget"))
    plan.format.output_budget = doc["output_budget"].get<int>();
  if (plan.format.input_budget < 1 || plan.format.output_budget < 1)
    throw std::runtime_error(origin + ": budgets must be >= 1");
  if (doc.contains("option_style_override")) {
    auto style = option_style_from_string(
        doc["option_style_override"].get<std::string>());
    if (!style)
      throw std::runtime_error(origin + ": unknown option_style_override");
    plan.format.option_style_override = *style;
  }
  if (doc.contains("tokenizer")) {
    const ojson& t = doc["tokenizer"];
    std::string mode = t.value("mode", "whitespace");
    if (mode == "whitespace") {
      plan.format.tokenizer_mode = TokenizerMode::whitespace;
    } else if (mode == "external-count-file") {
      plan.format.tokenizer_mode = TokenizerMode::external_count_file;
      std::filesystem::path counts_path = t.at("path").get<std::string>();
      if (counts_path.is_relative()) counts_path = base_dir / counts_path;
      std::ifstream in(counts_path);
      if (!in)
        throw std::runtime_error(origin + ": cannot open token count file " +
                                 counts_path.string());
      ojson counts = ojson::parse(in);
      for (const auto& [key, value] : counts.items())
        plan.format.external_counts[key] = value.get<int>();
    } else {
      throw std::runtime_error(origin + ": unknown tokenizer mode " + mode);
    }
  }
  if (doc.contains("nota")) {
    const ojson& n = doc["nota"];
    plan.nota.rate = n.value("rate", plan.nota.rate);
    plan.nota.correct_fraction =
        n.value("correct_fraction", plan.nota.correct_fraction);
    plan.nota.nota_text = n.value("text", plan.nota.nota_text);
    if (plan.nota.rate < 0.0 || plan.nota.rate > 1.0 ||
        plan.nota.correct_fraction < 0.0 || plan.nota.correct_fraction > 1.0 ||
        plan.nota.nota_text.empty())
      throw std::runtime_error(origin + ": invalid nota configuration");
  }
  if (doc.contains("meta_choices")) {
    plan.meta.num_choices = doc["meta_choices"].get<int>();
    if (plan.meta.num_choices < 2)
      throw std::runtime_error(origin + ": meta_choices must be >= 2");
  }
  if (doc.contains("unseen_tasks"))
    for (const ojson& t : doc["unseen_tasks"])
      plan.unseen_tasks.insert(t.get<std::string>());

  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw std::runtime_error(origin + ": missing 'tasks' array");
  for (const ojson& e : doc["tasks"]) {
    PlanEntry entry;
    entry.task = e.at("task").get<std::string>();
    if (e.contains("corpus")) {
      CorpusDescriptor d;
      std::filesystem::path p = e["corpus"].get<std::string>();
      d.path = p.is_relative() ? base_dir / p : p;
      d.dataset_id = e.value("dataset", std::string("unknown"));
      if (d.dataset_id.empty())
        throw std::runtime_error(origin + ": empty dataset id for task " +
                                 entry.task);
      if (e.contains("split")) {
        auto s = split_from_string(e["split"].get<std::string>());
        if (!s)
          throw std::runtime_error(origin + ": unknown split for task " +
                                   entry.task);
        d.split = *s;
      }
      entry.corpus = std::move(d);
    }
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

MixturePlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), path.parent_path(), path.string());
}

TaskReport MixtureReport::totals() const {
  TaskReport t;
  for (const auto& [name, r] : per_task) {
    t.available += r.available;
    t.sampled += r.sampled;
    t.nota_correct += r.nota_correct;
    t.nota_distractor += r.nota_distractor;
    t.truncated += r.truncated;
    t.skipped += r.skipped;
  }
  return t;
}

namespace {

ojson report_to_json(const TaskReport& r) {
  ojson j;
  j["available"] = r.available;
  j["sampled"] = r.sampled;
  j["nota_correct"] = r.nota_correct;
  j["nota_distractor"] = r.nota_distractor;
  j["truncated"] = r.truncated;
  j["skipped"] = r.skipped;
  return j;
}

}  // namespace

std::string MixtureReport::to_json() const {
  ojson j;
  j["per_task"] = ojson::object();
  for (const auto& [name, r] : per_task) j["per_task"][name] = report_to_json(r);
  j["totals"] = report_to_json(totals());
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

MixtureSample sample_mixture(
    const std::map<std::string, std::vector<TaskInstance>>& per_task,
    const MixturePlan& plan) {
  MixtureSample out;
  for (const auto& [task, instances] : per_task) {
    Rng task_rng(derive_seed(plan.master_seed, task));
    ReservoirSampler<TaskInstance> reservoir(plan.per_task_cap, task_rng);
    for (const TaskInstance& inst : instances) reservoir.offer(inst);
    TaskReport report;
    report.available = instances.size();
    std::vector<TaskInstance> sampled = reservoir.take();
    report.sampled = sampled.size();
    if (report.available == 0)
      out.report.warnings.push_back("task '" + task + "' has zero available instances");
    out.report.per_task[task] = report;
    for (TaskInstance& inst : sampled) out.instances.push_back(std::move(inst));
  }
  return out;
}

HoldoutPlans holdout_split(const MixturePlan& plan,
                           const std::set<std::string>& seen,
                           const std::set<std::string>& unseen) {
  for (const std::string& t : seen)
    if (unseen.count(t))
      throw std::runtime_error("task '" + t + "' designated both seen and unseen");
  HoldoutPlans out;
  out.train = plan;
  out.eval = plan;
  out.train.entries.clear();
  out.eval.entries.clear();
  out.train.unseen_tasks = unseen;
  out.eval.unseen_tasks.clear();
  for (const PlanEntry& e : plan.entries) {
    if (unseen.count(e.task)) {
      out.eval.entries.push_back(e);
    } else if (seen.count(e.task)) {
      out.train.entries.push_back(e);
    } else {
      throw std::runtime_error("task '" + e.task +
                               "' is not designated seen or unseen");
    }
  }
  return out;
}

std::string example_to_jsonl(const FormattedExample& e) {
  ojson j;
  j["input"] = e.input_text;
  j["output"] = e.output_text;
  j["task"] = e.task_name;
  j["category"] = std::string(to_string(e.category));
  j["definition_id"] = e.definition_id;
  j["prompt_id"] = e.prompt_id;
  j["dataset"] = e.provenance.source_dataset;
  j["dialogue_id"] = e.provenance.dialogue_id;
  j["instance_id"] = e.provenance.instance_id;
  j["seed"] = e.seed;
  j["flags"] = std::vector<std::string>(e.flags.begin(), e.flags.end());
  return j.dump();
}

std::optional<FormattedExample> example_from_jsonl(const std::string& line) {
  ojson j = ojson::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  FormattedExample e;
  try {
    e.input_text = j.at("input").get<std::string>();
    e.output_text = j.at("output").get<std::string>();
    e.task_name = j.at("task").get<std::string>();
    auto cat = category_from_string(j.at("category").get<std::string>());
    if (!cat) return std::nullopt;
    e.category = *cat;
    e.definition_id = j.at("definition_id").get<int>();
    e.prompt_id = j.at("prompt_id").get<int>();
    e.provenance.source_dataset = j.at("dataset").get<std::string>();
    e.provenance.dialogue_id = j.at("dialogue_id").get<std::string>();
    e.provenance.instance_id = j.at("instance_id").get<std::string>();
    e.seed = j.at("seed").get<uint64_t>();
    for (const ojson& f : j.at("flags"))
      e.flags.insert(f.get<std::string>());
  } catch (const ojson::exception&) {
    return std::nullopt;
  }
  return e;
}

namespace {

// A sampled instance travels with its derived generator so augmentation,
// template choice, and rendering consume one deterministic stream.
struct PendingInstance {
  TaskInstance inst;
  Rng rng;
};

struct TaskJob {
  std::string task;
  std::vector<CorpusDescriptor> corpora;
};

struct CompiledTask {
  std::vector<FormattedExample> examples;
  TaskReport report;
  std::vector<std::string> warnings;
};

std::string make_instance_id(std::string_view task, std::string_view dataset,
                             std::string_view dialogue_id) {
  return std::string(task) + "::" + std::string(dataset) + "::" +
         std::string(dialogue_id);
}

// Maps an interchange record onto a base TaskInstance for the task, or a
// skip reason.
struct BaseBuild {
  std::optional<TaskInstance> inst;
  std::string skip_reason;
};

BaseBuild build_base_instance(InterchangeRecord&& rec, const TaskSpec& spec) {
  BaseBuild out;
  TaskInstance inst;
  inst.task_name = spec.name;
  inst.instance_id = make_instance_id(spec.name, rec.dialogue.source_dataset,
                                      rec.dialogue.dialogue_id);
  inst.context = std::move(rec.dialogue);
  inst.custom_fields = std::move(rec.fields);
  inst.class_options = std::move(rec.class_options);
  inst.target_response = std::move(rec.target_response);

  auto derive_gold_from_last_turn = [&]() -> bool {
    if (inst.context.turns.size() < 2) return false;
    inst.gold_output = inst.context.turns.back().text;
    inst.context.turns.pop_back();
    return true;
  };

  switch (spec.category) {
    case TaskCategory::edit: {
      std::string response;
      if (inst.target_response && !trim(*inst.target_response).empty()) {
        response = *inst.target_response;
      } else if (rec.gold && !trim(*rec.gold).empty()) {
        response = *rec.gold;
      } else if (inst.context.turns.size() >= 2) {
        response = inst.context.turns.back().text;
        inst.context.turns.pop_back();
      } else {
        out.skip_reason = "no response available for edit task";
        return out;
      }
      inst.target_response = response;
      inst.gold_output = response;
      // Placeholder until corruption runs on the sampled subset.
      inst.custom_fields.clear();
      inst.custom_fields.emplace_back("RESPONSE", response);
      break;
    }
    case TaskCategory::pretraining: {
      auto kind = pretrain_kind_for_task(spec.name);
      if (!kind) {
        out.skip_reason = "no pretraining construction for task " + spec.name;
        return out;
      }
      if (inst.context.turns.size() < pretrain_min_turns(*kind)) {
        out.skip_reason = "too few turns for " + spec.name;
        return out;
      }
      // Gold is assigned when the construction runs post-sampling.
      inst.gold_output = inst.context.turns.back().text;
      inst.custom_fields.clear();
      break;
    }
    case TaskCategory::meta: {
      out.skip_reason = "meta tasks are built from the rendered pool";
      return out;
    }
    default: {
      if (rec.gold && !trim(*rec.gold).empty()) {
        inst.gold_output = *rec.gold;
      } else if (inst.target_response &&
                 !trim(*inst.target_response).empty()) {
        inst.gold_output = *inst.target_response;
      } else if (spec.output_kind == OutputKind::free_text) {
        if (!derive_gold_from_last_turn()) {
          out.skip_reason = "no gold output derivable";
          return out;
        }
      } else {
        out.skip_reason = "missing gold for option task";
        return out;
      }
      break;
    }
  }
  out.inst = std::move(inst);
  return out;
}

CorruptionOp draw_corruption_op(const std::string& response, Rng& rng,
                                bool donors_available) {
  CorruptionOp op;
  op.granularity = rng.below(2) == 0 ? Granularity::phrase : Granularity::sentence;
  // Only kinds applicable to this response at this granularity enter the
  // draw; repeat is always applicable for a non-empty response.
  size_t units = op.granularity == Granularity::sentence
                     ? segment_sentences(response).size()
                     : (whitespace_token_count(response) >= 2 ? 2 : 1);
  std::vector<CorruptionKind> kinds;
  if (units >= 2) {
    kinds.push_back(CorruptionKind::shuffle);
    kinds.push_back(CorruptionKind::remove);
  }
  kinds.push_back(CorruptionKind::repeat);
  if (donors_available) kinds.push_back(CorruptionKind::add);
  op.kind = kinds[rng.below(kinds.size())];
  return op;
}

CompiledTask compile_task(const TaskJob& job, const TaskSpec& spec,
                          const MixturePlan& plan) {
  CompiledTask out;
  Rng task_rng(derive_seed(plan.master_seed, job.task));
  ReservoirSampler<PendingInstance> reservoir(plan.per_task_cap, task_rng);
  std::unordered_set<std::string> seen_ids;

  for (const CorpusDescriptor& descriptor : job.corpora) {
    CorpusStream stream(descriptor);
    while (auto item = stream.next()) {
      if (std::holds_alternative<RecordError>(*item)) {
        const RecordError& err = std::get<RecordError>(*item);
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": " + descriptor.path.string() +
                               ":" + std::to_string(err.line_no) + ": " +
                               err.message);
        continue;
      }
      auto& rec = std::get<InterchangeRecord>(*item);
      std::string id = make_instance_id(job.task, rec.dialogue.source_dataset,
                                        rec.dialogue.dialogue_id);
      if (!seen_ids.insert(id).second) {
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": duplicate dialogue_id '" +
                               rec.dialogue.dialogue_id + "'");
        continue;
      }
      BaseBuild built = build_base_instance(std::move(rec), spec);
      if (!built.inst) {
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": " + built.skip_reason);
        continue;
      }
      // Structural validation up front so sampling only sees usable
      // records; edit/pretrain instances get a second pass after their
      // construction runs.
      auto violations = validate_instance(*built.inst, spec);
      if (!violations.empty()) {
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": " + built.inst->instance_id +
                               ": " + violations.front());
        continue;
      }
      ++out.report.available;
      Rng inst_rng(derive_seed(plan.master_seed, built.inst->instance_id));
      reservoir.offer({std::move(*built.inst), inst_rng});
    }
  }

  std::vector<PendingInstance> sampled = reservoir.take();

  if (spec.category == TaskCategory::classification && plan.nota.rate > 0.0) {
    std::vector<TaskInstance> insts;
    insts.reserve(sampled.size());
    for (PendingInstance& p : sampled) insts.push_back(std::move(p.inst));
    apply_nota(insts, plan.nota, task_rng);
    for (size_t i = 0; i < sampled.size(); ++i)
      sampled[i].inst = std::move(insts[i]);
  }

  // Shared augmentation pools drawn from the sample itself.
  std::vector<std::string> donor_responses;
  std::vector<Dialogue> donor_dialogues;
  if (spec.category == TaskCategory::edit) {
    for (const PendingInstance& p : sampled)
      if (p.inst.target_response) donor_responses.push_back(*p.inst.target_response);
  } else if (spec.category == TaskCategory::pretraining) {
    for (const PendingInstance& p : sampled)
      donor_dialogues.push_back(p.inst.context);
  }

  const std::vector<std::string> field_tokens = spec.field_tokens();
  for (PendingInstance& pending : sampled) {
    TaskInstance inst = std::move(pending.inst);
    Rng& rng = pending.rng;

    if (spec.category == TaskCategory::edit) {
      CorruptionOp op =
          draw_corruption_op(*inst.target_response, rng, !donor_responses.empty());
      auto rebuilt = make_edit_instance(inst.context, *inst.target_response,
                                        op, rng, donor_responses);
      if (!rebuilt) {
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": " + inst.instance_id +
                               ": corruption inapplicable");
        continue;
      }
      rebuilt->instance_id = inst.instance_id;
      inst = std::move(*rebuilt);
    } else if (spec.category == TaskCategory::pretraining) {
      auto kind = pretrain_kind_for_task(spec.name);
      auto rebuilt =
          make_pretrain_instances(inst.context, *kind, rng, donor_dialogues);
      if (rebuilt.empty()) {
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": " + inst.instance_id +
                               ": pretraining construction skipped");
        continue;
      }
      rebuilt.front().instance_id = inst.instance_id;
      inst = std::move(rebuilt.front());
    }

    auto violations = validate_instance(inst, spec);
    if (!violations.empty()) {
      ++out.report.skipped;
      out.warnings.push_back(job.task + ": " + inst.instance_id + ": " +
                             violations.front());
      continue;
    }

    try {
      TemplateIds ids = sample_template(spec, rng);
      FormattedExample ex = render_example(inst, spec, ids, plan.format, rng);
      auto format_violations = validate_format(ex.input_text, field_tokens);
      if (!format_violations.empty()) {
        ++out.report.skipped;
        out.warnings.push_back(job.task + ": " + inst.instance_id +
                               ": " + format_violations.front());
        continue;
      }
      if (ex.flags.count(std::string(kFlagTruncated))) ++out.report.truncated;
      if (ex.flags.count(std::string(kFlagNotaCorrect))) ++out.report.nota_correct;
      if (ex.flags.count(std::string(kFlagNotaDistractor)))
        ++out.report.nota_distractor;
      out.examples.push_back(std::move(ex));
    } catch (const std::exception& e) {
      ++out.report.skipped;
      out.warnings.push_back(job.task + ": " + inst.instance_id + ": " +
                             e.what());
    }
  }

  out.report.sampled = out.examples.size();
  return out;
}

// Meta-task compilation over the rendered pool.
CompiledTask compile_meta_task(const std::string& task, const TaskSpec& spec,
                               const MixturePlan& plan, const Registry& registry,
                               std::span<const FormattedExample> pool) {
  CompiledTask out;
  const bool selection = task == "instruction selection";

  std::set<std::string> task_set;
  for (const FormattedExample& e : pool) task_set.insert(e.task_name);
  const size_t needed =
      selection ? static_cast<size_t>(plan.meta.num_choices) : 2;
  if (task_set.size() < needed)
    throw std::runtime_error("task '" + task + "': rendered pool spans " +
                             std::to_string(task_set.size()) +
                             " distinct tasks, need at least " +
                             std::to_string(needed));
  const std::vector<std::string> pool_tasks(task_set.begin(), task_set.end());

  Rng task_rng(derive_seed(plan.master_seed, task));
  ReservoirSampler<PendingInstance> reservoir(plan.per_task_cap, task_rng);
  for (const FormattedExample& e : pool) {
    std::string id = e.provenance.instance_id + (selection ? "#sel" : "#bin");
    Rng inst_rng(derive_seed(plan.master_seed, id));
    auto inst =
        selection
            ? make_selection_instance(e, pool_tasks, plan.meta, registry,
                                      inst_rng)
            : make_binary_instance(e, pool_tasks, registry, inst_rng);
    if (!inst) {
      ++out.report.skipped;
      continue;
    }
    ++out.report.available;
    reservoir.offer({std::move(*inst), inst_rng});
  }

  const std::vector<std::string> field_tokens = spec.field_tokens();
  for (PendingInstance& pending : reservoir.take()) {
    TaskInstance& inst = pending.inst;
    auto violations = validate_instance(inst, spec);
    if (!violations.empty()) {
      ++out.report.skipped;
      out.warnings.push_back(task + ": " + inst.instance_id + ": " +
                             violations.front());
      continue;
    }
    try {
      TemplateIds ids = sample_template(spec, pending.rng);
      FormattedExample ex =
          render_example(inst, spec, ids, plan.format, pending.rng);
      auto format_violations = validate_format(ex.input_text, field_tokens);
      if (!format_violations.empty()) {
        ++out.report.skipped;
        out.warnings.push_back(task + ": " + inst.instance_id + ": " +
                               format_violations.front());
        continue;
      }
      if (ex.flags.count(std::string(kFlagTruncated))) ++out.report.truncated;
      out.examples.push_back(std::move(ex));
    } catch (const std::exception& e) {
      ++out.report.skipped;
      out.warnings.push_back(task + ": " + inst.instance_id + ": " + e.what());
    }
  }
  out.report.sampled = out.examples.size();
  return out;
}

}  // namespace

CompileOutput compile_examples(const MixturePlan& plan, const Registry& registry) {
  // Group corpora per task; meta entries are deferred to the pool phase.
  std::map<std::string, TaskJob> jobs;
  std::vector<std::string> meta_tasks;
  for (const PlanEntry& entry : plan.entries) {
    if (plan.unseen_tasks.count(entry.task)) continue;
    const TaskSpec* spec = registry.find(entry.task);
    if (!spec) throw std::runtime_error("unknown task '" + entry.task + "'");
    if (spec->category == TaskCategory::meta) {
      if (entry.corpus)
        throw std::runtime_error("meta task '" + entry.task +
                                 "' cannot take a corpus");
      meta_tasks.push_back(entry.task);
      continue;
    }
    if (!entry.corpus)
      throw std::runtime_error("task '" + entry.task + "' has no corpus");
    TaskJob& job = jobs[entry.task];
    job.task = entry.task;
    job.corpora.push_back(*entry.corpus);
  }
  std::sort(meta_tasks.begin(), meta_tasks.end());
  meta_tasks.erase(std::unique(meta_tasks.begin(), meta_tasks.end()),
                   meta_tasks.end());

  std::vector<const TaskJob*> ordered;
  ordered.reserve(jobs.size());
  for (const auto& [name, job] : jobs) ordered.push_back(&job);

  // Tasks compile in parallel; emission order is fixed afterwards, so the
  // output is schedule-independent.
  std::vector<CompiledTask> compiled(ordered.size());
  std::vector<std::string> job_errors(ordered.size());
  const int workers =
      std::max(1, std::min<int>(plan.workers, static_cast<int>(ordered.size())));
  std::atomic<size_t> cursor{0};
  auto run = [&]() {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= ordered.size()) return;
      try {
        compiled[i] =
            compile_task(*ordered[i], *registry.find(ordered[i]->task), plan);
      } catch (const std::exception& e) {
        job_errors[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(run);
    for (std::thread& t : threads) t.join();
  }
  for (size_t i = 0; i < ordered.size(); ++i)
    if (!job_errors[i].empty())
      throw std::runtime_error("task '" + ordered[i]->task +
                               "': " + job_errors[i]);

  CompileOutput out;
  for (size_t i = 0; i < ordered.size(); ++i) {
    CompiledTask& task = compiled[i];
    out.report.per_task[ordered[i]->task] = task.report;
    if (task.report.available == 0)
      out.report.warnings.push_back("task '" + ordered[i]->task +
                                    "' has zero available instances");
    for (std::string& w : task.warnings)
      out.report.warnings.push_back(std::move(w));
    for (FormattedExample& e : task.examples) out.examples.push_back(std::move(e));
  }

  // Meta phase: the rendered pool is the deterministic concatenation above.
  std::vector<CompiledTask> meta_compiled;
  for (const std::string& task : meta_tasks) {
    const TaskSpec* spec = registry.find(task);
    meta_compiled.push_back(
        compile_meta_task(task, *spec, plan, registry, out.examples));
  }
  for (size_t i = 0; i < meta_tasks.size(); ++i) {
    CompiledTask& task = meta_compiled[i];
    out.report.per_task[meta_tasks[i]] = task.report;
    for (std::string& w : task.warnings)
      out.report.warnings.push_back(std::move(w));
    for (FormattedExample& e : task.examples) out.examples.push_back(std::move(e));
  }

  // Final emission order: tasks lexicographic, instances in sampled order.
  std::stable_sort(out.examples.begin(), out.examples.end(),
                   [](const FormattedExample& a, const FormattedExample& b) {
                     return a.task_name < b.task_name;
                   });
  return out;
}

MixtureReport compile(const MixturePlan& plan, const Registry& registry,
                      const std::filesystem::path& out_corpus,
                      const std::filesystem::path& out_report) {
  std::filesystem::path tmp_corpus = out_corpus;
  tmp_corpus += ".tmp";
  std::filesystem::path tmp_report = out_report;
  tmp_report += ".tmp";

  try {
    CompileOutput output = compile_examples(plan, registry);
    {
      std::ofstream out(tmp_corpus, std::ios::binary);
      if (!out)
        throw std::runtime_error("cannot write corpus file " +
                                 out_corpus.string());
      for (const FormattedExample& e : output.examples)
        out << example_to_jsonl(e) << '\n';
    }
    {
      std::ofstream report(tmp_report, std::ios::binary);
      if (!report)
        throw std::runtime_error("cannot write report file " +
                                 out_report.string());
      report << output.report.to_json();
    }
    std::filesystem::rename(tmp_corpus, out_corpus);
    std::filesystem::rename(tmp_report, out_report);
    return output.report;
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp_corpus, ec);
    std::filesystem::remove(tmp_report, ec);
    std::filesystem::remove(out_corpus, ec);
    std::filesystem::remove(out_report, ec);
    throw;
  }
}

}  // namespace dialcomp
