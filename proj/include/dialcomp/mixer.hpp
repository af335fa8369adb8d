#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialcomp/augment.hpp"
#include "dialcomp/core.hpp"
#include "dialcomp/formatter.hpp"
#include "dialcomp/ingest.hpp"
#include "dialcomp/registry.hpp"
#include "dialcomp/rng.hpp"

namespace dialcomp {

struct PlanEntry {
  std::string task;
  // Meta tasks have no corpus; they are built from the rendered pool.
  std::optional<CorpusDescriptor> corpus;
};

struct MixturePlan {
  uint64_t master_seed = 0;
  size_t per_task_cap = 5000;
  int workers = 1;
  NotaConfig nota;
  FormatConfig format;
  MetaConfig meta;
  std::vector<PlanEntry> entries;
  // Tasks designated unseen are excluded from compilation entirely.
  std::set<std::string> unseen_tasks;
};

// Parses a plan JSON document; corpus paths resolve relative to the plan
// file's directory.
MixturePlan load_plan(const std::filesystem::path& path);
MixturePlan parse_plan(const std::string& json_text,
                       const std::filesystem::path& base_dir,
                       const std::string& origin);

struct TaskReport {
  size_t available = 0;
  size_t sampled = 0;
  size_t nota_correct = 0;
  size_t nota_distractor = 0;
  size_t truncated = 0;
  size_t skipped = 0;
};

struct MixtureReport {
  std::map<std::string, TaskReport> per_task;
  std::vector<std::string> warnings;

  TaskReport totals() const;
  std::string to_json() const;
};

// Uniform without-replacement reservoir; emitted items keep stream order.
template <typename T>
class ReservoirSampler {
 public:
  ReservoirSampler(size_t cap, Rng& rng) : cap_(cap), rng_(rng) {}

  void offer(T item) {
    if (cap_ == 0) {
      ++seen_;
      return;
    }
    if (slots_.size() < cap_) {
      slots_.push_back({seen_, std::move(item)});
    } else {
      uint64_t j = rng_.below(seen_ + 1);
      if (j < cap_) slots_[j] = {seen_, std::move(item)};
    }
    ++seen_;
  }

  size_t seen() const { return seen_; }

  std::vector<T> take() {
    std::sort(slots_.begin(), slots_.end(),
              [](const Slot& a, const Slot& b) { return a.index < b.index; });
    std::vector<T> out;
    out.reserve(slots_.size());
    for (Slot& s : slots_) out.push_back(std::move(s.item));
    slots_.clear();
    return out;
  }

 private:
  struct Slot {
    size_t index;
    T item;
  };
  size_t cap_;
  Rng& rng_;
  size_t seen_ = 0;
  std::vector<Slot> slots_;
};

struct MixtureSample {
  std::vector<TaskInstance> instances;  // tasks in lexicographic order
  MixtureReport report;
};

// Per task, uniformly samples min(available, cap) instances without
// replacement using the task-derived seed; deterministic in the plan.
MixtureSample sample_mixture(
    const std::map<std::string, std::vector<TaskInstance>>& per_task,
    const MixturePlan& plan);

struct CompileOutput {
  std::vector<FormattedExample> examples;  // deterministic emission order
  MixtureReport report;
};

// Full pipeline: ingest + sample + augment + render + meta construction.
// Fatal configuration errors throw; per-record problems are counted and
// surfaced in the report.
CompileOutput compile_examples(const MixturePlan& plan, const Registry& registry);

// compile_examples plus serialization. On failure any partial output file
// is removed.
MixtureReport compile(const MixturePlan& plan, const Registry& registry,
                      const std::filesystem::path& out_corpus,
                      const std::filesystem::path& out_report);

struct HoldoutPlans {
  MixturePlan train;
  MixturePlan eval;
};

// Partitions the plan by the seen/unseen designation. Throws when the two
// sets overlap or an entry's task is designated by neither.
HoldoutPlans holdout_split(const MixturePlan& plan,
                           const std::set<std::string>& seen,
                           const std::set<std::string>& unseen);

// Corpus line (de)serialization. Key order is fixed so compiled files are
// byte-stable.
std::string example_to_jsonl(const FormattedExample& example);
std::optional<FormattedExample> example_from_jsonl(const std::string& line);

}  // namespace dialcomp
