#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialcomp/core.hpp"
#include "dialcomp/registry.hpp"
#include "dialcomp/rng.hpp"

namespace dialcomp {

enum class CorruptionKind { shuffle, repeat, add, remove };
enum class Granularity { phrase, sentence };

std::string_view to_string(CorruptionKind k);
std::string_view to_string(Granularity g);

struct CorruptionOp {
  CorruptionKind kind = CorruptionKind::shuffle;
  Granularity granularity = Granularity::sentence;
};

struct NotaConfig {
  double rate = 0.10;
  double correct_fraction = 0.5;
  std::string nota_text = "none of the above";
};

// Marks exactly floor(rate * n) instances: the first floor(correct_fraction
// * k) of the random selection become NOTA-correct (gold removed from the
// options, NOTA inserted at a random slot, gold output set to the NOTA
// text), the rest NOTA-distractor (NOTA inserted, gold untouched).
// Instances whose option list is a single entry, or already contains the
// NOTA text, are ineligible and another instance is chosen in their place.
void apply_nota(std::vector<TaskInstance>& instances, const NotaConfig& cfg,
                Rng& rng);

// Units of a response at the given granularity. Sentences split after
// ./!/? followed by whitespace; phrases are runs of 2-4 whitespace tokens.
std::vector<std::string> segment_units(std::string_view response,
                                       Granularity granularity, Rng& rng);

// Deterministic sentence segmentation (no rng involved); used by the
// corruption laws as well as by callers that need stable units.
std::vector<std::string> segment_sentences(std::string_view response);

// Returns the corrupted response, or nullopt when the op is inapplicable
// (too few units, empty donor pool, or no distinct result after bounded
// retries).
std::optional<std::string> corrupt_response(
    std::string_view response, CorruptionOp op, Rng& rng,
    std::span<const std::string> donor_pool = {});

// Edit-task construction: the corrupted response is carried under the
// RESPONSE field, the clean response is both the gold output and the
// retained target.
std::optional<TaskInstance> make_edit_instance(const Dialogue& dialogue,
                                               const std::string& gold_response,
                                               CorruptionOp op, Rng& rng,
                                               std::span<const std::string> donor_pool);

enum class PretrainKind {
  fill_missing,
  find_missing_index,
  find_incoherent,
  find_swapped,
};

std::optional<PretrainKind> pretrain_kind_for_task(std::string_view task_name);

size_t pretrain_min_turns(PretrainKind kind);

// Builds pretraining instances from one dialogue; returns an empty vector
// when the dialogue has too few turns (or no donor is available for the
// incoherent kind). `donors` supplies replacement utterances for
// find_incoherent and must exclude nothing itself; the host dialogue is
// excluded here by dialogue_id.
std::vector<TaskInstance> make_pretrain_instances(
    const Dialogue& dialogue, PretrainKind kind, Rng& rng,
    std::span<const Dialogue> donors = {});

struct MetaConfig {
  int num_choices = 4;
};

// Meta-task construction over a rendered pool. Selection instances carry
// num_choices candidate instructions (the true one at a uniform slot);
// binary instances present the true instruction with probability one half.
// The source example's context and output are embedded; its instruction,
// options, and prompt are stripped. Throws when the pool spans fewer
// distinct tasks than required.
std::vector<TaskInstance> make_meta_instances(
    std::span<const FormattedExample> pool, const MetaConfig& cfg,
    const Registry& registry, bool selection, Rng& rng);

// Single-example versions used by the compiler so that every meta instance
// is derived from its own seeded generator. `pool_tasks` is the sorted set
// of distinct task names present in the pool.
std::optional<TaskInstance> make_selection_instance(
    const FormattedExample& source, std::span<const std::string> pool_tasks,
    const MetaConfig& cfg, const Registry& registry, Rng& rng);
std::optional<TaskInstance> make_binary_instance(
    const FormattedExample& source, std::span<const std::string> pool_tasks,
    const Registry& registry, Rng& rng);

}  // namespace dialcomp
