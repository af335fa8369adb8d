#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dialcomp {

struct TokenScores {
  double yes = 0.0;
  double no = 0.0;
};

struct Prediction {
  std::string instance_id;
  std::string text;
  std::optional<TokenScores> token_scores;
  std::optional<double> grade;  // precomputed external metric, pass-through
};

inline constexpr std::string_view kRatingFields[] = {
    "overall", "turing", "relevance", "appropriateness"};

struct RatingRecord {
  std::string instance_id;
  double rating = 0.0;
  std::string rating_field;
};

struct GoldInstance {
  std::string instance_id;
  std::string gold;
  std::vector<std::string> options;  // label space; empty when unconstrained
};

struct AccuracyResult {
  double accuracy = 0.0;
  double out_of_option_rate = 0.0;
  size_t total = 0;
  size_t missing = 0;           // gold instances without a prediction
  size_t with_options = 0;      // denominator of the diagnostic
};

// Exact-match accuracy after trim + case-fold, with the out-of-option
// diagnostic over the instances that carry an option list. A missing
// prediction counts as wrong and out-of-option.
AccuracyResult classification_accuracy(std::span<const Prediction> preds,
                                       std::span<const GoldInstance> golds);

// Sentence-level BLEU-2: geometric mean of unigram and bigram modified
// precisions times the brevity penalty; no smoothing, so a zero-match
// n-gram level zeroes the score. Case-folded whitespace tokens.
double bleu2(std::string_view candidate,
             std::span<const std::string> references);

// LCS F-measure with equal precision/recall weighting.
double rouge_l(std::string_view candidate, std::string_view reference);

// Unigram multiset-overlap F1.
double knowledge_f1(std::string_view candidate, std::string_view reference);

// Fraction of predictions whose text starts with the paired initial phrase
// (leading-whitespace trim + case-fold). Pairs aligned by index.
double begins_with_accuracy(std::span<const std::string> preds,
                            std::span<const std::string> initial_phrases);

// p_yes / (p_yes + p_no). Throws when both inputs are zero or either is
// negative. Computed in extended precision so the double result is
// correctly rounded.
double relevance_score(double p_yes_raw, double p_no_raw);

// Rank correlation with average ranks for ties (Pearson correlation of the
// rank vectors). Throws on size < 2, size mismatch, or a constant input.
double spearman(std::span<const double> xs, std::span<const double> ys);

// Per-field Spearman between model scores and human ratings, joined on
// instance_id. Fields with fewer than two joined pairs, or an undefined
// correlation, are absent from the result.
std::map<std::string, double> correlate_ratings(
    const std::map<std::string, double>& scores,
    std::span<const RatingRecord> ratings);

}  // namespace dialcomp
