#include "dialcomp/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "dialcomp/text.hpp"

namespace dialcomp {

namespace {

std::vector<std::string> metric_tokens(std::string_view text) {
  return whitespace_tokens(casefold(text));
}

std::string normalize_label(std::string_view text) {
  return casefold(trim(text));
}

}  // namespace

AccuracyResult classification_accuracy(std::span<const Prediction> preds,
                                       std::span<const GoldInstance> golds) {
  std::unordered_map<std::string_view, const Prediction*> by_id;
  for (const Prediction& p : preds) by_id.emplace(p.instance_id, &p);

  AccuracyResult result;
  result.total = golds.size();
  size_t correct = 0;
  size_t out_of_option = 0;
  for (const GoldInstance& g : golds) {
    if (!g.options.empty()) ++result.with_options;
    auto it = by_id.find(g.instance_id);
    if (it == by_id.end()) {
      ++result.missing;
      if (!g.options.empty()) ++out_of_option;
      continue;
    }
    const std::string pred = normalize_label(it->second->text);
    if (pred == normalize_label(g.gold)) ++correct;
    if (!g.options.empty()) {
      bool in_options = false;
      for (const std::string& o : g.options)
        if (pred == normalize_label(o)) {
          in_options = true;
          break;
        }
      if (!in_options) ++out_of_option;
    }
  }
  if (result.total > 0)
    result.accuracy = static_cast<double>(correct) / result.total;
  if (result.with_options > 0)
    result.out_of_option_rate =
        static_cast<double>(out_of_option) / result.with_options;
  return result;
}

namespace {

// n-gram counts keyed by the joined token string.
std::unordered_map<std::string, int> ngram_counts(
    const std::vector<std::string>& tokens, size_t n) {
  std::unordered_map<std::string, int> counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (size_t j = 1; j < n; ++j) key += "\x1f" + tokens[i + j];
    ++counts[key];
  }
  return counts;
}

}  // namespace

double bleu2(std::string_view candidate,
             std::span<const std::string> references) {
  if (references.empty())
    throw std::invalid_argument("bleu2: no references");
  const std::vector<std::string> cand = metric_tokens(candidate);
  if (cand.empty()) return 0.0;

  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const std::string& r : references) refs.push_back(metric_tokens(r));

  long long matches[2] = {0, 0};
  long long totals[2] = {0, 0};
  for (size_t n = 1; n <= 2; ++n) {
    auto cand_counts = ngram_counts(cand, n);
    std::unordered_map<std::string, int> clipped;
    for (const auto& ref : refs)
      for (const auto& [key, count] : ngram_counts(ref, n))
        clipped[key] = std::max(clipped[key], count);
    long long total = 0;
    long long match = 0;
    for (const auto& [key, count] : cand_counts) {
      total += count;
      auto it = clipped.find(key);
      if (it != clipped.end()) match += std::min(count, it->second);
    }
    matches[n - 1] = match;
    totals[n - 1] = total;
  }
  if (totals[0] == 0 || totals[1] == 0) return 0.0;
  if (matches[0] == 0 || matches[1] == 0) return 0.0;

  // Brevity penalty against the closest reference length (ties go to the
  // shorter reference).
  const long long c = static_cast<long long>(cand.size());
  long long r = static_cast<long long>(refs[0].size());
  for (const auto& ref : refs) {
    long long len = static_cast<long long>(ref.size());
    if (std::llabs(len - c) < std::llabs(r - c) ||
        (std::llabs(len - c) == std::llabs(r - c) && len < r))
      r = len;
  }
  const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);

  // Single rational keeps exact cases exact: sqrt(m1*m2 / (t1*t2)).
  const double ratio = static_cast<double>(matches[0] * matches[1]) /
                       static_cast<double>(totals[0] * totals[1]);
  return bp * std::sqrt(ratio);
}

namespace {

size_t lcs_length(const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double rouge_l(std::string_view candidate, std::string_view reference) {
  const std::vector<std::string> cand = metric_tokens(candidate);
  const std::vector<std::string> ref = metric_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  const size_t lcs = lcs_length(cand, ref);
  if (lcs == 0) return 0.0;
  // F = 2PR/(P+R) with P = LCS/|c|, R = LCS/|r| reduces to 2*LCS/(|c|+|r|).
  return 2.0 * static_cast<double>(lcs) /
         static_cast<double>(cand.size() + ref.size());
}

double knowledge_f1(std::string_view candidate, std::string_view reference) {
  const std::vector<std::string> cand = metric_tokens(candidate);
  const std::vector<std::string> ref = metric_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  std::unordered_map<std::string, int> ref_counts;
  for (const std::string& t : ref) ++ref_counts[t];
  size_t overlap = 0;
  for (const std::string& t : cand) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      ++overlap;
      --it->second;
    }
  }
  if (overlap == 0) return 0.0;
  return 2.0 * static_cast<double>(overlap) /
         static_cast<double>(cand.size() + ref.size());
}

double begins_with_accuracy(std::span<const std::string> preds,
                            std::span<const std::string> initial_phrases) {
  if (preds.size() != initial_phrases.size())
    throw std::invalid_argument("begins_with_accuracy: unaligned inputs");
  if (preds.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    std::string pred = casefold(preds[i]);
    std::string phrase = casefold(initial_phrases[i]);
    // Leading whitespace is forgiven on both sides.
    std::string_view p = pred;
    std::string_view q = phrase;
    while (!p.empty() && std::isspace(static_cast<unsigned char>(p.front())))
      p.remove_prefix(1);
    while (!q.empty() && std::isspace(static_cast<unsigned char>(q.front())))
      q.remove_prefix(1);
    if (p.substr(0, q.size()) == q) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double relevance_score(double p_yes_raw, double p_no_raw) {
  if (p_yes_raw < 0.0 || p_no_raw < 0.0)
    throw std::invalid_argument("relevance_score: negative probability");
  if (p_yes_raw == 0.0 && p_no_raw == 0.0)
    throw std::invalid_argument("relevance_score: p(yes)+p(no) is zero");
  const long double yes = p_yes_raw;
  const long double no = p_no_raw;
  return static_cast<double>(yes / (yes + no));
}

namespace {

// Average ranks (1-based), ties share the mean rank of their run.
std::vector<double> average_ranks(std::span<const double> xs) {
  const size_t n = xs.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("spearman: size mismatch");
  const size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("spearman: need at least 2 pairs");
  for (size_t i = 0; i < n; ++i)
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw std::invalid_argument("spearman: non-finite value");

  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);

  double mean_x = 0.0, mean_y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("spearman: constant input vector");
  return sxy / std::sqrt(sxx * syy);
}

std::map<std::string, double> correlate_ratings(
    const std::map<std::string, double>& scores,
    std::span<const RatingRecord> ratings) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      joined;
  for (const RatingRecord& r : ratings) {
    bool known = false;
    for (std::string_view f : kRatingFields)
      if (f == r.rating_field) known = true;
    if (!known || !std::isfinite(r.rating)) continue;
    auto it = scores.find(r.instance_id);
    if (it == scores.end()) continue;
    auto& [xs, ys] = joined[r.rating_field];
    xs.push_back(it->second);
    ys.push_back(r.rating);
  }

  std::map<std::string, double> out;
  for (const auto& [field, pairs] : joined) {
    if (pairs.first.size() < 2) continue;
    try {
      out[field] = spearman(pairs.first, pairs.second);
    } catch (const std::invalid_argument&) {
      // Undefined correlation (constant side) is reported absent.
    }
  }
  return out;
}

}  // namespace dialcomp
