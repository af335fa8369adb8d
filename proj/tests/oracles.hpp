#pragma once

// Brute-force reference implementations, kept structurally independent of
// the library code they check. Only suitable for small inputs.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

inline std::vector<std::string> lower_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char raw : text) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// BLEU-2 by direct application of the definition: modified n-gram precision
// with per-type clipping against the most generous reference, geometric
// mean, brevity penalty from the closest reference length.
inline double bleu2(const std::string& candidate,
                    const std::vector<std::string>& references) {
  std::vector<std::string> cand = lower_tokens(candidate);
  if (cand.empty()) return 0.0;
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) refs.push_back(lower_tokens(r));

  double log_sum = 0.0;
  for (size_t n = 1; n <= 2; ++n) {
    if (cand.size() < n) return 0.0;
    std::map<std::vector<std::string>, int> cand_grams;
    for (size_t i = 0; i + n <= cand.size(); ++i)
      ++cand_grams[std::vector<std::string>(cand.begin() + i,
                                            cand.begin() + i + n)];
    int matched = 0;
    int total = 0;
    for (const auto& [gram, count] : cand_grams) {
      total += count;
      int best = 0;
      for (const auto& ref : refs) {
        int ref_count = 0;
        if (ref.size() >= n)
          for (size_t i = 0; i + n <= ref.size(); ++i)
            if (std::equal(gram.begin(), gram.end(), ref.begin() + i))
              ++ref_count;
        best = std::max(best, ref_count);
      }
      matched += std::min(count, best);
    }
    if (matched == 0) return 0.0;
    log_sum += 0.5 * std::log(static_cast<double>(matched) /
                              static_cast<double>(total));
  }

  long long c = static_cast<long long>(cand.size());
  long long r = static_cast<long long>(refs.front().size());
  for (const auto& ref : refs) {
    long long len = static_cast<long long>(ref.size());
    long long best_gap = std::llabs(r - c);
    long long gap = std::llabs(len - c);
    if (gap < best_gap || (gap == best_gap && len < r)) r = len;
  }
  double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return bp * std::exp(log_sum);
}

// Longest common subsequence by explicit subsequence enumeration over the
// candidate (exponential; candidate must stay short).
inline size_t lcs_by_enumeration(const std::vector<std::string>& cand,
                                 const std::vector<std::string>& ref) {
  size_t best = 0;
  const size_t n = cand.size();
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<const std::string*> sub;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) sub.push_back(&cand[i]);
    if (sub.size() <= best) continue;
    size_t j = 0;
    for (const std::string& token : ref) {
      if (j < sub.size() && token == *sub[j]) ++j;
    }
    if (j == sub.size()) best = sub.size();
  }
  return best;
}

inline double rouge_l(const std::string& candidate, const std::string& reference) {
  std::vector<std::string> cand = lower_tokens(candidate);
  std::vector<std::string> ref = lower_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  double lcs = static_cast<double>(lcs_by_enumeration(cand, ref));
  if (lcs == 0.0) return 0.0;
  double p = lcs / static_cast<double>(cand.size());
  double r = lcs / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

// Unigram F1 via sorted-vector intersection.
inline double unigram_f1(const std::string& candidate, const std::string& reference) {
  std::vector<std::string> cand = lower_tokens(candidate);
  std::vector<std::string> ref = lower_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  std::sort(cand.begin(), cand.end());
  std::sort(ref.begin(), ref.end());
  std::vector<std::string> common;
  std::set_intersection(cand.begin(), cand.end(), ref.begin(), ref.end(),
                        std::back_inserter(common));
  if (common.empty()) return 0.0;
  double p = static_cast<double>(common.size()) / static_cast<double>(cand.size());
  double r = static_cast<double>(common.size()) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

// Spearman via the rank-difference formula; valid only when there are no
// ties in either vector.
inline double spearman_no_ties(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  const size_t n = xs.size();
  auto rank_of = [](const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      size_t r = 1;
      for (size_t j = 0; j < v.size(); ++j)
        if (v[j] < v[i]) ++r;
      ranks[i] = static_cast<double>(r);
    }
    return ranks;
  };
  std::vector<double> rx = rank_of(xs);
  std::vector<double> ry = rank_of(ys);
  double sum_d2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = rx[i] - ry[i];
    sum_d2 += d * d;
  }
  double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
}

// Tie-aware Spearman: midranks computed by counting, Pearson by the raw
// moment formula. Independent of the library's sort-based ranking.
inline double spearman_with_ties(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  const size_t n = xs.size();
  auto midranks = [](const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      size_t below = 0;
      size_t equal = 0;
      for (double other : v) {
        if (other < v[i]) ++below;
        if (other == v[i]) ++equal;
      }
      ranks[i] = static_cast<double>(below) +
                 (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return ranks;
  };
  std::vector<double> rx = midranks(xs);
  std::vector<double> ry = midranks(ys);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
    sxy += rx[i] * ry[i];
  }
  double nn = static_cast<double>(n);
  double cov = sxy - sx * sy / nn;
  double vx = sxx - sx * sx / nn;
  double vy = syy - sy * sy / nn;
  return cov / std::sqrt(vx * vy);
}

// Sentence segmentation mirroring the documented rule, written as a simple
// regex-free scan over characters.
inline std::vector<std::string> sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (size_t i = 0; i < text.size(); ++i) {
    cur.push_back(text[i]);
    bool terminal = text[i] == '.' || text[i] == '!' || text[i] == '?';
    bool boundary = terminal && (i + 1 == text.size() ||
                                 text[i + 1] == ' ' || text[i + 1] == '\t' ||
                                 text[i + 1] == '\n');
    if (boundary) {
      while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
      while (!cur.empty() && cur.back() == ' ') cur.pop_back();
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    }
  }
  while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
  while (!cur.empty() && cur.back() == ' ') cur.pop_back();
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace oracle
