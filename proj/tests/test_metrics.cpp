#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dialcomp/metrics.hpp"
#include "dialcomp/rng.hpp"
#include "oracles.hpp"

using namespace dialcomp;

namespace {

std::string random_sentence(Rng& rng, size_t max_len, size_t vocab) {
  size_t len = 1 + rng.below(max_len);
  std::string out;
  for (size_t i = 0; i < len; ++i) {
    if (i) out += ' ';
    out += 'a' + static_cast<char>(rng.below(vocab));
  }
  return out;
}

}  // namespace

TEST_CASE("classification accuracy and the out-of-option diagnostic") {
  std::vector<GoldInstance> golds = {
      {"i1", "yes", {"yes", "no"}},
      {"i2", "no", {"yes", "no"}},
      {"i3", "yes", {"yes", "no"}},
      {"i4", "no", {"yes", "no"}},
  };
  std::vector<Prediction> preds = {
      {"i1", "yes", {}, {}},
      {"i2", "no", {}, {}},
      {"i3", "maybe", {}, {}},
      {"i4", " No ", {}, {}},
  };
  AccuracyResult r = classification_accuracy(preds, golds);
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK(r.out_of_option_rate == doctest::Approx(0.25));

  // Everything right.
  preds[2].text = "yes";
  r = classification_accuracy(preds, golds);
  CHECK(r.accuracy == 1.0);
  CHECK(r.out_of_option_rate == 0.0);

  // Missing prediction counts as wrong and out-of-option.
  preds.pop_back();
  r = classification_accuracy(preds, golds);
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK(r.out_of_option_rate == doctest::Approx(0.25));
  CHECK(r.missing == 1);
}

TEST_CASE("bleu2 worked values") {
  std::vector<std::string> ref_same{"a b c d"};
  CHECK(bleu2("a b c d", ref_same) == 1.0);

  std::vector<std::string> ref{"a b x d"};
  CHECK(bleu2("a b c d", ref) == 0.5);  // p1=3/4, p2=1/3, BP=1

  std::vector<std::string> ref2{"a b"};
  CHECK(bleu2("z z", ref2) == 0.0);
  CHECK(bleu2("", ref2) == 0.0);
  CHECK_THROWS(bleu2("a", {}));
}

TEST_CASE("bleu2 brevity penalty bites short candidates") {
  std::vector<std::string> ref{"a b c d e f"};
  double score = bleu2("a b c", ref);
  CHECK(score < 1.0);
  CHECK(score == doctest::Approx(std::exp(1.0 - 6.0 / 3.0)));
}

TEST_CASE("rouge_l worked values") {
  CHECK(rouge_l("x y z", "x y z") == 1.0);
  CHECK(rouge_l("a b c", "a c b") == 2.0 / 3.0);  // LCS = 2
  CHECK(rouge_l("a b", "c d") == 0.0);
  CHECK(rouge_l("", "a") == 0.0);
}

TEST_CASE("knowledge_f1 worked values") {
  CHECK(knowledge_f1("the cat", "the dog") == 0.5);
  CHECK(knowledge_f1("the cat", "cat the") == 1.0);
  CHECK(knowledge_f1("a b", "c d") == 0.0);
  // Count-aware: the second "the" only matches once.
  CHECK(knowledge_f1("the the", "the cat") == 0.5);
}

TEST_CASE("begins_with_accuracy prefix semantics") {
  std::vector<std::string> preds{"Please describe the suitcase.",
                                 "Describe please", "anything"};
  std::vector<std::string> phrases{"Please describe", "Please describe", ""};
  CHECK(begins_with_accuracy(preds, phrases) == doctest::Approx(2.0 / 3.0));

  std::vector<std::string> capped{" PLEASE describe it"};
  std::vector<std::string> phrase{"please Describe"};
  CHECK(begins_with_accuracy(capped, phrase) == 1.0);
}

TEST_CASE("relevance_score normalization") {
  CHECK(relevance_score(0.3, 0.1) == 0.75);
  CHECK(relevance_score(0.2, 0.2) == 0.5);
  CHECK(relevance_score(7.0, 7.0) == 0.5);
  CHECK(relevance_score(0.0, 0.2) == 0.0);
  CHECK_THROWS(relevance_score(0.0, 0.0));
  CHECK_THROWS(relevance_score(-0.1, 0.5));
}

TEST_CASE("relevance_score is monotone in p_yes and sums to one") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.real() * 10.0;
    double b = rng.real() * 10.0 + 1e-9;
    double s = relevance_score(a, b);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(relevance_score(a + 0.5, b) > s);
    CHECK(std::abs(relevance_score(a, b) + relevance_score(b, a) - 1.0) <=
          4.5e-16);
  }
}

TEST_CASE("spearman worked values") {
  std::vector<double> xs{1, 2, 3, 4};
  std::vector<double> same{1, 2, 3, 4};
  std::vector<double> reversed{4, 3, 2, 1};
  std::vector<double> mixed{2, 1, 4, 3};
  CHECK(spearman(xs, same) == 1.0);
  CHECK(spearman(xs, reversed) == -1.0);
  CHECK(spearman(xs, mixed) == 0.6);
}

TEST_CASE("spearman rejects degenerate inputs") {
  std::vector<double> xs{1, 2, 3};
  std::vector<double> constant{5, 5, 5};
  std::vector<double> one{1};
  CHECK_THROWS(spearman(xs, constant));
  CHECK_THROWS(spearman(one, one));
  std::vector<double> short_y{1, 2};
  CHECK_THROWS(spearman(xs, short_y));
}

TEST_CASE("spearman matches the rank-difference oracle on tie-free data") {
  Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 3 + rng.below(20);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < n; ++i) {
      xs.push_back(static_cast<double>(i) + rng.real() * 0.25);
      ys.push_back(rng.real() * 100.0);
    }
    CHECK(spearman(xs, ys) ==
          doctest::Approx(oracle::spearman_no_ties(xs, ys)).epsilon(1e-9));
  }
}

TEST_CASE("spearman matches the midrank oracle on tied data") {
  Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 4 + rng.below(16);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < n; ++i) {
      xs.push_back(static_cast<double>(rng.below(4)));
      ys.push_back(static_cast<double>(rng.below(4)));
    }
    bool x_const = std::all_of(xs.begin(), xs.end(),
                               [&](double v) { return v == xs[0]; });
    bool y_const = std::all_of(ys.begin(), ys.end(),
                               [&](double v) { return v == ys[0]; });
    if (x_const || y_const) continue;
    double ours = spearman(xs, ys);
    double ref = oracle::spearman_with_ties(xs, ys);
    CHECK(std::abs(ours - ref) <= 1e-9);
  }
}

TEST_CASE("spearman is invariant under increasing transforms") {
  std::vector<double> xs{0.3, 1.5, 0.9, 2.4, 7.0, 4.2};
  std::vector<double> ys{10, 3, 8, 6, 1, 2};
  double base = spearman(xs, ys);
  std::vector<double> warped;
  for (double x : xs) warped.push_back(std::exp(x) + 3.0);
  CHECK(spearman(warped, ys) == doctest::Approx(base).epsilon(1e-12));
  std::vector<double> negated;
  for (double x : xs) negated.push_back(-x);
  CHECK(spearman(negated, ys) == doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("metric oracle equivalence on random small sequences") {
  Rng rng(31415);
  for (int trial = 0; trial < 300; ++trial) {
    std::string cand = random_sentence(rng, 12, 6);
    std::string ref = random_sentence(rng, 12, 6);
    std::vector<std::string> refs{ref};
    CHECK(std::abs(bleu2(cand, refs) - oracle::bleu2(cand, {ref})) <= 1e-9);
    CHECK(std::abs(rouge_l(cand, ref) - oracle::rouge_l(cand, ref)) <= 1e-9);
    CHECK(std::abs(knowledge_f1(cand, ref) - oracle::unigram_f1(cand, ref)) <=
          1e-9);
  }
}

TEST_CASE("metric outputs stay in range on random inputs") {
  Rng rng(2718);
  for (int trial = 0; trial < 500; ++trial) {
    std::string cand = random_sentence(rng, 20, 8);
    std::string ref = random_sentence(rng, 20, 8);
    std::vector<std::string> refs{ref};
    double b = bleu2(cand, refs);
    double r = rouge_l(cand, ref);
    double f = knowledge_f1(cand, ref);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("identity inputs score one") {
  Rng rng(161803);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = random_sentence(rng, 10, 5);
    if (oracle::lower_tokens(text).size() < 2) continue;
    std::vector<std::string> refs{text};
    CHECK(bleu2(text, refs) == 1.0);
    CHECK(rouge_l(text, text) == 1.0);
    CHECK(knowledge_f1(text, text) == 1.0);
  }
}

TEST_CASE("correlate_ratings joins per field and drops thin fields") {
  std::map<std::string, double> scores;
  std::vector<RatingRecord> ratings;
  for (int i = 0; i < 10; ++i) {
    std::string id = "r" + std::to_string(i);
    scores[id] = static_cast<double>(i) / 10.0;
    ratings.push_back({id, static_cast<double>(i), "relevance"});
  }
  ratings.push_back({"r0", 3.0, "turing"});      // single pair: absent
  ratings.push_back({"missing", 2.0, "overall"});  // no joined score
  ratings.push_back({"r1", 2.0, "bogus_field"});   // unknown field

  auto rho = correlate_ratings(scores, ratings);
  REQUIRE(rho.count("relevance") == 1);
  CHECK(rho.at("relevance") == 1.0);
  CHECK(rho.count("turing") == 0);
  CHECK(rho.count("overall") == 0);
  CHECK(rho.count("bogus_field") == 0);
}

TEST_CASE("correlate_ratings matches the rank-formula oracle on a permutation") {
  Rng rng(5150);
  std::map<std::string, double> scores;
  std::vector<RatingRecord> ratings;
  std::vector<double> xs, ys;
  for (int i = 0; i < 50; ++i) {
    std::string id = "p" + std::to_string(i);
    double score = rng.real();
    double rating = rng.real() * 5.0;
    scores[id] = score;
    ratings.push_back({id, rating, "appropriateness"});
    xs.push_back(score);
    ys.push_back(rating);
  }
  auto rho = correlate_ratings(scores, ratings);
  REQUIRE(rho.count("appropriateness") == 1);
  CHECK(std::abs(rho.at("appropriateness") - oracle::spearman_no_ties(xs, ys)) <=
        1e-9);
}
