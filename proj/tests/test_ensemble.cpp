#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "testutil.hpp"
#include "verdict/ensemble.hpp"
#include "verdict/errors.hpp"
#include "verdict/textprep.hpp"

using namespace verdict;

namespace {

// Straight-line reference for the vote rule, kept separate from the library
// implementation and compared over exhaustive vote patterns.
int vote_oracle(const std::vector<int>& votes,
                const std::vector<std::vector<double>>& conf) {
    std::size_t n_labels = conf[0].size();
    std::vector<int> counts(n_labels, 0);
    for (int v : votes) ++counts[static_cast<std::size_t>(v)];
    int top = *std::max_element(counts.begin(), counts.end());
    int winner = -1;
    double winner_sum = -1.0;
    for (std::size_t l = 0; l < n_labels; ++l) {
        if (counts[l] != top) continue;
        double s = 0.0;
        for (const auto& c : conf) s += c[l];
        if (winner == -1 || s > winner_sum) {
            winner = static_cast<int>(l);
            winner_sum = s;
        }
    }
    return winner;
}

double closed_form_majority(int k, double p) {
    auto binom = [](int n, int r) {
        double out = 1.0;
        for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
        return out;
    };
    double acc = 0.0;
    for (int j = (k + 1) / 2; j <= k; ++j) {
        acc += binom(k, j) * std::pow(p, j) * std::pow(1.0 - p, k - j);
    }
    return acc;
}

ModelConfig binary_config(int vocab_size, int max_len) {
    ModelConfig cfg;
    cfg.vocab_size = vocab_size;
    cfg.max_len = max_len;
    cfg.d_model = 8;
    cfg.n_heads = 2;
    cfg.n_layers = 1;
    cfg.d_ff = 16;
    cfg.n_classes = 2;
    cfg.dropout_rate = 0.0;
    return cfg;
}

// Model that always predicts `favored` regardless of input.
ClassifierModel forced_model(const ModelConfig& cfg, int favored, std::int64_t seed) {
    ClassifierModel m = init_model(cfg, seed);
    for (Matrix* t : tensor_list(m.params)) t->fill(0.0);
    for (LayerParams& lp : m.params.layers) {
        lp.ln1_g.fill(1.0);
        lp.ln2_g.fill(1.0);
    }
    m.params.head_b.at(0, favored) = 8.0;
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("ensemble");

TEST_CASE("majority vote basics") {
    // two of three agree
    CHECK(majority_vote({0, 0, 1}, {{0.9, 0.1}, {0.8, 0.2}, {0.2, 0.8}}) == 0);
    // unanimity
    CHECK(majority_vote({1, 1, 1}, {{0.1, 0.9}, {0.2, 0.8}, {0.4, 0.6}}) == 1);
    // single member
    CHECK(majority_vote({1}, {{0.4, 0.6}}) == 1);
}

TEST_CASE("three-way tie resolved by summed probability") {
    // votes A, B, C with summed probabilities A=1.1, B=1.4, C=0.9
    std::vector<int> votes = {0, 1, 2};
    std::vector<std::vector<double>> conf = {
        {0.6, 0.4, 0.0},
        {0.1, 0.8, 0.1},
        {0.4, 0.2, 0.8},
    };
    CHECK(majority_vote(votes, conf) == 1);
    CHECK(vote_oracle(votes, conf) == 1);
}

TEST_CASE("vote rule matches the oracle on all 3-member 3-label patterns") {
    Rng rng(77);
    for (int pattern = 0; pattern < 27; ++pattern) {
        std::vector<int> votes = {pattern % 3, (pattern / 3) % 3, (pattern / 9) % 3};
        for (int draw = 0; draw < 8; ++draw) {
            std::vector<std::vector<double>> conf;
            for (int m = 0; m < 3; ++m) {
                // peak on the voted label so confidences align with votes
                std::vector<double> c = {rng.uniform(0.0, 0.3), rng.uniform(0.0, 0.3),
                                         rng.uniform(0.0, 0.3)};
                c[static_cast<std::size_t>(votes[static_cast<std::size_t>(m)])] =
                    0.4 + rng.uniform(0.0, 0.6);
                double sum = c[0] + c[1] + c[2];
                for (double& v : c) v /= sum;
                conf.push_back(c);
            }
            CAPTURE(pattern);
            CHECK(majority_vote(votes, conf) == vote_oracle(votes, conf));
        }
    }
}

TEST_CASE("vote is invariant under member permutation") {
    Rng rng(31);
    std::vector<int> votes = {0, 2, 2, 1, 0};
    std::vector<std::vector<double>> conf;
    for (std::size_t m = 0; m < votes.size(); ++m) {
        conf.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    }
    int expected = majority_vote(votes, conf);
    std::vector<std::size_t> perm = {4, 2, 0, 1, 3};
    std::vector<int> pv;
    std::vector<std::vector<double>> pc;
    for (std::size_t i : perm) {
        pv.push_back(votes[i]);
        pc.push_back(conf[i]);
    }
    CHECK(majority_vote(pv, pc) == expected);
}

TEST_CASE("odd member count over binary labels never reaches the tie-break") {
    // adversarial confidences pile all mass on the minority label; the vote
    // must still follow the counts
    for (int pattern = 0; pattern < 8; ++pattern) {
        std::vector<int> votes = {pattern & 1, (pattern >> 1) & 1, (pattern >> 2) & 1};
        int majority = (votes[0] + votes[1] + votes[2] >= 2) ? 1 : 0;
        std::vector<std::vector<double>> conf(3, std::vector<double>{0.0, 0.0});
        for (int m = 0; m < 3; ++m) {
            conf[static_cast<std::size_t>(m)][static_cast<std::size_t>(1 - majority)] = 1.0;
        }
        CHECK(majority_vote(votes, conf) == majority);
    }
}

TEST_CASE("majority vote input validation") {
    CHECK_THROWS_AS(majority_vote({}, {}), InputError);
    CHECK_THROWS_AS(majority_vote({0, 1}, {{1.0, 0.0}}), InputError);
    CHECK_THROWS_AS(majority_vote({0, 1}, {{1.0, 0.0}, {1.0}}), InputError);
    CHECK_THROWS_AS(majority_vote({5}, {{1.0, 0.0}}), InputError);
}

TEST_CASE("train_ensemble records seeds and reproduces byte-identical members") {
    auto records = testutil::keyword_corpus(12, Language::en, 50);
    std::vector<std::string> texts;
    for (const auto& r : records) texts.push_back(mask_mentions_urls(r.text));
    Vocabulary vocab = build_vocab(texts, 200, 1);

    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 8;
    cfg.max_len = 16;
    cfg.d_model = 8;
    cfg.n_heads = 2;
    cfg.n_layers = 1;
    cfg.d_ff = 16;
    cfg.seeds = {11, 22, 33};

    EnsembleModel a = train_ensemble(records, Task::task1, Language::en, vocab, cfg);
    REQUIRE(a.members.size() == 3);
    CHECK(a.members[0].seed == 11);
    CHECK(a.members[1].seed == 22);
    CHECK(a.members[2].seed == 33);

    EnsembleModel b = train_ensemble(records, Task::task1, Language::en, vocab, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        std::string dir = testutil::temp_dir("ens_cmp" + std::to_string(i));
        save_checkpoint(a.members[i], dir + "/a.ckpt");
        save_checkpoint(b.members[i], dir + "/b.ckpt");
        CHECK(testutil::slurp(dir + "/a.ckpt") == testutil::slurp(dir + "/b.ckpt"));
    }

    SUBCASE("parallel member training gives identical results") {
        TrainConfig par = cfg;
        par.threads = 3;
        EnsembleModel c = train_ensemble(records, Task::task1, Language::en, vocab, par);
        for (std::size_t i = 0; i < 3; ++i) {
            std::string dir = testutil::temp_dir("ens_par" + std::to_string(i));
            save_checkpoint(a.members[i], dir + "/a.ckpt");
            save_checkpoint(c.members[i], dir + "/c.ckpt");
            CHECK(testutil::slurp(dir + "/a.ckpt") == testutil::slurp(dir + "/c.ckpt"));
        }
    }
}

TEST_CASE("predict_ensemble margins and pass-through") {
    Vocabulary vocab = build_vocab({"hola amiga bruja calla"}, 60, 1);
    ModelConfig cfg = binary_config(vocab.size(), 16);

    EnsembleModel unanimous;
    unanimous.vocab = vocab;
    unanimous.members = {forced_model(cfg, 1, 1), forced_model(cfg, 1, 2),
                         forced_model(cfg, 1, 3)};
    EnsemblePrediction p1 = predict_ensemble(unanimous, "hola amiga");
    CHECK(p1.label_index == 1);
    CHECK(p1.margin == 3);
    CHECK(p1.votes == std::vector<int>{1, 1, 1});

    EnsembleModel split;
    split.vocab = vocab;
    split.members = {forced_model(cfg, 0, 1), forced_model(cfg, 0, 2), forced_model(cfg, 1, 3)};
    EnsemblePrediction p2 = predict_ensemble(split, "hola amiga");
    CHECK(p2.label_index == 0);
    CHECK(p2.margin == 1);
    CHECK(p2.label_index == majority_vote(p2.votes, {{1, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("simulator matches closed forms") {
    // single member: estimate equals p
    double single = simulate_vote_accuracy(1, 0.73, 0.0, 100000, 5);
    CHECK(std::abs(single - 0.73) <= 0.005);

    // independent members, k=3: binomial closed form
    double expected = closed_form_majority(3, 0.76);
    CHECK(expected == doctest::Approx(0.854848).epsilon(1e-9));
    double est = simulate_vote_accuracy(3, 0.76, 0.0, 100000, 6);
    CHECK(std::abs(est - expected) <= 0.01);

    // p = 0.5 is a fixed point
    double half = simulate_vote_accuracy(3, 0.5, 0.0, 100000, 7);
    CHECK(std::abs(half - 0.5) <= 0.01);

    // fully correlated members behave like one
    double corr = simulate_vote_accuracy(5, 0.76, 1.0, 100000, 8);
    CHECK(std::abs(corr - 0.76) <= 0.01);
}

TEST_CASE("simulator monotonicity in k for independent members above chance") {
    double prev = 0.0;
    for (int k : {1, 3, 5, 7}) {
        double est = simulate_vote_accuracy(k, 0.76, 0.0, 100000, 9);
        CHECK(est >= prev - 0.01);
        prev = est;
    }
}

TEST_CASE("simulator is deterministic and validates input") {
    CHECK(simulate_vote_accuracy(3, 0.7, 0.2, 50000, 4) ==
          simulate_vote_accuracy(3, 0.7, 0.2, 50000, 4));
    CHECK_THROWS_AS(simulate_vote_accuracy(2, 0.7, 0.0, 100, 1), ConfigError);
    CHECK_THROWS_AS(simulate_vote_accuracy(3, 1.5, 0.0, 100, 1), ConfigError);
    CHECK_THROWS_AS(simulate_vote_accuracy(3, 0.7, 2.0, 100, 1), ConfigError);
    CHECK_THROWS_AS(simulate_vote_accuracy(3, 0.7, 0.0, 0, 1), ConfigError);
}

TEST_SUITE_END();
