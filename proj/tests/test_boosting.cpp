#include <doctest.h>

#include <cmath>

#include "ensemblekit/boosting.hpp"
#include "ensemblekit/errors.hpp"
#include "ensemblekit/synthetic.hpp"
#include "oracles.hpp"

using namespace ensemblekit;

namespace {

Dataset one_d(std::vector<double> xs, std::vector<Label> ys, std::size_t k = 2) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = xs[i];
    std::vector<std::string> names;
    for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
    return Dataset(x, std::move(ys), ClassRegistry(names));
}

StumpModel stump(double threshold, Label left, Label right) {
    StumpModel s;
    s.threshold = threshold;
    s.left = left;
    s.right = right;
    s.input_dim = 1;
    s.registry = ClassRegistry({"neg", "pos"});
    return s;
}

double training_error(const BoostModel& m, const Dataset& ds) {
    const auto pred = predict_boosting_rows(m, ds.features());
    double err = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) err += pred[i] != ds.labels()[i];
    return err / static_cast<double>(ds.size());
}

}  // namespace

TEST_CASE("init_weights") {
    const auto w4 = init_weights(4);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(w4(i) == 0.25);
    CHECK(init_weights(1)(0) == 1.0);
    for (std::size_t n : {3u, 7u, 1000u}) CHECK(std::abs(init_weights(n).sum() - 1.0) <= 1e-12);
}

TEST_CASE("weighted_error") {
    const std::vector<Label> y{0, 1, 1, 0};
    const auto w = init_weights(4);
    CHECK(weighted_error(y, y, w) == 0.0);
    CHECK(weighted_error(std::vector<Label>{1, 0, 0, 1}, y, w) == 1.0);
    CHECK(weighted_error(std::vector<Label>{0, 1, 1, 1}, y, w) == 0.25);
    CHECK_THROWS_AS(weighted_error(std::vector<Label>{0, 1}, y, w), DataError);
}

TEST_CASE("model_weight") {
    CHECK(model_weight(0.5, BoostMode::binary, 2) == 0.0);
    CHECK(model_weight(0.1, BoostMode::binary, 2) == doctest::Approx(0.5 * std::log(9.0)).epsilon(1e-12));
    CHECK(model_weight(0.1, BoostMode::binary, 2) == doctest::Approx(1.09861).epsilon(1e-5));
    CHECK(std::abs(model_weight(2.0 / 3.0, BoostMode::samme, 3)) <= 1e-12);
    CHECK(model_weight(0.0, BoostMode::binary, 2) == doctest::Approx(0.5 * std::log((1 - 1e-10) / 1e-10)));
    CHECK(std::isfinite(model_weight(1.0, BoostMode::samme, 3)));
}

TEST_CASE("property: model_weight strictly decreases in eps") {
    for (BoostMode mode : {BoostMode::binary, BoostMode::samme}) {
        double prev = model_weight(1e-10, mode, 3);
        for (int i = 1; i <= 1000; ++i) {
            const double eps = 1e-10 + (1.0 - 2e-10) * i / 1000.0;
            const double a = model_weight(eps, mode, 3);
            CHECK(a < prev);
            prev = a;
        }
    }
}

TEST_CASE("update_weights") {
    const std::vector<Label> y{0, 1};
    SUBCASE("binary, alpha = ln(9)/2, second sample wrong -> (0.1, 0.9)") {
        const auto w = update_weights(init_weights(2), 0.5 * std::log(9.0), std::vector<Label>{0, 0}, y, BoostMode::binary);
        CHECK(w(0) == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(w(1) == doctest::Approx(0.9).epsilon(1e-12));
    }
    SUBCASE("a perfect predictor leaves weights alone") {
        Eigen::Vector2d w0(0.3, 0.7);
        for (BoostMode mode : {BoostMode::binary, BoostMode::samme}) {
            const auto w = update_weights(w0, 2.7, y, y, mode);
            CHECK(w(0) == doctest::Approx(0.3).epsilon(1e-12));
            CHECK(w(1) == doctest::Approx(0.7).epsilon(1e-12));
        }
    }
    SUBCASE("alpha = 0 leaves weights alone") {
        Eigen::Vector2d w0(0.3, 0.7);
        const auto w = update_weights(w0, 0.0, std::vector<Label>{1, 0}, y, BoostMode::samme);
        CHECK(w(0) == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("overflowing alpha is reported") {
        CHECK_THROWS_AS(update_weights(init_weights(2), 1e6, std::vector<Label>{1, 0}, y, BoostMode::samme), InvariantError);
    }
}

TEST_CASE("fit_boosting on separable data stops at zero error") {
    const Dataset ds = one_d({-3, -2, -1, 1, 2, 3}, {0, 0, 0, 1, 1, 1});
    const BoostModel m = fit_boosting(ds, 1, {LearnerKind::stump}, BoostMode::binary, 1);
    REQUIRE(m.history.size() == 1);
    CHECK(m.history[0].eps == 0.0);
    CHECK(m.history[0].alpha == doctest::Approx(0.5 * std::log((1 - 1e-10) / 1e-10)));
    CHECK(training_error(m, ds) == 0.0);
}

TEST_CASE("binary training error respects the AdaBoost bound") {
    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
        const Dataset ds = make_binary_gaussians(200, seed);
        std::vector<double> eps;
        const BoostModel m = fit_boosting(ds, 10, {LearnerKind::stump}, BoostMode::binary, seed,
                                          [&](const RoundRecord& r, const SampleWeights& w) {
                                              eps.push_back(r.eps);
                                              CHECK(std::abs(w.sum() - 1.0) <= 1e-9);
                                              CHECK((w.array() >= 0.0).all());
                                          });
        CHECK(eps.size() == m.history.size());
        CHECK(training_error(m, ds) <= oracle::adaboost_training_error_bound(eps));
        for (const auto& h : m.history) CHECK(h.eps < 0.5);
    }
}

TEST_CASE("fit_boosting is deterministic") {
    const auto bench = make_blobs_benchmark(3);
    const auto a = fit_boosting(bench.train, 8, {LearnerKind::stump}, BoostMode::samme, 4);
    const auto b = fit_boosting(bench.train, 8, {LearnerKind::stump}, BoostMode::samme, 4);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].eps == b.history[i].eps);
        CHECK(a.history[i].alpha == b.history[i].alpha);
    }
}

TEST_CASE("fit_boosting with logreg learners uses the weights") {
    const auto bench = make_blobs_benchmark(4);
    const auto m = fit_boosting(bench.train, 4, {LearnerKind::logreg, 0.1, 50, 0.0}, BoostMode::samme, 4);
    CHECK(!m.rounds.empty());
    for (const auto& h : m.history) CHECK(h.eps < 2.0 / 3.0);
}

TEST_CASE("predict_boosting") {
    SUBCASE("one round follows its learner") {
        BoostModel m;
        m.mode = BoostMode::binary;
        m.registry = ClassRegistry({"neg", "pos"});
        m.rounds.push_back({stump(0.0, 1, 0), 0.8});
        CHECK(predict_boosting(m, Eigen::VectorXd::Constant(1, -1.0)) == 1);
        CHECK(predict_boosting(m, Eigen::VectorXd::Constant(1, 1.0)) == 0);
    }
    SUBCASE("alphas (1.0, 0.5) with votes (+1, -1) sum to +0.5") {
        BoostModel m;
        m.mode = BoostMode::binary;
        m.registry = ClassRegistry({"neg", "pos"});
        m.rounds.push_back({stump(10.0, 1, 1), 1.0});
        m.rounds.push_back({stump(10.0, 0, 0), 0.5});
        CHECK(predict_boosting(m, Eigen::VectorXd::Zero(1)) == 1);
        m.rounds[1].alpha = 1.0;  // zero sum goes to class 0
        CHECK(predict_boosting(m, Eigen::VectorXd::Zero(1)) == 0);
    }
    SUBCASE("scaling every alpha keeps predictions") {
        const auto bench = make_blobs_benchmark(5);
        BoostModel m = fit_boosting(bench.train, 10, {LearnerKind::stump}, BoostMode::samme, 5);
        const auto before = predict_boosting_rows(m, bench.test.features());
        for (auto& r : m.rounds) r.alpha *= 3.25;
        CHECK(predict_boosting_rows(m, bench.test.features()) == before);
    }
}

TEST_CASE("samme on two classes matches binary mode") {
    for (std::uint64_t seed : {7ULL, 21ULL}) {
        const Dataset ds = make_binary_gaussians(200, seed);
        const auto bin = fit_boosting(ds, 10, {LearnerKind::stump}, BoostMode::binary, seed);
        const auto sam = fit_boosting(ds, 10, {LearnerKind::stump}, BoostMode::samme, seed);
        REQUIRE(bin.history.size() == sam.history.size());
        for (std::size_t t = 0; t < bin.history.size(); ++t)
            CHECK(std::abs(sam.history[t].alpha - 2.0 * bin.history[t].alpha) <= 1e-9);
        CHECK(predict_boosting_rows(bin, ds.features()) == predict_boosting_rows(sam, ds.features()));
    }
}

TEST_CASE("boosting errors") {
    const auto bench = make_blobs_benchmark(6);
    CHECK_THROWS_AS(fit_boosting(bench.train, 5, {LearnerKind::stump}, BoostMode::binary, 1), ConfigError);
    CHECK_THROWS_AS(fit_boosting(bench.train, 0, {LearnerKind::stump}, BoostMode::samme, 1), ConfigError);
    // No feature variation: the first learner is at chance.
    const Dataset flat = one_d({1, 1, 1, 1}, {0, 1, 0, 1});
    CHECK_THROWS_AS(fit_boosting(flat, 3, {LearnerKind::stump}, BoostMode::binary, 1), DataError);
}

TEST_CASE("history CSV") {
    const Dataset ds = make_binary_gaussians(50, 1);
    const auto m = fit_boosting(ds, 3, {LearnerKind::stump}, BoostMode::binary, 1);
    const std::string csv = boost_history_csv(m);
    CHECK(csv.rfind("round,eps,alpha\n1,", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == m.history.size() + 1);
}
