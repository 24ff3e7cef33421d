#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "ensemblekit/data.hpp"
#include "ensemblekit/errors.hpp"
#include "ensemblekit/rng.hpp"
#include "ensemblekit/synthetic.hpp"
#include "test_util.hpp"

using namespace ensemblekit;

namespace {

Dataset sized_classes(std::vector<std::size_t> sizes) {
    std::size_t n = 0;
    for (auto s : sizes) n += s;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 1);
    std::vector<Label> y;
    std::vector<std::string> names;
    Eigen::Index row = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        names.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < sizes[c]; ++i) {
            x(row++, 0) = static_cast<double>(c * 1000 + i);
            y.push_back(static_cast<Label>(c));
        }
    }
    return Dataset(x, y, ClassRegistry(names));
}

std::multiset<double> values_of_class(const Dataset& ds, Label c) {
    std::multiset<double> out;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.labels()[i] == c) out.insert(ds.features()(static_cast<Eigen::Index>(i), 0));
    return out;
}

}  // namespace

TEST_CASE("load_feature_csv builds registry in first-appearance order") {
    TempDir tmp;
    const auto path = tmp.path() / "d.csv";
    write_file(path, "x1,x2,label\n0.5,1,a\n-2,3e2,a\n4,5,b\n6,7,b\n");
    const Dataset ds = load_feature_csv(path);
    CHECK(ds.size() == 4);
    CHECK(ds.dim() == 2);
    CHECK(ds.num_classes() == 2);
    CHECK(ds.registry().names() == std::vector<std::string>{"a", "b"});
    CHECK(ds.features()(1, 1) == 300.0);
    CHECK(ds.labels() == std::vector<Label>{0, 0, 1, 1});

    write_file(path, "f,label\n1.25,zebra\n");
    const Dataset one = load_feature_csv(path);
    CHECK(one.size() == 1);
    CHECK(one.dim() == 1);
    CHECK(one.num_classes() == 1);

    write_file(path, "f,label\n1,b\n2,a\n3,b\n");
    CHECK(load_feature_csv(path).registry().names() == std::vector<std::string>{"b", "a"});
}

TEST_CASE("load_feature_csv errors name their position") {
    TempDir tmp;
    const auto path = tmp.path() / "bad.csv";

    write_file(path, "x1,x2,label\n1,2,a\n3,abc,b\n");
    try {
        load_feature_csv(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }

    write_file(path, "x1,x2,label\n1,2,a\n3,b\n");
    try {
        load_feature_csv(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }

    write_file(path, "");
    CHECK_THROWS_AS(load_feature_csv(path), DataError);
    write_file(path, "x1,label\n");
    CHECK_THROWS_AS(load_feature_csv(path), DataError);
    write_file(path, "x1,y\n1,a\n");
    CHECK_THROWS_AS(load_feature_csv(path), DataError);
    write_file(path, "x1,label\nnan,a\n");
    CHECK_THROWS_AS(load_feature_csv(path), DataError);
    CHECK_THROWS_AS(load_feature_csv(tmp.path() / "missing.csv"), DataError);
}

TEST_CASE("feature CSV round trip keeps every bit") {
    TempDir tmp;
    const Dataset ds = make_blobs(20, 99);
    write_feature_csv(ds, tmp.path() / "blobs.csv");
    const Dataset back = load_feature_csv(tmp.path() / "blobs.csv");
    CHECK(back.features() == ds.features());
    CHECK(back.labels() == ds.labels());
    CHECK(back.registry() == ds.registry());
}

TEST_CASE("load_feature_matrix_csv drops a trailing label column") {
    TempDir tmp;
    write_file(tmp.path() / "a.csv", "f0,f1,label\n1,2,x\n");
    write_file(tmp.path() / "b.csv", "f0,f1\n1,2\n3,4\n");
    CHECK(load_feature_matrix_csv(tmp.path() / "a.csv").cols() == 2);
    const auto b = load_feature_matrix_csv(tmp.path() / "b.csv");
    CHECK(b.rows() == 2);
    CHECK(b(1, 0) == 3.0);
}

TEST_CASE("Dataset rejects inconsistent construction") {
    CHECK_THROWS_AS(Dataset(Eigen::MatrixXd::Zero(2, 1), {0}, ClassRegistry({"a"})), DataError);
    CHECK_THROWS_AS(Dataset(Eigen::MatrixXd::Zero(1, 1), {1}, ClassRegistry({"a"})), DataError);
    Eigen::MatrixXd inf = Eigen::MatrixXd::Zero(1, 1);
    inf(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Dataset(inf, {0}, ClassRegistry({"a"})), DataError);
    CHECK_THROWS_AS(ClassRegistry({"a", "a"}), DataError);
    CHECK_THROWS_AS(ClassRegistry({""}), DataError);
}

TEST_CASE("balance_classes") {
    SUBCASE("already balanced keeps the multiset") {
        const Dataset ds = sized_classes({5, 5});
        const Dataset out = balance_classes(ds, 5, 1);
        CHECK(out.size() == 10);
        CHECK(values_of_class(out, 0) == values_of_class(ds, 0));
        CHECK(values_of_class(out, 1) == values_of_class(ds, 1));
    }
    SUBCASE("surplus is subsampled, deficit oversampled") {
        const Dataset ds = sized_classes({10, 2});
        const Dataset out = balance_classes(ds, 4, 1);
        CHECK(out.class_counts() == std::vector<std::size_t>{4, 4});
        const auto small = values_of_class(out, 1);
        CHECK(std::set<double>(small.begin(), small.end()).size() < small.size());
        const auto big = values_of_class(out, 0);
        CHECK(std::set<double>(big.begin(), big.end()).size() == 4);
    }
    SUBCASE("deterministic") {
        const Dataset ds = sized_classes({10, 2, 7});
        const Dataset a = balance_classes(ds, 6, 77);
        const Dataset b = balance_classes(ds, 6, 77);
        CHECK(a.features() == b.features());
        CHECK(a.labels() == b.labels());
    }
    SUBCASE("empty class is an error") {
        const Dataset ds(Eigen::MatrixXd::Zero(2, 1), {0, 0}, ClassRegistry({"a", "b"}));
        CHECK_THROWS_AS(balance_classes(ds, 2, 0), DataError);
    }
}

TEST_CASE("stratified_split") {
    SUBCASE("6000 balanced samples at 0.70/0.15/0.15 give a 900-sample test set") {
        const Dataset ds = make_blobs(2000, 5);
        SplitSpec spec;
        spec.seed = 3;
        const DatasetSplit s = stratified_split(ds, spec);
        CHECK(s.test.size() == 900);
        CHECK(s.test.class_counts() == std::vector<std::size_t>{300, 300, 300});
        CHECK(s.val.size() == 900);
        CHECK(s.train.size() == 4200);
    }
    SUBCASE("thirds on 3 samples per class") {
        const Dataset ds = sized_classes({3, 3});
        const SplitSpec spec{1.0 / 3, 1.0 / 3, 1.0 / 3, 8};
        const DatasetSplit s = stratified_split(ds, spec);
        CHECK(s.train.class_counts() == std::vector<std::size_t>{1, 1});
        CHECK(s.val.class_counts() == std::vector<std::size_t>{1, 1});
        CHECK(s.test.class_counts() == std::vector<std::size_t>{1, 1});
    }
    SUBCASE("same seed, same split") {
        const Dataset ds = sized_classes({20, 30});
        const SplitSpec spec{0.6, 0.2, 0.2, 9};
        const auto a = stratified_split_indices(ds.labels(), 2, spec);
        const auto b = stratified_split_indices(ds.labels(), 2, spec);
        CHECK(a.train == b.train);
        CHECK(a.val == b.val);
        CHECK(a.test == b.test);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(stratified_split(sized_classes({2, 5}), SplitSpec{}), DataError);
        // 5 * 0.15 floors to 0 validation samples.
        CHECK_THROWS_AS(stratified_split(sized_classes({5, 5}), SplitSpec{}), DataError);
    }
    SUBCASE("invalid fractions") {
        CHECK_THROWS_AS(SplitSpec({0.5, 0.3, 0.3, 0}).validate(), ConfigError);
        CHECK_THROWS_AS(SplitSpec({1.0, 0.0, 0.0, 0}).validate(), ConfigError);
    }
}

TEST_CASE("property: stratified_split is an exact per-class partition") {
    SplitMix64 gen(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + gen.uniform_index(4);
        std::vector<std::size_t> sizes;
        for (std::size_t c = 0; c < k; ++c) sizes.push_back(10 + gen.uniform_index(40));
        const Dataset ds = sized_classes(sizes);
        const SplitSpec spec{0.7, 0.15, 0.15, gen.next()};
        const auto idx = stratified_split_indices(ds.labels(), k, spec);
        std::vector<std::size_t> all = idx.train;
        all.insert(all.end(), idx.val.begin(), idx.val.end());
        all.insert(all.end(), idx.test.begin(), idx.test.end());
        std::sort(all.begin(), all.end());
        REQUIRE(all.size() == ds.size());
        for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
    }
}

TEST_CASE("bootstrap_sample") {
    const Dataset single = sized_classes({1});
    CHECK(bootstrap_sample(single, 4).features() == single.features());

    const Dataset ds = sized_classes({30, 20});
    const Dataset a = bootstrap_sample(ds, 12);
    const Dataset b = bootstrap_sample(ds, 12);
    CHECK(a.size() == ds.size());
    CHECK(a.features() == b.features());
    CHECK(a.registry() == ds.registry());
    CHECK(bootstrap_sample(ds, 13).features() != a.features());

    double mean_unique = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto idx = bootstrap_indices(10000, seed);
        mean_unique += static_cast<double>(std::set<std::size_t>(idx.begin(), idx.end()).size()) / 10000.0 / 20.0;
    }
    CHECK(std::abs(mean_unique - 0.632) <= 0.02);
}
