#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include <json.hpp>

#include "ensemblekit/archive.hpp"
#include "ensemblekit/data.hpp"
#include "ensemblekit/image.hpp"
#include "ensemblekit/synthetic.hpp"
#include "test_util.hpp"

#ifndef ENSEMBLEKIT_CLI_PATH
#error "ENSEMBLEKIT_CLI_PATH must point at the ensemblekit executable"
#endif

using namespace ensemblekit;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& tmp, const std::string& args) {
    const fs::path out = tmp.path() / "stdout.txt";
    const fs::path err = tmp.path() / "stderr.txt";
    const std::string cmd = std::string("\"") + ENSEMBLEKIT_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), read_file(out), read_file(err)};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("split writes stratified CSVs and a manifest, reproducibly") {
    TempDir tmp;
    const fs::path data = tmp.path() / "data.csv";
    write_feature_csv(make_blobs(2000, 1), data);

    const auto r = run_cli(tmp, "split --dataset " + q(data) + " --seed 42 --out " + q(tmp.path() / "a"));
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(read_file(tmp.path() / "a" / "manifest.json"));
    CHECK(manifest["totals"]["train"] == 4200);
    CHECK(manifest["totals"]["val"] == 900);
    CHECK(manifest["totals"]["test"] == 900);
    CHECK(manifest["counts"]["test"] == nlohmann::json::array({300, 300, 300}));
    CHECK(line_count(read_file(tmp.path() / "a" / "test.csv")) == 901);

    REQUIRE(run_cli(tmp, "split --dataset " + q(data) + " --seed 42 --out " + q(tmp.path() / "b")).code == 0);
    for (const char* f : {"train.csv", "val.csv", "test.csv", "manifest.json"})
        CHECK(read_file(tmp.path() / "a" / f) == read_file(tmp.path() / "b" / f));

    REQUIRE(run_cli(tmp, "split --dataset " + q(data) + " --seed 43 --out " + q(tmp.path() / "c")).code == 0);
    CHECK(read_file(tmp.path() / "a" / "test.csv") != read_file(tmp.path() / "c" / "test.csv"));
}

TEST_CASE("split rejects bad fractions before touching the output") {
    TempDir tmp;
    const fs::path data = tmp.path() / "data.csv";
    write_feature_csv(make_blobs(20, 1), data);
    const auto r = run_cli(tmp, "split --dataset " + q(data) + " --train-fraction 0.8 --seed 1 --out " + q(tmp.path() / "o"));
    CHECK(r.code == 2);
    CHECK(!fs::exists(tmp.path() / "o"));
    CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("exit codes for config and data errors") {
    TempDir tmp;
    CHECK(run_cli(tmp, "train --config " + q(tmp.path() / "none.json") + " --seed 1 --out " + q(tmp.path())).code == 2);
    CHECK(run_cli(tmp, "frobnicate").code == 2);
    CHECK(run_cli(tmp, "train --method voting --seed 1").code == 2);
    write_file(tmp.path() / "bad.csv", "f0,label\n1.0,a\nxyz,b\n");
    const auto r = run_cli(tmp, "train --train " + q(tmp.path() / "bad.csv") + " --seed 1 --out " + q(tmp.path() / "o"));
    CHECK(r.code == 3);
    CHECK(r.err.find("row") != std::string::npos);
}

TEST_CASE("train writes reproducible archives and logs") {
    TempDir tmp;
    const auto bench = make_blobs_benchmark(2024);
    const fs::path train = tmp.path() / "train.csv";
    write_feature_csv(bench.train, train);

    SUBCASE("bagging logs one row per member") {
        REQUIRE(run_cli(tmp, "train --method bagging --m 6 --train " + q(train) + " --seed 42 --out " + q(tmp.path() / "a")).code == 0);
        REQUIRE(run_cli(tmp, "train --method bagging --m 6 --train " + q(train) + " --seed 42 --out " + q(tmp.path() / "b")).code == 0);
        const std::string log = read_file(tmp.path() / "a" / "train_log.csv");
        CHECK(log.rfind("member,seed,unique_fraction,train_accuracy\n", 0) == 0);
        CHECK(line_count(log) == 7);
        CHECK(read_file(tmp.path() / "a" / "model.json") == read_file(tmp.path() / "b" / "model.json"));
        CHECK(log == read_file(tmp.path() / "b" / "train_log.csv"));
        const auto archive = load_archive(tmp.path() / "a" / "model.json");
        CHECK(archive.provenance.seed == 42);
        CHECK(std::get<BaggingModel>(archive.model).seeds.size() == 6);
    }
    SUBCASE("boosting rounds stay below chance") {
        REQUIRE(run_cli(tmp, "train --method boosting --T 10 --train " + q(train) + " --seed 42 --out " + q(tmp.path() / "a")).code == 0);
        const auto archive = load_archive(tmp.path() / "a" / "model.json");
        for (const auto& h : std::get<BoostModel>(archive.model).history) CHECK(h.eps < 2.0 / 3.0);
        CHECK(read_file(tmp.path() / "a" / "train_log.csv").rfind("round,eps,alpha\n", 0) == 0);
    }
    SUBCASE("stacking also writes meta-features") {
        REQUIRE(run_cli(tmp, "train --method stacking --folds 3 --train " + q(train) + " --seed 42 --out " + q(tmp.path() / "a")).code == 0);
        CHECK(line_count(read_file(tmp.path() / "a" / "meta_features.csv")) == 601);
    }
}

TEST_CASE("evaluate") {
    TempDir tmp;
    const fs::path train = tmp.path() / "train.csv";
    write_feature_csv(make_blobs(30, 3), train);
    write_file(tmp.path() / "sep.csv", "f0,label\n-5,a\n-4,a\n-3,a\n-2,a\n-1,a\n1,b\n2,b\n3,b\n4,b\n5,b\n");
    REQUIRE(run_cli(tmp, "train --method boosting --T 3 --train " + q(tmp.path() / "sep.csv") + " --seed 1 --out " + q(tmp.path() / "m")).code == 0);

    const auto ok = run_cli(tmp, "evaluate --archive " + q(tmp.path() / "m" / "model.json") + " --test " + q(tmp.path() / "sep.csv") +
                                     " --seed 1 --out " + q(tmp.path() / "e"));
    REQUIRE(ok.code == 0);
    const auto report = nlohmann::json::parse(read_file(tmp.path() / "e" / "report.json"));
    CHECK(report["accuracy"] == 1.0);
    for (const char* f : {"report.txt", "confusion_matrix.csv", "confusion_matrix.svg"}) CHECK(fs::exists(tmp.path() / "e" / f));
    CHECK(ok.out.find("accuracy") != std::string::npos);

    write_file(tmp.path() / "empty.csv", "f0,label\n");
    CHECK(run_cli(tmp, "evaluate --archive " + q(tmp.path() / "m" / "model.json") + " --test " + q(tmp.path() / "empty.csv") +
                           " --seed 1 --out " + q(tmp.path() / "e2")).code == 3);
    write_file(tmp.path() / "alien.csv", "f0,label\n1,z\n");
    CHECK(run_cli(tmp, "evaluate --archive " + q(tmp.path() / "m" / "model.json") + " --test " + q(tmp.path() / "alien.csv") +
                           " --seed 1 --out " + q(tmp.path() / "e3")).code == 3);
}

TEST_CASE("compare reports all three methods") {
    TempDir tmp;
    const auto bench = make_blobs_benchmark(5);
    write_feature_csv(bench.train, tmp.path() / "train.csv");
    write_feature_csv(bench.test, tmp.path() / "test.csv");
    write_file(tmp.path() / "cfg.json", R"({"train": "train.csv", "test": "test.csv", "boosting": {"T": 5},
        "stacking": {"folds": 3, "bases": [{"kind": "logreg", "epochs": 50}, {"kind": "stump"}]}})");
    const auto r = run_cli(tmp, "compare --config " + q(tmp.path() / "cfg.json") + " --seed 3 --out " + q(tmp.path() / "o"));
    REQUIRE(r.code == 0);
    const std::string csv = read_file(tmp.path() / "o" / "comparison.csv");
    CHECK(line_count(csv) == 4);
    for (const char* m : {"bagging", "boosting", "stacking"}) {
        CHECK(csv.find(std::string("\n") + m + ",") != std::string::npos);
        CHECK(fs::exists(tmp.path() / "o" / m / "report.json"));
        CHECK(fs::exists(tmp.path() / "o" / m / "model.json"));
    }
    CHECK(fs::exists(tmp.path() / "o" / "comparison.svg"));
}

TEST_CASE("compare on trivially separable data scores 1.0 everywhere") {
    TempDir tmp;
    std::string csv = "f0,label\n";
    for (int i = 0; i < 30; ++i) csv += std::to_string(-10 - i) + ",left\n" + std::to_string(10 + i) + ",right\n";
    write_file(tmp.path() / "sep.csv", csv);
    const auto r = run_cli(tmp, "compare --train " + q(tmp.path() / "sep.csv") + " --test " + q(tmp.path() / "sep.csv") +
                                    " --m 3 --T 3 --folds 3 --seed 2 --out " + q(tmp.path() / "o"));
    REQUIRE(r.code == 0);
    for (const char* m : {"bagging", "boosting", "stacking"})
        CHECK(nlohmann::json::parse(read_file(tmp.path() / "o" / m / "report.json"))["accuracy"] == 1.0);
}

TEST_CASE("predict") {
    TempDir tmp;
    write_file(tmp.path() / "sep.csv", "f0,f1,label\n-5,0,lo\n-4,1,lo\n-3,0,lo\n3,0,hi\n4,1,hi\n5,0,hi\n");
    REQUIRE(run_cli(tmp, "train --method boosting --T 2 --train " + q(tmp.path() / "sep.csv") + " --seed 1 --out " + q(tmp.path() / "m")).code == 0);
    const fs::path model = tmp.path() / "m" / "model.json";

    SUBCASE("training rows, label column ignored") {
        REQUIRE(run_cli(tmp, "predict --archive " + q(model) + " --input " + q(tmp.path() / "sep.csv") + " --seed 1 --out " + q(tmp.path() / "p")).code == 0);
        CHECK(read_file(tmp.path() / "p" / "predictions.csv") == "prediction\nlo\nlo\nlo\nhi\nhi\nhi\n");
    }
    SUBCASE("single row without labels") {
        write_file(tmp.path() / "one.csv", "f0,f1\n4.5,0\n");
        REQUIRE(run_cli(tmp, "predict --archive " + q(model) + " --input " + q(tmp.path() / "one.csv") + " --seed 1 --out " + q(tmp.path() / "p")).code == 0);
        CHECK(read_file(tmp.path() / "p" / "predictions.csv") == "prediction\nhi\n");
    }
    SUBCASE("column mismatch") {
        write_file(tmp.path() / "wide.csv", "f0,f1,f2\n1,2,3\n");
        const auto r = run_cli(tmp, "predict --archive " + q(model) + " --input " + q(tmp.path() / "wide.csv") + " --seed 1 --out " + q(tmp.path() / "p"));
        CHECK(r.code == 3);
        CHECK(r.err.find("model expects d=2 feature columns, input has 3") != std::string::npos);
    }
}

TEST_CASE("image directory pipeline") {
    TempDir tmp;
    const fs::path root = tmp.path() / "images";
    SplitMix64 rng(5);
    const char* classes[] = {"red", "blue"};
    for (int c = 0; c < 2; ++c) {
        fs::create_directories(root / classes[c]);
        for (int i = 0; i < 10; ++i) {
            Image img;
            img.width = 6;
            img.height = 4;
            img.pixels.resize(6 * 4 * 3);
            for (std::size_t p = 0; p < img.pixels.size(); ++p) {
                const bool dominant = static_cast<int>(p % 3) == (c == 0 ? 0 : 2);
                img.pixels[p] = static_cast<std::uint8_t>(dominant ? 180 + rng.uniform_index(70) : rng.uniform_index(60));
            }
            write_ppm(img, root / classes[c] / ("img" + std::to_string(i) + ".ppm"));
        }
    }
    const auto r = run_cli(tmp, "split --dataset " + q(root) + " --format images --seed 4 --out " + q(tmp.path() / "s"));
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(read_file(tmp.path() / "s" / "manifest.json"));
    CHECK(manifest["classes"] == nlohmann::json::array({"blue", "red"}));
    CHECK(manifest["totals"]["train"] == 42);
    CHECK(manifest["totals"]["test"] == 4);
    CHECK(read_file(tmp.path() / "s" / "train.csv").rfind("f0,", 0) == 0);

    REQUIRE(run_cli(tmp, "train --method bagging --m 3 --train " + q(tmp.path() / "s" / "train.csv") + " --seed 4 --out " + q(tmp.path() / "m")).code == 0);
    REQUIRE(run_cli(tmp, "evaluate --archive " + q(tmp.path() / "m" / "model.json") + " --test " + q(tmp.path() / "s" / "test.csv") +
                             " --seed 4 --out " + q(tmp.path() / "e")).code == 0);
    CHECK(nlohmann::json::parse(read_file(tmp.path() / "e" / "report.json"))["accuracy"] == 1.0);
}
