#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "random_data.hpp"
#include "sepselect/dataset.hpp"

using namespace sepselect;
namespace fs = std::filesystem;

namespace {

struct TempCsv {
    fs::path path;

    explicit TempCsv(const std::string& content) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("sepselect_test_" + std::to_string(counter++) + ".csv");
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::error_code ec; fs::remove(path, ec); }
};

Dataset tiny_dataset(std::vector<double> values, std::size_t n, std::size_t m,
                     std::vector<int> labels, int p) {
    std::vector<std::string> fnames, cnames;
    for (std::size_t j = 0; j < m; ++j) fnames.push_back("f" + std::to_string(j));
    for (int q = 0; q < p; ++q) cnames.push_back("c" + std::to_string(q));
    return Dataset(std::move(values), n, m, std::move(labels), fnames, cnames);
}

}  // namespace

TEST_CASE("load_csv parses a small labeled file") {
    TempCsv csv("f1,f2,y\n0,0,a\n2,2,a\n5,5,b\n");
    Dataset d = load_csv(csv.path.string(), "y");
    CHECK(d.n() == 3);
    CHECK(d.m() == 2);
    CHECK(d.p() == 2);
    CHECK(d.at(1, 0) == 2.0);
    CHECK(d.feature_names() == std::vector<std::string>{"f1", "f2"});
    CHECK(d.class_names() == std::vector<std::string>{"a", "b"});
    CHECK(d.label(2) == 1);
}

TEST_CASE("load_csv reports the offending cell") {
    TempCsv csv("f1,f2,y\n0,0,a\nabc,2,a\n5,5,b\n");
    try {
        load_csv(csv.path.string(), "y");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("f1") != std::string::npos);
        CHECK(msg.find("abc") != std::string::npos);
    }
}

TEST_CASE("load_csv error paths") {
    CHECK_THROWS_AS(load_csv("/nonexistent/nowhere.csv", "y"), std::runtime_error);

    TempCsv single("f1,y\n1,a\n2,a\n");
    CHECK_THROWS_WITH_AS(load_csv(single.path.string(), "y"),
                         doctest::Contains("only one class"), std::invalid_argument);

    TempCsv empty("");
    CHECK_THROWS_WITH_AS(load_csv(empty.path.string(), "y"), doctest::Contains("empty file"),
                         std::invalid_argument);

    TempCsv ok("f1,y\n1,a\n2,b\n");
    CHECK_THROWS_AS(load_csv(ok.path.string(), "nope"), std::invalid_argument);
}

TEST_CASE("load_csv label column by position, headerless file") {
    TempCsv csv("3,1,a\n4,2,b\n5,3,a\n");
    Dataset d = load_csv(csv.path.string(), "#2", /*has_header=*/false);
    CHECK(d.n() == 3);
    CHECK(d.m() == 2);
    CHECK(d.at(0, 0) == 3.0);
    CHECK(d.feature_names() == std::vector<std::string>{"f0", "f1"});
}

TEST_CASE("minmax_normalize rescales each column to [0,1]") {
    Dataset d = tiny_dataset({0, 3, 2, 5, 3, 4, 10, 3, 8}, 3, 3, {0, 0, 1}, 2);
    Dataset norm = minmax_normalize(d);

    CHECK(norm.at(0, 0) == 0.0);
    CHECK(norm.at(1, 0) == 0.5);
    CHECK(norm.at(2, 0) == 1.0);

    // constant column maps to zeros
    CHECK(norm.at(0, 1) == 0.0);
    CHECK(norm.at(1, 1) == 0.0);
    CHECK(norm.at(2, 1) == 0.0);

    CHECK(norm.at(0, 2) == 0.0);
    CHECK(norm.at(1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(norm.at(2, 2) == 1.0);
}

TEST_CASE("minmax_normalize is idempotent") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        auto raw = testdata::random_raw(rng);
        Dataset d = testdata::to_dataset(raw);
        Dataset once = minmax_normalize(d);
        Dataset twice = minmax_normalize(once);
        for (std::size_t i = 0; i < d.n(); ++i)
            for (std::size_t j = 0; j < d.m(); ++j)
                CHECK(once.at(i, j) == doctest::Approx(twice.at(i, j)).epsilon(1e-15));
    }
}

TEST_CASE("partition_by_class groups indices in canonical order") {
    TempCsv csv("f1,y\n1,b\n2,a\n3,b\n4,a\n");
    Dataset d = load_csv(csv.path.string(), "y");
    ClassPartition part = partition_by_class(d);
    REQUIRE(part.classes.size() == 2);
    CHECK(part.class_order == std::vector<std::string>{"a", "b"});
    CHECK(part.classes[0] == std::vector<int>{1, 3});
    CHECK(part.classes[1] == std::vector<int>{0, 2});

    std::size_t covered = 0;
    for (const auto& c : part.classes) covered += c.size();
    CHECK(covered == d.n());
}

TEST_CASE("partition_by_class at face-dataset shape: 15 classes of 11") {
    const std::size_t n = 165;
    std::vector<double> values(n, 0.0);
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = static_cast<double>(i);
        labels[i] = static_cast<int>(i % 15);
    }
    Dataset d = tiny_dataset(std::move(values), n, 1, std::move(labels), 15);
    auto part = partition_by_class(d);
    REQUIRE(part.classes.size() == 15);
    for (const auto& c : part.classes) CHECK(c.size() == 11);
}

TEST_CASE("stratified_folds keeps classes balanced and is deterministic") {
    // two classes of 5, five folds: exactly one instance of each class per fold
    std::vector<double> values(10, 0.0);
    for (std::size_t i = 0; i < 10; ++i) values[i] = static_cast<double>(i);
    Dataset d = tiny_dataset(std::move(values), 10, 1,
                             {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);

    FoldAssignment fa = stratified_folds(d, 5, 42);
    std::map<std::pair<int, int>, int> count;  // (fold, class) -> instances
    for (std::size_t i = 0; i < d.n(); ++i) count[{fa.fold_of[i], d.label(i)}] += 1;
    for (int f = 0; f < 5; ++f)
        for (int q = 0; q < 2; ++q) CHECK(count[{f, q}] == 1);

    FoldAssignment again = stratified_folds(d, 5, 42);
    CHECK(fa.fold_of == again.fold_of);

    FoldAssignment other = stratified_folds(d, 5, 43);
    CHECK(other.fold_of.size() == fa.fold_of.size());
}

TEST_CASE("stratified_folds splits 4+3 instances over 3 folds as {2,1,1} and {1,1,1}") {
    Dataset d = tiny_dataset({0, 1, 2, 3, 4, 5, 6}, 7, 1, {0, 0, 0, 0, 1, 1, 1}, 2);
    FoldAssignment fa = stratified_folds(d, 3, 7);

    std::vector<int> class0(3, 0), class1(3, 0);
    for (std::size_t i = 0; i < d.n(); ++i) {
        if (d.label(i) == 0)
            class0[fa.fold_of[i]] += 1;
        else
            class1[fa.fold_of[i]] += 1;
    }
    std::multiset<int> sizes0(class0.begin(), class0.end());
    std::multiset<int> sizes1(class1.begin(), class1.end());
    CHECK(sizes0 == std::multiset<int>{1, 1, 2});
    CHECK(sizes1 == std::multiset<int>{1, 1, 1});
}

TEST_CASE("stratified_folds per-class sizes differ by at most one") {
    std::mt19937_64 rng(123);
    for (int rep = 0; rep < 20; ++rep) {
        auto raw = testdata::random_raw(rng);
        Dataset d = testdata::to_dataset(raw);
        int folds = 2 + static_cast<int>(rng() % 5);
        if (static_cast<std::size_t>(folds) > d.n()) folds = static_cast<int>(d.n());
        FoldAssignment fa = stratified_folds(d, folds, rng());

        for (std::size_t q = 0; q < d.p(); ++q) {
            std::vector<int> per_fold(folds, 0);
            for (std::size_t i = 0; i < d.n(); ++i)
                if (d.label(i) == static_cast<int>(q)) per_fold[fa.fold_of[i]] += 1;
            auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
            CHECK(*hi - *lo <= 1);
        }
        // no fold is empty when folds <= n
        std::vector<int> fold_total(folds, 0);
        for (int f : fa.fold_of) fold_total[f] += 1;
        CHECK(*std::min_element(fold_total.begin(), fold_total.end()) >= 1);
    }
}

TEST_CASE("stratified_folds validates its inputs") {
    Dataset d = tiny_dataset({0, 1, 2}, 3, 1, {0, 0, 1}, 2);
    CHECK_THROWS_AS(stratified_folds(d, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(stratified_folds(d, 4, 0), std::invalid_argument);
}

TEST_CASE("dataset constructor enforces invariants") {
    CHECK_THROWS_AS(tiny_dataset({1}, 1, 1, {0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(tiny_dataset({1, 2}, 2, 1, {0, 0}, 2), std::invalid_argument);

    std::vector<double> bad = {1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(tiny_dataset(std::move(bad), 2, 1, {0, 1}, 2), std::invalid_argument);
}
