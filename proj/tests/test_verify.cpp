#include "doctest.h"
#include "epstein_kit/verify.hpp"

using namespace ek;

TEST_CASE("every invariant suite passes") {
    for (const auto& name : suite_names()) {
        const auto results = run_suite(name);
        CHECK_FALSE(results.empty());
        for (const auto& r : results) {
            INFO(r.suite << " " << r.lemma << " " << r.what << " value " << r.value << " " << r.note);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("suite lookup") {
    CHECK_THROWS_AS(run_suite("nope"), ConfigError);
    const auto table = verify_table(run_suite("tensor2"));
    CHECK(table.find("PASS") != std::string::npos);
    CHECK(table.find("FAIL") == std::string::npos);
}
