#include "wachcoh/module_io.hpp"

#include <cstdio>
#include <fstream>

#include <algorithm>

#include "doctest.h"
#include "wachcoh/catalog.hpp"

using namespace wachcoh;

namespace {
OFRingPtr ring3(unsigned N = 8) { return OFRing::make(3, 1, N); }
}  // namespace

TEST_CASE("module files round-trip byte-identically") {
    auto r = ring3();
    for (const char* name : {"trivial", "tate_-1", "tate_1", "sum_tate1_tatem1"}) {
        WachModuleA m = catalog_module(name, r, 12);
        std::string bytes = canonical_dump(module_to_json(m));
        AnyModule back = module_from_json(ordered_json::parse(bytes));
        REQUIRE(std::holds_alternative<WachModuleA>(back));
        std::string bytes2 = canonical_dump(module_to_json(std::get<WachModuleA>(back)));
        CHECK(bytes == bytes2);
    }
    // ring S
    WachModuleS s = descend(catalog_module("tate_1", r, 24));
    std::string b1 = canonical_dump(module_to_json(s));
    AnyModule back = module_from_json(ordered_json::parse(b1));
    REQUIRE(std::holds_alternative<WachModuleS>(back));
    CHECK(b1 == canonical_dump(module_to_json(std::get<WachModuleS>(back))));
}

TEST_CASE("schema violations are reported with a path") {
    auto r = ring3();
    ordered_json j = module_to_json(catalog_module("trivial", r, 8));
    ordered_json bad = j;
    bad.erase("rank");
    CHECK_THROWS_AS(module_from_json(bad), schema_error);
    bad = j;
    bad["ring"] = "B";
    CHECK_THROWS_AS(module_from_json(bad), schema_error);
    bad = j;
    bad["phi_num"][0][0][2] = "xyz";
    CHECK_THROWS_WITH_AS(module_from_json(bad), doctest::Contains("phi_num[0][0]"), schema_error);
    bad = j;
    bad["chi_gamma"] = 5;
    CHECK_THROWS_AS(module_from_json(bad), schema_error);
    bad = j;
    bad["f"] = 2;
    CHECK_THROWS_AS(module_from_json(bad), schema_error);
}

TEST_CASE("save and load through the filesystem") {
    auto r = ring3();
    WachModuleA m = catalog_module("tate_1", r, 10);
    std::string path = "/tmp/wachcoh_io_test_module.json";
    save_module_file(path, m);
    AnyModule back = load_module_file(path);
    REQUIRE(std::holds_alternative<WachModuleA>(back));
    const WachModuleA& mm = std::get<WachModuleA>(back);
    CHECK(mm.rank == m.rank);
    CHECK(mm.h == m.h);
    CHECK(amat_equal(mm.phi_num, m.phi_num));
    CHECK(amat_equal(mm.g_gamma, m.g_gamma));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_module_file("/tmp/wachcoh_does_not_exist.json"), schema_error);
}

TEST_CASE("cocycle files") {
    auto r = ring3();
    WachModuleA t = trivial_module(r, 10);
    Cocycle c;
    c.x = t.zero_vec();
    c.y = {AFSeries::from_int(r, 1, 10)};
    ordered_json j = cocycle_to_json(3, 8, c);
    Cocycle back = cocycle_from_json(j, r, 10);
    CHECK(back.x.size() == 1);
    CHECK(back.y[0] == c.y[0]);
    ordered_json bad = j;
    bad.erase("y");
    CHECK_THROWS_AS(cocycle_from_json(bad, r, 10), schema_error);
}

TEST_CASE("catalog entries all construct and verify at desk precision") {
    auto r = ring3();
    for (const auto& e : catalog_list()) {
        WachModuleA m = catalog_module(e.name, r, 20);
        CHECK(verify(m).pass());
        CHECK(m.label == e.name);
    }
    CHECK_THROWS_AS(catalog_module("nope", r, 20), schema_error);
}

TEST_CASE("expected Galois metadata matches the computed reports") {
    auto r = ring3();
    for (const auto& e : catalog_list()) {
        WachModuleA m = catalog_module(e.name, r, 30);
        if (!m.expected) continue;
        INFO(e.name);
        FilteredPhiModule d = dcris(m, 2);
        if (m.expected->dcris_jumps) {
            std::vector<int> want = *m.expected->dcris_jumps;
            std::vector<int> got = d.jumps;
            std::sort(want.begin(), want.end());
            std::sort(got.begin(), got.end());
            CHECK(got == want);
        }
        BKReport bk = bk_cohomology(build_bk(d), 2);
        if (m.expected->h0_dim) CHECK(bk.h0_rank == *m.expected->h0_dim);
        if (m.expected->h1f_dim) CHECK(bk.h1_rank == *m.expected->h1f_dim);
    }
}

TEST_CASE("reports serialize deterministically") {
    auto r = ring3();
    WachModuleA m = catalog_module("trivial", r, 12);
    VerifyReport rep = verify(m);
    CHECK(canonical_dump(to_json(rep)) == canonical_dump(to_json(rep)));
    ordered_json j = to_json(rep);
    CHECK(j["pass"].get<bool>());
}
