#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"
#include "regrowth/panel.hpp"

using namespace regrowth;

namespace {

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// 2 regions x 3 years hand-written fixture with one missing cell
const char* kSmallCsv =
    "region,year,gdp,bf\n"
    "north,2000,100,10\n"
    "north,2001,110,12\n"
    "north,2002,121,\n"
    "south,2000,200,20\n"
    "south,2001,210,22\n"
    "south,2002,220.5,24\n";

PanelDataset small_panel() {
    const std::string path = temp_file("regrowth_small_panel.csv");
    write_file(path, kSmallCsv);
    return load_panel_csv(path, {"gdp", "bf"});
}

} // namespace

TEST_CASE("load_panel_csv reads a hand-written grid exactly") {
    PanelDataset ds = small_panel();
    CHECK(ds.n_regions() == 2);
    CHECK(ds.n_years() == 3);
    CHECK(ds.first_year() == 2000);
    CHECK(ds.value("gdp", ds.region_index("north"), 0) == 100.0);
    CHECK(ds.value("gdp", ds.region_index("south"), 2) == 220.5);
    CHECK(ds.value("bf", ds.region_index("south"), 1) == 22.0);
    CHECK(!ds.cell("bf", ds.region_index("north"), 2).has_value());
}

TEST_CASE("loader rejects malformed panels with named errors") {
    SUBCASE("missing schema column") {
        const std::string path = temp_file("regrowth_missing_col.csv");
        write_file(path, "region,year,gdp\nnorth,2000,1\n");
        try {
            load_panel_csv(path, {"gdp", "bf"});
            FAIL("expected MissingColumn");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MissingColumn);
            CHECK(std::string(e.what()).find("bf") != std::string::npos);
        }
    }
    SUBCASE("unbalanced: one region missing a year") {
        const std::string path = temp_file("regrowth_unbalanced.csv");
        write_file(path,
                   "region,year,gdp\n"
                   "north,2000,1\nnorth,2001,2\nnorth,2002,3\n"
                   "south,2000,1\nsouth,2002,3\n");
        try {
            load_panel_csv(path, {"gdp"});
            FAIL("expected UnbalancedPanel");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnbalancedPanel);
            CHECK(std::string(e.what()).find("south") != std::string::npos);
            CHECK(std::string(e.what()).find("2001") != std::string::npos);
        }
    }
    SUBCASE("non-numeric cell names the offender") {
        const std::string path = temp_file("regrowth_nonnum.csv");
        write_file(path, "region,year,gdp\nnorth,2000,abc\n");
        try {
            load_panel_csv(path, {"gdp"});
            FAIL("expected NonNumericCell");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonNumericCell);
            CHECK(std::string(e.what()).find("north") != std::string::npos);
        }
    }
    SUBCASE("duplicate region-year row") {
        const std::string path = temp_file("regrowth_dup.csv");
        write_file(path, "region,year,gdp\nnorth,2000,1\nnorth,2000,2\n");
        try {
            load_panel_csv(path, {"gdp"});
            FAIL("expected DuplicateRow");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DuplicateRow);
        }
    }
}

TEST_CASE("transforms follow their definitions") {
    PanelDataset ds = small_panel();
    const int north = ds.region_index("north");

    SUBCASE("log_diff of gdp") {
        TransformTag tag;
        tag.kind = TransformTag::Kind::log_diff;
        PanelDataset out = ds.transform("gdp", tag);
        CHECK(!out.cell("dlog_gdp", north, 0).has_value());
        CHECK(out.value("dlog_gdp", north, 1) ==
              doctest::Approx(std::log(110.0) - std::log(100.0)).epsilon(1e-12));
        CHECK(out.value("dlog_gdp", north, 1) == doctest::Approx(0.0953101798).epsilon(1e-8));
        // source untouched
        CHECK(out.value("gdp", north, 1) == 110.0);
    }
    SUBCASE("lag(1) shifts and marks the lead missing") {
        TransformTag tag;
        tag.kind = TransformTag::Kind::lag;
        tag.lag_order = 1;
        PanelDataset out = ds.transform("gdp", tag);
        CHECK(!out.cell("lag1_gdp", north, 0).has_value());
        CHECK(out.value("lag1_gdp", north, 1) == 100.0);
        CHECK(out.value("lag1_gdp", north, 2) == 110.0);
    }
    SUBCASE("pct_change is arithmetic percent") {
        const std::string path = temp_file("regrowth_pct.csv");
        write_file(path, "region,year,bf\nn,2000,100\nn,2001,250\ns,2000,1\ns,2001,1\n");
        PanelDataset d2 = load_panel_csv(path, {"bf"});
        TransformTag tag;
        tag.kind = TransformTag::Kind::pct_change;
        PanelDataset out = d2.transform("bf", tag);
        CHECK(out.value("pct_bf", d2.region_index("n"), 1) ==
              doctest::Approx(150.0).epsilon(1e-14));
    }
    SUBCASE("log of a non-positive cell names the offender") {
        const std::string path = temp_file("regrowth_neg.csv");
        write_file(path, "region,year,x\nn,2000,5\nn,2001,-1\ns,2000,1\ns,2001,1\n");
        PanelDataset d2 = load_panel_csv(path, {"x"});
        TransformTag tag;
        tag.kind = TransformTag::Kind::log;
        try {
            d2.transform("x", tag);
            FAIL("expected NonPositiveForLog");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonPositiveForLog);
            CHECK(std::string(e.what()).find("2001") != std::string::npos);
        }
    }
    SUBCASE("unknown variable") {
        TransformTag tag;
        tag.kind = TransformTag::Kind::log;
        try {
            ds.transform("nope", tag);
            FAIL("expected UnknownVariable");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnknownVariable);
        }
    }
    SUBCASE("provenance records the composed chain") {
        TransformTag log_tag;
        log_tag.kind = TransformTag::Kind::log;
        TransformTag diff_tag;
        diff_tag.kind = TransformTag::Kind::diff;
        PanelDataset out = ds.transform("gdp", log_tag).transform("log_gdp", diff_tag);
        const auto& prov = out.series("diff_log_gdp").provenance;
        REQUIRE(prov.size() == 3);
        CHECK(prov[0].kind == TransformTag::Kind::raw);
        CHECK(prov[1].kind == TransformTag::Kind::log);
        CHECK(prov[2].kind == TransformTag::Kind::diff);
    }
}

TEST_CASE("summarize matches hand-computed moments") {
    const std::string path = temp_file("regrowth_sum.csv");
    write_file(path,
               "region,year,x\n"
               "a,2000,1\na,2001,2\na,2002,3\n"
               "b,2000,4\nb,2001,5\nb,2002,9\n");
    PanelDataset ds = load_panel_csv(path, {"x"});
    const auto rows = ds.summarize();
    REQUIRE(rows.size() == 1);
    // mean 4; squared deviations 9+4+1+0+1+25 = 40; sample var 8
    CHECK(rows[0].obs == 6);
    CHECK(rows[0].mean == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(rows[0].sd == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    CHECK(rows[0].min == 1.0);
    CHECK(rows[0].max == 9.0);
}

TEST_CASE("summarize of a constant series has zero sd") {
    const std::string path = temp_file("regrowth_const.csv");
    write_file(path, "region,year,c\na,2000,7\na,2001,7\nb,2000,7\nb,2001,7\n");
    PanelDataset ds = load_panel_csv(path, {"c"});
    const auto rows = ds.summarize();
    CHECK(rows[0].sd == 0.0);
    CHECK(rows[0].min == 7.0);
    CHECK(rows[0].max == 7.0);
}

TEST_CASE("missing cells stay out of the moments") {
    PanelDataset ds = small_panel();
    for (const auto& row : ds.summarize()) {
        if (row.variable == "bf") {
            CHECK(row.obs == 5);
            CHECK(row.mean == doctest::Approx((10 + 12 + 20 + 22 + 24) / 5.0));
        }
    }
}

TEST_CASE("write/load round trip reproduces the panel") {
    PanelDataset ds = small_panel();
    const std::string path = temp_file("regrowth_roundtrip.csv");
    write_panel_csv(path, ds);
    PanelDataset ds2 = load_panel_csv(path, {"gdp", "bf"});
    CHECK(ds2.n_regions() == ds.n_regions());
    CHECK(ds2.n_years() == ds.n_years());
    for (const auto& var : {"gdp", "bf"}) {
        for (int i = 0; i < ds.n_regions(); ++i) {
            for (int t = 0; t < ds.n_years(); ++t) {
                const auto a = ds.cell(var, i, t);
                const auto b = ds2.cell(var, i, t);
                CHECK(a.has_value() == b.has_value());
                if (a && b) CHECK(*a == *b);
            }
        }
    }
}

TEST_CASE("transform inverses reconstruct the source") {
    PanelDataset ds = small_panel();
    TransformTag log_tag;
    log_tag.kind = TransformTag::Kind::log;
    PanelDataset with_log = ds.transform("gdp", log_tag);

    SUBCASE("exp of log returns the source to 1e-12 relative") {
        for (int i = 0; i < ds.n_regions(); ++i) {
            for (int t = 0; t < ds.n_years(); ++t) {
                const double orig = ds.value("gdp", i, t);
                const double back = std::exp(with_log.value("log_gdp", i, t));
                CHECK(std::fabs(back - orig) / orig < 1e-12);
            }
        }
    }
    SUBCASE("diff then anchored cumulative sum returns the source to 1e-10") {
        TransformTag diff_tag;
        diff_tag.kind = TransformTag::Kind::diff;
        PanelDataset with_diff = ds.transform("gdp", diff_tag);
        for (int i = 0; i < ds.n_regions(); ++i) {
            double acc = ds.value("gdp", i, 0);
            for (int t = 1; t < ds.n_years(); ++t) {
                acc += with_diff.value("diff_gdp", i, t);
                CHECK(std::fabs(acc - ds.value("gdp", i, t)) < 1e-10);
            }
        }
    }
}

TEST_CASE("national series loader enforces contiguity") {
    const std::string path = temp_file("regrowth_nat.csv");
    write_file(path, "year,value\n2000,1.5\n2001,2.5\n2002,-1.0\n");
    NationalSeries s = load_national_csv(path);
    CHECK(s.first_year == 2000);
    CHECK(s.at(2002) == -1.0);
    CHECK(!s.covers(2003));
    CHECK_THROWS_AS(s.at(2003), Error);

    write_file(path, "year,value\n2000,1.5\n2002,2.5\n");
    CHECK_THROWS_AS(load_national_csv(path), Error);
}
