#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "regrowth/commands.hpp"
#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"

using namespace regrowth;
namespace fs = std::filesystem;

namespace {

const std::string kSourceDir = REGROWTH_SOURCE_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// run configuration pointing at the bundled synthetic data set
std::string write_config(const std::string& dir, bool with_longrun = true) {
    fs::create_directories(dir);
    const std::string data = kSourceDir + "/data/synthetic";
    std::ostringstream j;
    j << "{\n"
      << "  \"schema_version\": 1,\n"
      << "  \"data\": {\n"
      << "    \"panel_csv\": \"" << data << "/panel.csv\",\n"
      << "    \"national\": {\n"
      << "      \"gdp_growth\": \"" << data << "/national_gdp_growth.csv\",\n"
      << "      \"unemployment\": \"" << data << "/national_unemployment.csv\",\n"
      << "      \"employment\": \"" << data << "/national_employment.csv\"\n"
      << "    },\n"
      << "    \"bf_program_csv\": \"" << data << "/bf_funds.csv\",\n"
      << "    \"pedroni_table_csv\": \"" << kSourceDir << "/data/pedroni_adjustments.csv\"\n"
      << "  },\n";
    if (with_longrun) {
        j << "  \"longrun\": { \"regressors\": [\"gfcf\", \"highedu\", \"unemp\", "
             "\"patstock\", \"rd_per_bus\", \"rd_per_pub\"] },\n";
    }
    j << "  \"growth\": { \"columns\": [1, 2, 3, 4, 5, 6], \"active_column\": 5 },\n"
      << "  \"scenarios\": {\n"
      << "    \"baseline\": { \"returns_discount_r\": 1.0, \"rebound_discount_c\": 1.0, "
         "\"national_final_year_pct\": 1.8 },\n"
      << "    \"conservative\": { \"returns_discount_r\": 0.7, \"rebound_discount_c\": 0.5, "
         "\"national_final_year_pct\": 1.8 }\n"
      << "  },\n"
      << "  \"r_grid\": [0.8, 0.7, 0.6],\n"
      << "  \"output_dir\": \"" << dir << "/out\",\n"
      << "  \"seed\": 42\n"
      << "}\n";
    const std::string path = dir + "/run.json";
    std::ofstream out(path);
    out << j.str();
    return path;
}

} // namespace

TEST_CASE("estimate writes the full table set and is byte-stable") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_est").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    REQUIRE(cmd_estimate(cfg) == 0);

    for (const char* name : {"table3.csv", "table4.csv", "longrun.csv", "stability.csv",
                             "cointegration.csv", "artifacts.json"}) {
        CHECK(fs::exists(dir + "/out/" + std::string(name)));
    }
    const CsvTable t3 = read_csv(dir + "/out/table3.csv");
    CHECK(t3.header.size() == 7); // metric + six columns
    bool has_wald = false, has_rmse = false, has_obs = false;
    for (const auto& row : t3.rows) {
        if (row[0] == "wald_equal_lambda_stat") has_wald = true;
        if (row[0] == "relative_rmse") has_rmse = true;
        if (row[0] == "obs") {
            has_obs = true;
            CHECK(row[1] == "378");
            CHECK(row[6] == "198");
        }
    }
    CHECK(has_wald);
    CHECK(has_rmse);
    CHECK(has_obs);

    const std::string first = slurp(dir + "/out/table3.csv");
    REQUIRE(cmd_estimate(cfg) == 0);
    CHECK(slurp(dir + "/out/table3.csv") == first);
}

TEST_CASE("estimate without a long-run block skips the ec columns") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_noec").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir, false));
    REQUIRE(cmd_estimate(cfg) == 0);
    const CsvTable t3 = read_csv(dir + "/out/table3.csv");
    CHECK(t3.header.size() == 4); // metric + columns (1)-(3)
    CHECK(!fs::exists(dir + "/out/longrun.csv"));
}

TEST_CASE("forecast requires estimation artifacts") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_noart").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    try {
        cmd_forecast(cfg, "baseline");
        FAIL("expected MissingEstimationArtifacts");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingEstimationArtifacts);
    }
}

TEST_CASE("decompose requires forecast artifacts") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_nofc").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    REQUIRE(cmd_estimate(cfg) == 0);
    try {
        cmd_decompose(cfg, "baseline");
        FAIL("expected MissingEstimationArtifacts");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingEstimationArtifacts);
    }
}

TEST_CASE("the full pipeline produces scenario outputs and the report") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_full").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    REQUIRE(cmd_estimate(cfg) == 0);
    REQUIRE(cmd_forecast(cfg, "baseline") == 0);
    REQUIRE(cmd_forecast(cfg, "conservative") == 0);
    REQUIRE(cmd_decompose(cfg, "baseline") == 0);
    REQUIRE(cmd_decompose(cfg, "conservative") == 0);
    REQUIRE(cmd_report(cfg) == 0);

    const std::string out = dir + "/out";
    for (const char* name :
         {"forecast_baseline.csv", "band_baseline.csv", "forecast_baseline.json",
          "region_paths.csv", "decomposition_baseline.csv",
          "decomposition_conservative.csv", "decomposition_baseline_r0p8.csv",
          "decomposition_baseline_r0p7.csv", "decomposition_baseline_r0p6.csv",
          "table5.csv", "table5_regions.csv"}) {
        CHECK(fs::exists(out + "/" + std::string(name)));
    }

    // the forecast consumed the scenario national assumptions
    const CsvTable band = read_csv(out + "/band_baseline.csv");
    bool saw_2021 = false;
    for (const auto& row : band.rows) {
        if (row[0] == "2021" && row[1] == "forecast") saw_2021 = true;
    }
    CHECK(saw_2021);

    const CsvTable t5 = read_csv(out + "/table5.csv");
    REQUIRE(t5.rows.size() == 4);
    CHECK(t5.rows[0][0] == "mean");
    CHECK(t5.rows[1][0] == "sd");
    CHECK(t5.rows[2][0] == "min");
    CHECK(t5.rows[3][0] == "max");
    CHECK(t5.header.size() == 5); // statistic, two shares, two scenarios
}

TEST_CASE("ingest summarizes the catalog") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_ing").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    REQUIRE(cmd_ingest(cfg) == 0);
    const CsvTable summary = read_csv(dir + "/out/summary.csv");
    CHECK(summary.rows.size() == 14); // 13 catalog variables + derived growth
    bool saw_dgdp = false;
    for (const auto& row : summary.rows) {
        if (row[0] == "dgdp") {
            saw_dgdp = true;
            CHECK(row[1] == "414"); // growth is undefined in the first year
        }
    }
    CHECK(saw_dgdp);
    CHECK(fs::exists(dir + "/out/panel_normalized.csv"));
}

TEST_CASE("simulate with zero replications is a dry run") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_dry").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    cfg.mc_replications = 0;
    REQUIRE(cmd_simulate(cfg) == 0);
    CHECK(!fs::exists(dir + "/out/mc_results.csv"));

    cfg.mc_replications = 4;
    REQUIRE(cmd_simulate(cfg) == 0);
    const CsvTable mc = read_csv(dir + "/out/mc_results.csv");
    CHECK(mc.rows.size() == 4);
    CHECK(fs::exists(dir + "/out/mc_summary.csv"));
}

TEST_CASE("config validation reports bad fields") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_bad").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream out(dir + "/bad.json");
    out << "{ \"schema_version\": 1, \"data\": { \"panel_csv\": \"/nonexistent.csv\" } }";
    out.close();
    RunConfig cfg = RunConfig::from_file(dir + "/bad.json");
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }

    RunConfig cfg2 = RunConfig::from_file(write_config(dir));
    cfg2.scenarios[0].returns_discount_r = 1.7;
    CHECK_THROWS_AS(cfg2.validate(), Error);
}

TEST_CASE("the output lock guards against concurrent writers") {
    const std::string dir = (fs::temp_directory_path() / "regrowth_cli_lock").string();
    fs::remove_all(dir);
    RunConfig cfg = RunConfig::from_file(write_config(dir));
    fs::create_directories(cfg.output_dir);
    std::ofstream lock(cfg.output_dir + "/.lock");
    lock << "held\n";
    lock.close();
    CHECK_THROWS_AS(cmd_estimate(cfg), Error);
    fs::remove(cfg.output_dir + "/.lock");
}
