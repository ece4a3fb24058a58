// Emits the bundled synthetic panel and its companion files from a DGP
// preset. The committed copies under data/synthetic were produced by this
// tool; rerunning with the same preset and seed reproduces them byte for
// byte.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "regrowth/config.hpp"
#include "regrowth/csv.hpp"
#include "regrowth/dgp.hpp"
#include "regrowth/panel.hpp"

using namespace regrowth;

int main(int argc, char** argv) {
    CLI::App app{"generate the bundled synthetic data set"};
    std::string preset = "finland_like";
    std::uint64_t seed = 0;
    std::string out_dir = "data/synthetic";
    std::string preset_dir;
    app.add_option("--preset", preset, "DGP preset name");
    app.add_option("--seed", seed, "generation seed")->required();
    app.add_option("--out", out_dir, "target directory");
    app.add_option("--emit-presets", preset_dir, "also write the preset JSON files here");
    CLI11_PARSE(app, argc, argv);

    if (!preset_dir.empty()) {
        std::filesystem::create_directories(preset_dir);
        for (const char* name : {"finland_like", "minimal"}) {
            std::ofstream out(preset_dir + "/" + name + ".json");
            out << DGPConfig::preset(name, 1).to_json() << "\n";
        }
    }

    std::filesystem::create_directories(out_dir);
    const SyntheticWorld world = generate_panel(DGPConfig::preset(preset, seed));
    const auto path = [&](const std::string& name) { return out_dir + "/" + name; };

    write_panel_csv(path("panel.csv"), world.panel);
    write_national_csv(path("national_gdp_growth.csv"), world.national_gdp_growth_pct);
    write_national_csv(path("national_unemployment.csv"), world.national_unemp);
    write_national_csv(path("national_employment.csv"), world.national_empl);

    BfProgramData bf;
    bf.funds_total = world.bf_funds_total;
    bf.funds_disruptive = world.bf_funds_disruptive;
    write_bf_program_csv(path("bf_funds.csv"), bf);

    std::cout << "wrote " << out_dir << " (preset " << preset << ", seed " << seed << ")\n";
    return 0;
}
