#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace regrowth {

// One step of a variable transformation. Transforms compose left-to-right;
// the composed chain is kept on the derived series as provenance.
struct TransformTag {
    enum class Kind { raw, log, diff, lag, pct_change, log_diff };

    Kind kind = Kind::raw;
    int lag_order = 1; // only for Kind::lag, p >= 1
    std::string source;

    std::string describe() const;
};

// A region x year grid of values with explicit per-cell missing markers.
// Missing cells hold 0.0 in `values`; the mask is authoritative.
struct Series {
    Eigen::MatrixXd values;                            // N x T
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> missing; // N x T
    std::vector<TransformTag> provenance;
    std::string unit;

    static Series constant(int n, int t, double v);
    bool is_missing(int region, int t) const { return missing(region, t); }
};

struct SummaryRow {
    std::string variable;
    long obs = 0;
    double mean = 0.0, sd = 0.0, min = 0.0, max = 0.0;
};

// Balanced panel: every region covers the full contiguous year range.
// Immutable after construction; transform() returns an extended copy.
class PanelDataset {
public:
    PanelDataset(std::vector<std::string> regions, int first_year, int num_years);

    int n_regions() const { return static_cast<int>(regions_.size()); }
    int n_years() const { return num_years_; }
    int first_year() const { return first_year_; }
    int last_year() const { return first_year_ + num_years_ - 1; }
    const std::vector<std::string>& regions() const { return regions_; }
    int region_index(const std::string& name) const; // -1 when absent
    int year_index(int year) const;                  // -1 when outside range

    bool has_series(const std::string& name) const;
    const Series& series(const std::string& name) const; // throws UnknownVariable
    std::vector<std::string> series_names() const;
    void add_series(const std::string& name, Series s); // construction only

    // Value accessors by (region index, year index).
    std::optional<double> cell(const std::string& var, int region, int t) const;
    double value(const std::string& var, int region, int t) const; // throws on missing

    // Returns a copy with the derived series added under `out_name`
    // (auto-named from the tag when empty). The source series is untouched.
    PanelDataset transform(const std::string& var, const TransformTag& tag,
                           const std::string& out_name = "") const;

    std::vector<SummaryRow> summarize() const;

private:
    std::vector<std::string> regions_;
    int first_year_;
    int num_years_;
    std::map<std::string, Series> series_;
};

// Derives a series without attaching it to a dataset.
Series apply_transform(const PanelDataset& ds, const std::string& var,
                       const TransformTag& tag);

std::string auto_transform_name(const std::string& var, const TransformTag& tag);

// CSV ingestion. Header must be `region,year,<var>...`; empty cell = missing.
// `schema` lists variables that must be present (extra columns are loaded too).
PanelDataset load_panel_csv(const std::string& path,
                            const std::vector<std::string>& schema);

// Writes `region,year,<var>...` with rows sorted by (region, year).
// Derived (non-raw) series are skipped unless include_derived is set.
void write_panel_csv(const std::string& path, const PanelDataset& ds,
                     bool include_derived = false);

// An economy-wide annual series (e.g., national GDP growth in percent).
// May extend beyond the panel's year range.
struct NationalSeries {
    int first_year = 0;
    std::vector<double> values;

    int last_year() const { return first_year + static_cast<int>(values.size()) - 1; }
    bool covers(int year) const { return year >= first_year && year <= last_year(); }
    double at(int year) const; // throws MissingNationalValue
};

NationalSeries load_national_csv(const std::string& path);
void write_national_csv(const std::string& path, const NationalSeries& s);

} // namespace regrowth
