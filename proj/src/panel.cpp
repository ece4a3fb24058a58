#include "regrowth/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"

namespace regrowth {

std::string TransformTag::describe() const {
    switch (kind) {
        case Kind::raw: return "raw(" + source + ")";
        case Kind::log: return "log(" + source + ")";
        case Kind::diff: return "diff(" + source + ")";
        case Kind::lag: return "lag" + std::to_string(lag_order) + "(" + source + ")";
        case Kind::pct_change: return "pct_change(" + source + ")";
        case Kind::log_diff: return "log_diff(" + source + ")";
    }
    return "?";
}

Series Series::constant(int n, int t, double v) {
    Series s;
    s.values = Eigen::MatrixXd::Constant(n, t, v);
    s.missing = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t, false);
    return s;
}

PanelDataset::PanelDataset(std::vector<std::string> regions, int first_year, int num_years)
    : regions_(std::move(regions)), first_year_(first_year), num_years_(num_years) {
    std::set<std::string> seen(regions_.begin(), regions_.end());
    if (seen.size() != regions_.size()) {
        fail(ErrorCode::DuplicateRow, "duplicate region identifiers");
    }
    if (num_years_ <= 0) fail(ErrorCode::UnbalancedPanel, "empty year range");
}

int PanelDataset::region_index(const std::string& name) const {
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        if (regions_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

int PanelDataset::year_index(int year) const {
    const int t = year - first_year_;
    return (t >= 0 && t < num_years_) ? t : -1;
}

bool PanelDataset::has_series(const std::string& name) const {
    return series_.count(name) != 0;
}

const Series& PanelDataset::series(const std::string& name) const {
    auto it = series_.find(name);
    if (it == series_.end()) fail(ErrorCode::UnknownVariable, name);
    return it->second;
}

std::vector<std::string> PanelDataset::series_names() const {
    std::vector<std::string> names;
    names.reserve(series_.size());
    for (const auto& kv : series_) names.push_back(kv.first);
    return names;
}

void PanelDataset::add_series(const std::string& name, Series s) {
    if (s.values.rows() != n_regions() || s.values.cols() != num_years_) {
        fail(ErrorCode::UnbalancedPanel,
             "series " + name + " is not " + std::to_string(n_regions()) + "x" +
                 std::to_string(num_years_));
    }
    for (int i = 0; i < s.values.rows(); ++i) {
        for (int t = 0; t < s.values.cols(); ++t) {
            if (!s.missing(i, t) && !std::isfinite(s.values(i, t))) {
                fail(ErrorCode::NonNumericCell,
                     "non-finite value in " + name + " at " + regions_[i] + "/" +
                         std::to_string(first_year_ + t));
            }
            if (s.missing(i, t)) s.values(i, t) = 0.0;
        }
    }
    series_[name] = std::move(s);
}

std::optional<double> PanelDataset::cell(const std::string& var, int region, int t) const {
    const Series& s = series(var);
    if (region < 0 || region >= n_regions() || t < 0 || t >= num_years_) {
        fail(ErrorCode::UnknownVariable,
             var + ": cell (" + std::to_string(region) + "," + std::to_string(t) +
                 ") out of range");
    }
    if (s.missing(region, t)) return std::nullopt;
    return s.values(region, t);
}

double PanelDataset::value(const std::string& var, int region, int t) const {
    auto v = cell(var, region, t);
    if (!v) {
        fail(ErrorCode::MissingRegressor,
             var + " missing at " + regions_[region] + "/" + std::to_string(first_year_ + t));
    }
    return *v;
}

std::string auto_transform_name(const std::string& var, const TransformTag& tag) {
    switch (tag.kind) {
        case TransformTag::Kind::raw: return var;
        case TransformTag::Kind::log: return "log_" + var;
        case TransformTag::Kind::diff: return "diff_" + var;
        case TransformTag::Kind::lag: return "lag" + std::to_string(tag.lag_order) + "_" + var;
        case TransformTag::Kind::pct_change: return "pct_" + var;
        case TransformTag::Kind::log_diff: return "dlog_" + var;
    }
    return var;
}

Series apply_transform(const PanelDataset& ds, const std::string& var,
                       const TransformTag& tag) {
    const Series& src = ds.series(var);
    const int n = ds.n_regions();
    const int t_len = ds.n_years();
    if (tag.kind == TransformTag::Kind::lag && tag.lag_order < 1) {
        fail(ErrorCode::UnknownVariable, "lag order must be >= 1");
    }

    Series out;
    out.values = Eigen::MatrixXd::Zero(n, t_len);
    out.missing = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t_len, true);
    out.provenance = src.provenance;
    TransformTag step = tag;
    step.source = var;
    out.provenance.push_back(step);

    auto check_positive = [&](int i, int t, double v) {
        if (v <= 0.0) {
            fail(ErrorCode::NonPositiveForLog,
                 var + " at " + ds.regions()[i] + "/" + std::to_string(ds.first_year() + t) +
                     " is " + std::to_string(v));
        }
    };

    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < t_len; ++t) {
            switch (tag.kind) {
                case TransformTag::Kind::raw: {
                    if (!src.missing(i, t)) {
                        out.values(i, t) = src.values(i, t);
                        out.missing(i, t) = false;
                    }
                    break;
                }
                case TransformTag::Kind::log: {
                    if (!src.missing(i, t)) {
                        check_positive(i, t, src.values(i, t));
                        out.values(i, t) = std::log(src.values(i, t));
                        out.missing(i, t) = false;
                    }
                    break;
                }
                case TransformTag::Kind::diff: {
                    if (t >= 1 && !src.missing(i, t) && !src.missing(i, t - 1)) {
                        out.values(i, t) = src.values(i, t) - src.values(i, t - 1);
                        out.missing(i, t) = false;
                    }
                    break;
                }
                case TransformTag::Kind::lag: {
                    const int p = tag.lag_order;
                    if (t >= p && !src.missing(i, t - p)) {
                        out.values(i, t) = src.values(i, t - p);
                        out.missing(i, t) = false;
                    }
                    break;
                }
                case TransformTag::Kind::pct_change: {
                    if (t >= 1 && !src.missing(i, t) && !src.missing(i, t - 1) &&
                        src.values(i, t - 1) != 0.0) {
                        out.values(i, t) =
                            100.0 * (src.values(i, t) - src.values(i, t - 1)) / src.values(i, t - 1);
                        out.missing(i, t) = false;
                    }
                    break;
                }
                case TransformTag::Kind::log_diff: {
                    if (t >= 1 && !src.missing(i, t) && !src.missing(i, t - 1)) {
                        check_positive(i, t, src.values(i, t));
                        check_positive(i, t - 1, src.values(i, t - 1));
                        out.values(i, t) = std::log(src.values(i, t)) - std::log(src.values(i, t - 1));
                        out.missing(i, t) = false;
                    }
                    break;
                }
            }
        }
    }
    return out;
}

PanelDataset PanelDataset::transform(const std::string& var, const TransformTag& tag,
                                     const std::string& out_name) const {
    Series derived = apply_transform(*this, var, tag);
    PanelDataset copy = *this;
    const std::string name = out_name.empty() ? auto_transform_name(var, tag) : out_name;
    copy.add_series(name, std::move(derived));
    return copy;
}

std::vector<SummaryRow> PanelDataset::summarize() const {
    std::vector<SummaryRow> rows;
    for (const auto& kv : series_) {
        SummaryRow r;
        r.variable = kv.first;
        double sum = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        std::vector<double> vals;
        for (int i = 0; i < kv.second.values.rows(); ++i) {
            for (int t = 0; t < kv.second.values.cols(); ++t) {
                if (kv.second.missing(i, t)) continue;
                const double v = kv.second.values(i, t);
                vals.push_back(v);
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        r.obs = static_cast<long>(vals.size());
        if (r.obs > 0) {
            r.mean = sum / static_cast<double>(r.obs);
            double ss = 0.0;
            for (double v : vals) ss += (v - r.mean) * (v - r.mean);
            r.sd = r.obs > 1 ? std::sqrt(ss / static_cast<double>(r.obs - 1)) : 0.0;
            r.min = lo;
            r.max = hi;
        }
        rows.push_back(r);
    }
    return rows;
}

PanelDataset load_panel_csv(const std::string& path, const std::vector<std::string>& schema) {
    const CsvTable table = read_csv(path);
    if (table.header.size() < 2 || table.header[0] != "region" || table.header[1] != "year") {
        fail(ErrorCode::MissingColumn, path + ": header must start with region,year");
    }
    for (const auto& want : schema) {
        if (table.column(want) < 0) {
            fail(ErrorCode::MissingColumn, path + ": " + want);
        }
    }
    const int n_vars = static_cast<int>(table.header.size()) - 2;

    struct RawRow {
        std::string region;
        int year;
        std::vector<std::optional<double>> cells;
    };
    std::vector<RawRow> raw;
    raw.reserve(table.rows.size());
    std::set<std::pair<std::string, int>> seen;
    std::set<std::string> region_set;
    std::set<int> year_set;

    for (const auto& cells : table.rows) {
        if (cells.size() != table.header.size()) {
            fail(ErrorCode::NonNumericCell,
                 path + ": row with " + std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(table.header.size()));
        }
        RawRow row;
        row.region = cells[0];
        double year_val = 0.0;
        if (!parse_numeric(cells[1], year_val) || year_val != std::floor(year_val)) {
            fail(ErrorCode::NonNumericCell, path + ": year '" + cells[1] + "' for region " + row.region);
        }
        row.year = static_cast<int>(year_val);
        if (!seen.insert({row.region, row.year}).second) {
            fail(ErrorCode::DuplicateRow, row.region + "/" + std::to_string(row.year));
        }
        for (int j = 0; j < n_vars; ++j) {
            const std::string& cell = cells[j + 2];
            if (cell.empty()) {
                row.cells.emplace_back(std::nullopt);
                continue;
            }
            double v = 0.0;
            if (!parse_numeric(cell, v) || !std::isfinite(v)) {
                fail(ErrorCode::NonNumericCell,
                     table.header[j + 2] + " at " + row.region + "/" + std::to_string(row.year) +
                         ": '" + cell + "'");
            }
            row.cells.emplace_back(v);
        }
        region_set.insert(row.region);
        year_set.insert(row.year);
        raw.push_back(std::move(row));
    }
    if (raw.empty()) fail(ErrorCode::UnbalancedPanel, path + ": no data rows");

    const int y0 = *year_set.begin();
    const int y1 = *year_set.rbegin();
    const int t_len = y1 - y0 + 1;
    for (int y = y0; y <= y1; ++y) {
        if (!year_set.count(y)) {
            fail(ErrorCode::UnbalancedPanel, path + ": year " + std::to_string(y) + " absent for all regions");
        }
    }

    std::vector<std::string> regions(region_set.begin(), region_set.end());
    PanelDataset ds(regions, y0, t_len);

    // balance check: every region must cover every year
    std::map<std::string, std::set<int>> years_by_region;
    for (const auto& row : raw) years_by_region[row.region].insert(row.year);
    for (const auto& r : regions) {
        for (int y = y0; y <= y1; ++y) {
            if (!years_by_region[r].count(y)) {
                fail(ErrorCode::UnbalancedPanel, r + " missing year " + std::to_string(y));
            }
        }
    }

    const int n = ds.n_regions();
    for (int j = 0; j < n_vars; ++j) {
        Series s;
        s.values = Eigen::MatrixXd::Zero(n, t_len);
        s.missing = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t_len, true);
        TransformTag tag;
        tag.kind = TransformTag::Kind::raw;
        tag.source = table.header[j + 2];
        s.provenance = {tag};
        for (const auto& row : raw) {
            const int i = ds.region_index(row.region);
            const int t = row.year - y0;
            if (row.cells[j]) {
                s.values(i, t) = *row.cells[j];
                s.missing(i, t) = false;
            }
        }
        ds.add_series(table.header[j + 2], std::move(s));
    }
    return ds;
}

void write_panel_csv(const std::string& path, const PanelDataset& ds, bool include_derived) {
    std::vector<std::string> vars;
    for (const auto& name : ds.series_names()) {
        const Series& s = ds.series(name);
        const bool raw = s.provenance.empty() ||
                         (s.provenance.size() == 1 &&
                          s.provenance[0].kind == TransformTag::Kind::raw);
        if (raw || include_derived) vars.push_back(name);
    }
    CsvTable table;
    table.header = {"region", "year"};
    table.header.insert(table.header.end(), vars.begin(), vars.end());
    for (int i = 0; i < ds.n_regions(); ++i) {
        for (int t = 0; t < ds.n_years(); ++t) {
            std::vector<std::string> row = {ds.regions()[i], std::to_string(ds.first_year() + t)};
            for (const auto& v : vars) {
                auto cell = ds.cell(v, i, t);
                row.push_back(cell ? format_numeric(*cell) : "");
            }
            table.rows.push_back(std::move(row));
        }
    }
    write_csv(path, table);
}

double NationalSeries::at(int year) const {
    if (!covers(year)) {
        fail(ErrorCode::MissingNationalValue, "year " + std::to_string(year));
    }
    return values[static_cast<std::size_t>(year - first_year)];
}

NationalSeries load_national_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header.size() != 2 || table.header[0] != "year") {
        fail(ErrorCode::MissingColumn, path + ": expected header year,<value>");
    }
    std::map<int, double> by_year;
    for (const auto& row : table.rows) {
        double y = 0.0, v = 0.0;
        if (!parse_numeric(row[0], y) || !parse_numeric(row[1], v) || !std::isfinite(v)) {
            fail(ErrorCode::NonNumericCell, path + ": " + row[0] + "," + row[1]);
        }
        if (!by_year.emplace(static_cast<int>(y), v).second) {
            fail(ErrorCode::DuplicateRow, path + ": year " + row[0]);
        }
    }
    if (by_year.empty()) fail(ErrorCode::IoError, path + ": no rows");
    NationalSeries s;
    s.first_year = by_year.begin()->first;
    int expect = s.first_year;
    for (const auto& kv : by_year) {
        if (kv.first != expect++) {
            fail(ErrorCode::UnbalancedPanel, path + ": years not contiguous at " + std::to_string(kv.first));
        }
        s.values.push_back(kv.second);
    }
    return s;
}

void write_national_csv(const std::string& path, const NationalSeries& s) {
    CsvTable table;
    table.header = {"year", "value"};
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        table.rows.push_back({std::to_string(s.first_year + static_cast<int>(k)),
                              format_numeric(s.values[k])});
    }
    write_csv(path, table);
}

} // namespace regrowth
