#pragma once

#include <string>
#include <vector>

namespace regrowth {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

// Reads a comma-separated file. Cells are kept verbatim (no quoting rules;
// the toolkit's formats never embed commas). Handles trailing \r and skips
// lines starting with '#'.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);

// All numeric CSV output uses 12 significant digits so reruns diff cleanly.
std::string format_numeric(double v);

// Parses a decimal cell; returns false on any non-numeric content.
bool parse_numeric(const std::string& cell, double& out);

} // namespace regrowth
