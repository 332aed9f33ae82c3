#pragma once

#include <string>
#include <vector>

#include "tailrisk/harness.hpp"

namespace tailrisk {

/// One numeric loss per line; a single leading header line is auto-detected
/// and skipped. Throws ParseError with the offending line number.
std::vector<double> ingest_plain(const std::string& path);

struct FactorPanel {
    std::vector<std::string> dates;
    std::vector<std::vector<double>> rows;  // one row per date, d columns
    long dropped_rows = 0;                  // rows removed for missing-value sentinels
    std::size_t columns = 0;
};

/// Daily industry-portfolio panel: date column plus `columns` numeric
/// fields in percent units. Rows containing the sentinels -99.99 or -999
/// are dropped (counted). With negate_returns, losses are minus returns.
FactorPanel ingest_fama_french(const std::string& path, std::size_t columns = 48, bool negate_returns = true);

/// Fixed-format numeric rendering: 12 significant digits, C locale.
std::string format_double(double v);

std::string results_csv(const std::vector<ResultRow>& rows);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace tailrisk
