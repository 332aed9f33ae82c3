#include "tailrisk/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tailrisk/errors.hpp"

namespace tailrisk {

namespace {

bool parse_number(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

bool looks_like_date(const std::string& tok) {
    if (tok.size() < 6 || tok.size() > 10) return false;
    for (const char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '/') return false;
    return true;
}

}  // namespace

std::vector<double> ingest_plain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path, 0);
    std::vector<double> out;
    std::string line;
    long lineno = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        double v;
        if (!parse_number(fields[0], v) || fields.size() != 1) {
            if (first_content_line) {  // header
                first_content_line = false;
                continue;
            }
            throw ParseError("expected one numeric loss per line", lineno);
        }
        first_content_line = false;
        out.push_back(v);
    }
    if (out.empty()) throw EmptyData("no losses found in " + path);
    return out;
}

FactorPanel ingest_fama_french(const std::string& path, std::size_t columns, bool negate_returns) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path, 0);
    FactorPanel panel;
    panel.columns = columns;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (!looks_like_date(fields[0])) continue;  // preamble / section headers
        if (fields.size() != columns + 1)
            throw ParseError("expected date plus " + std::to_string(columns) + " numeric columns", lineno);
        std::vector<double> row;
        row.reserve(columns);
        bool missing = false;
        for (std::size_t j = 1; j <= columns; ++j) {
            double v;
            if (!parse_number(fields[j], v)) throw ParseError("non-numeric field '" + fields[j] + "'", lineno);
            if (v == -99.99 || v == -999.0) missing = true;
            row.push_back(negate_returns ? -v : v);
        }
        if (missing) {
            ++panel.dropped_rows;
            continue;
        }
        panel.dates.push_back(fields[0]);
        panel.rows.push_back(std::move(row));
    }
    if (panel.rows.empty()) throw EmptyData("no usable rows found in " + path);
    return panel;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << "method,beta,rep,value,status\n";
    for (const auto& r : rows)
        os << r.method << ',' << format_double(r.beta) << ',' << r.rep << ',' << format_double(r.value) << ','
           << r.status << '\n';
    return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << contents;
}

}  // namespace tailrisk
