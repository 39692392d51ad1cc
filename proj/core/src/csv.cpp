#include "qtf/csv.hpp"

#include "qtf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qtf {

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw InputError("column '" + name + "' not found");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    const std::size_t len = content.size();
    auto end_field = [&]() {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };
    while (i < len) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < len && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() || !record.empty()) {
                end_record();
            }
        } else if (c != '\r') {
            field += c;
        }
        ++i;
    }
    if (!field.empty() || !record.empty()) {
        end_record();
    }
    if (records.empty()) {
        throw InputError(path + ": empty file");
    }

    CsvTable table;
    table.header = records.front();
    table.rows.assign(records.begin() + 1, records.end());
    return table;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += "\"";
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.size() != header.size()) {
        throw DimensionError("write_csv: header/column count mismatch");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (j ? "," : "") << csv_quote(header[j]);
    }
    out << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (const auto& col : columns) {
        if (col.size() != rows) {
            throw DimensionError("write_csv: ragged columns");
        }
    }
    char buf[40];
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) {
                out << ',';
            }
            const double v = columns[j][i];
            if (std::isfinite(v)) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << buf;
            }
        }
        out << "\n";
    }
}

namespace {

bool is_missing_token(std::string s) {
    // trim
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "NAN" ||
        s == "null" || s == "NULL") {
        return true;
    }
    return false;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
            ++pos;
        }
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace

MissingPolicy missing_policy_from_name(const std::string& name) {
    if (name == "mask") return MissingPolicy::mask;
    if (name == "interpolate") return MissingPolicy::interpolate;
    throw InputError("unknown missing policy: " + name);
}

IngestResult ingest(const std::string& path, const std::string& time_column,
                    const std::string& value_column, MissingPolicy policy) {
    const CsvTable table = read_csv(path);
    const std::size_t t_col = table.column(time_column);
    const std::size_t v_col = table.column(value_column);

    IngestResult out;
    out.time.reserve(table.rows.size());
    out.y.reserve(table.rows.size());
    out.mask.weights.reserve(table.rows.size());
    std::vector<std::size_t> bad_lines;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = r + 2;  // header is line 1
        if (row.size() <= std::max(t_col, v_col)) {
            bad_lines.push_back(line);
            continue;
        }
        double t;
        if (!parse_double(row[t_col], t)) {
            bad_lines.push_back(line);
            continue;
        }
        double v = 0.0;
        bool missing = is_missing_token(row[v_col]);
        if (!missing && !parse_double(row[v_col], v)) {
            bad_lines.push_back(line);
            continue;
        }
        if (!missing && !std::isfinite(v)) {
            missing = true;
        }
        out.time.push_back(t);
        out.y.push_back(missing ? 0.0 : v);
        out.mask.weights.push_back(missing ? 0 : 1);
    }

    if (!bad_lines.empty()) {
        std::ostringstream msg;
        msg << path << ": unparseable rows at line";
        msg << (bad_lines.size() > 1 ? "s " : " ");
        for (std::size_t i = 0; i < bad_lines.size() && i < 10; ++i) {
            msg << (i ? ", " : "") << bad_lines[i];
        }
        if (bad_lines.size() > 10) {
            msg << ", ... (" << bad_lines.size() << " total)";
        }
        throw InputError(msg.str());
    }
    if (out.y.empty()) {
        throw InputError(path + ": no data rows");
    }
    for (std::size_t i = 1; i < out.time.size(); ++i) {
        if (!(out.time[i] > out.time[i - 1])) {
            throw InputError(path + ": timestamps not strictly increasing at row " +
                             std::to_string(i + 2));
        }
    }
    if (out.mask.count_ones() == 0) {
        throw InputError(path + ": all values missing");
    }

    if (policy == MissingPolicy::interpolate) {
        const std::size_t n = out.y.size();
        std::size_t prev_obs = n;  // sentinel
        for (std::size_t i = 0; i < n; ++i) {
            if (out.mask.weights[i]) {
                if (prev_obs == n && i > 0) {
                    // leading gap: extend the first observation backwards
                    for (std::size_t g = 0; g < i; ++g) {
                        out.y[g] = out.y[i];
                    }
                } else if (prev_obs != n && i > prev_obs + 1) {
                    const double y0 = out.y[prev_obs];
                    const double y1 = out.y[i];
                    const double t0 = out.time[prev_obs];
                    const double t1 = out.time[i];
                    for (std::size_t g = prev_obs + 1; g < i; ++g) {
                        const double w = (out.time[g] - t0) / (t1 - t0);
                        out.y[g] = y0 + w * (y1 - y0);
                    }
                }
                prev_obs = i;
            }
        }
        if (prev_obs != n) {
            for (std::size_t g = prev_obs + 1; g < n; ++g) {
                out.y[g] = out.y[prev_obs];
            }
        }
        out.mask = WeightMask::ones(n);
    }
    return out;
}

}  // namespace qtf
