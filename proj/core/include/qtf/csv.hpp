#ifndef QTF_CSV_HPP
#define QTF_CSV_HPP

#include <string>
#include <vector>

#include "qtf/types.hpp"

namespace qtf {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column; throws InputError when absent.
    std::size_t column(const std::string& name) const;
};

/// RFC-4180-style reader: quoted fields may contain commas, escaped
/// quotes ("") and newlines.
CsvTable read_csv(const std::string& path);

/// Writes numeric columns with enough digits to round-trip doubles;
/// non-finite values become empty fields.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Quotes a field when it contains a comma, quote, or newline.
std::string csv_quote(const std::string& field);

enum class MissingPolicy { mask, interpolate };

struct IngestResult {
    std::vector<double> time;
    std::vector<double> y;
    WeightMask mask;
};

/*
 * Reads a numeric series from a CSV file. Empty cells and NA/NaN markers
 * are missing values: under the mask policy they get weight 0 (and a
 * placeholder value of 0, which the solver provably ignores); under the
 * interpolate policy they are filled linearly from the nearest observed
 * neighbors and the mask stays full. Timestamps must be strictly
 * increasing. Unparseable cells raise InputError with line numbers.
 */
IngestResult ingest(const std::string& path, const std::string& time_column,
                    const std::string& value_column, MissingPolicy policy);

MissingPolicy missing_policy_from_name(const std::string& name);

}  // namespace qtf

#endif
