#ifndef LSTS_CSV_HPP
#define LSTS_CSV_HPP

#include <string>
#include <vector>

namespace lsts {

/// Comma-delimited table with a header row. Fields are bare (no quoting);
/// surrounding whitespace is trimmed.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by header name; -1 if absent.
    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in, const std::string& origin);

} // namespace lsts

#endif
