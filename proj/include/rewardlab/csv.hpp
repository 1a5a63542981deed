#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rewardlab {

/// CSV files start with a schema comment "# rewardlab-csv v1 <name>" so
/// downstream parsers can reject files they do not understand.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema, const std::string& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot write CSV file: " + path);
        out_ << "# rewardlab-csv v1 " << schema << '\n' << header << '\n';
        out_.precision(17);
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << fields), ...);
        out_ << '\n';
    }

    void raw_line(const std::string& line) { out_ << line << '\n'; }

private:
    std::ofstream out_;
};

struct CsvFile {
    std::string schema;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a schema-tagged CSV back; used by tests and light tooling.
CsvFile read_csv(const std::string& path);

} // namespace rewardlab
