#include "rewardlab/csv.hpp"

namespace rewardlab {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

} // namespace

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    CsvFile csv;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV file: " + path);
    const std::string prefix = "# rewardlab-csv v1 ";
    if (line.rfind(prefix, 0) != 0)
        throw std::runtime_error("missing schema line in CSV file: " + path);
    csv.schema = line.substr(prefix.size());
    if (!std::getline(in, line)) throw std::runtime_error("missing CSV header: " + path);
    csv.header = split_commas(line);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        csv.rows.push_back(split_commas(line));
    }
    return csv;
}

} // namespace rewardlab
