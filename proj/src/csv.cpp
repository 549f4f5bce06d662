#include "locopath/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace locopath {

namespace {

// splits one CSV record; handles quoted fields with doubled quotes
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& s, std::size_t row, const std::string& col) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error("csv: non-numeric value '" + s + "' in column '" + col +
                                 "' at data row " + std::to_string(row));
    return v;
}

}  // namespace

Dataset ingest_csv_stream(std::istream& in, const std::string& response_name,
                          const std::string& label) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: " + label + " is empty");
    const std::vector<std::string> header = split_record(line);

    Eigen::Index response_col = -1;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == response_name) {
            if (response_col >= 0)
                throw std::runtime_error("csv: duplicate response column '" + response_name + "'");
            response_col = static_cast<Eigen::Index>(c);
        } else {
            names.push_back(header[c]);
        }
    }
    if (response_col < 0)
        throw std::runtime_error("csv: response column '" + response_name + "' not found");
    const std::size_t p = header.size() - 1;
    if (p == 0) throw std::runtime_error("csv: no covariate columns");

    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        ++row;
        const std::vector<std::string> fields = split_record(line);
        if (fields.size() != header.size())
            throw std::runtime_error("csv: expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(fields.size()) +
                                     " at data row " + std::to_string(row));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const double v = parse_cell(fields[c], row, header[c]);
            if (static_cast<Eigen::Index>(c) == response_col) {
                ys.push_back(v);
            } else {
                xs.push_back(v);
            }
        }
    }
    if (row < 2) throw std::runtime_error("csv: need at least 2 data rows, got " + std::to_string(row));

    Dataset data;
    data.X.resize(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(p));
    data.y.resize(static_cast<Eigen::Index>(row));
    for (std::size_t i = 0; i < row; ++i) {
        data.y[static_cast<Eigen::Index>(i)] = ys[i];
        for (std::size_t c = 0; c < p; ++c)
            data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = xs[i * p + c];
    }
    data.names = names;
    validate(data);
    return data;
}

Dataset ingest_csv(const std::string& path, const std::string& response_name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    return ingest_csv_stream(in, response_name, path);
}

void write_csv(std::ostream& out, const Dataset& data, const std::string& response_name) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const std::string& name =
            data.names.empty() ? default_names(data.p())[static_cast<std::size_t>(j)]
                               : data.names[static_cast<std::size_t>(j)];
        out << name << ',';
    }
    out << response_name << '\n';
    std::ostringstream cell;
    cell.precision(17);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.p(); ++j) {
            cell.str("");
            cell << data.X(i, j);
            out << cell.str() << ',';
        }
        cell.str("");
        cell << data.y[i];
        out << cell.str() << '\n';
    }
}

}  // namespace locopath
