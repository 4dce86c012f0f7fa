#include "bnvar/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "bnvar/types.hpp"

namespace bnvar {

void CategoricalDataset::validate() const {
    if (names.size() != levels.size() || names.size() != columns.size())
        throw std::invalid_argument("dataset: field sizes disagree");
    const long n = row_count();
    if (n < 1) throw std::invalid_argument("dataset: no rows");
    for (size_t v = 0; v < columns.size(); ++v) {
        if (static_cast<long>(columns[v].size()) != n)
            throw std::invalid_argument("dataset: ragged columns");
        if (levels[v].empty())
            throw std::invalid_argument("dataset: variable without levels");
        for (std::uint8_t cell : columns[v])
            if (cell >= levels[v].size())
                throw std::invalid_argument("dataset: cell index out of range");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

CategoricalDataset read_csv_impl(std::istream& in,
                                 const std::map<std::string, std::vector<std::string>>* schema) {
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("dataset csv: empty input", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    CategoricalDataset data;
    data.names = split_csv_line(line);
    if (data.names.empty()) throw ParseError("dataset csv: no variables", 1);
    const size_t v = data.names.size();
    data.levels.resize(v);
    data.columns.resize(v);

    std::vector<std::map<std::string, std::uint8_t>> lookup(v);
    std::vector<bool> fixed(v, false);
    if (schema) {
        for (size_t i = 0; i < v; ++i) {
            auto it = schema->find(data.names[i]);
            if (it == schema->end())
                throw ParseError("dataset schema: missing variable '" + data.names[i] + "'");
            data.levels[i] = it->second;
            for (size_t l = 0; l < it->second.size(); ++l)
                lookup[i][it->second[l]] = static_cast<std::uint8_t>(l);
            fixed[i] = true;
        }
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != v)
            throw ParseError("dataset csv: wrong cell count", lineno);
        for (size_t i = 0; i < v; ++i) {
            auto it = lookup[i].find(cells[i]);
            if (it == lookup[i].end()) {
                if (fixed[i])
                    throw ParseError("dataset csv: level '" + cells[i] + "' not in schema of '" +
                                         data.names[i] + "'",
                                     lineno);
                if (data.levels[i].size() >= 255)
                    throw ParseError("dataset csv: too many levels for '" + data.names[i] + "'",
                                     lineno);
                std::uint8_t id = static_cast<std::uint8_t>(data.levels[i].size());
                data.levels[i].push_back(cells[i]);
                it = lookup[i].emplace(cells[i], id).first;
            }
            data.columns[i].push_back(it->second);
        }
    }
    data.validate();
    return data;
}

} // namespace

CategoricalDataset read_dataset_csv(std::istream& in) { return read_csv_impl(in, nullptr); }

CategoricalDataset read_dataset_csv(std::istream& in, std::istream& schema_in) {
    std::map<std::string, std::vector<std::string>> schema;
    std::string line;
    long lineno = 0;
    while (std::getline(schema_in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("dataset schema: expected 'name=level1,level2,...'", lineno);
        std::vector<std::string> lv = split_csv_line(line.substr(eq + 1));
        if (lv.empty()) throw ParseError("dataset schema: variable without levels", lineno);
        schema[line.substr(0, eq)] = lv;
    }
    return read_csv_impl(in, &schema);
}

void write_dataset_csv(const CategoricalDataset& data, std::ostream& out) {
    data.validate();
    for (size_t i = 0; i < data.names.size(); ++i) {
        if (i) out << ',';
        out << data.names[i];
    }
    out << '\n';
    const long n = data.row_count();
    for (long r = 0; r < n; ++r) {
        for (size_t i = 0; i < data.columns.size(); ++i) {
            if (i) out << ',';
            out << data.levels[i][data.columns[i][static_cast<size_t>(r)]];
        }
        out << '\n';
    }
}

CategoricalDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset '" + path + "'");
    const std::string schema_path = path + ".schema";
    if (std::filesystem::exists(schema_path)) {
        std::ifstream schema(schema_path);
        if (!schema) throw ParseError("cannot open dataset schema '" + schema_path + "'");
        return read_dataset_csv(in, schema);
    }
    return read_dataset_csv(in);
}

void save_dataset_csv(const CategoricalDataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset '" + path + "'");
    write_dataset_csv(data, out);
}

} // namespace bnvar
