#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bnvar {

/// Complete discrete dataset stored column-major as level indices.
struct CategoricalDataset {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> levels;   // per variable, ordered
    std::vector<std::vector<std::uint8_t>> columns; // per variable, n cells

    int variable_count() const { return static_cast<int>(names.size()); }
    long row_count() const { return columns.empty() ? 0 : static_cast<long>(columns.front().size()); }
    int level_count(int var) const { return static_cast<int>(levels[static_cast<size_t>(var)].size()); }

    void validate() const;
};

/// CSV reader: first row is variable names, cells are level labels.  Levels
/// are enumerated in first-appearance order unless a schema lists them; a
/// schema is a text file of `name=level1,level2,...` lines covering every
/// variable.
CategoricalDataset read_dataset_csv(std::istream& in);
CategoricalDataset read_dataset_csv(std::istream& in, std::istream& schema);
void write_dataset_csv(const CategoricalDataset& data, std::ostream& out);

/// Loads `path`; when `path`.schema exists next to it, it is applied.
CategoricalDataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const CategoricalDataset& data, const std::string& path);

} // namespace bnvar
