#include "sepselect/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace sepselect {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !cell.empty();
}

// splitmix64, used to derive independent stream seeds
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t r;
    do {
        r = gen();
    } while (r >= limit);
    return r % n;
}

}  // namespace

Dataset::Dataset(std::vector<double> values, std::size_t n, std::size_t m,
                 std::vector<int> label_ids, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names)
    : values_(std::move(values)),
      n_(n),
      m_(m),
      labels_(std::move(label_ids)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
    if (n_ < 2) throw std::invalid_argument("dataset needs at least 2 instances");
    if (m_ < 1) throw std::invalid_argument("dataset needs at least 1 feature");
    if (class_names_.size() < 2) throw std::invalid_argument("dataset needs at least 2 classes");
    if (values_.size() != n_ * m_) throw std::invalid_argument("value buffer does not match n*m");
    if (labels_.size() != n_) throw std::invalid_argument("one label per instance required");
    if (feature_names_.size() != m_)
        throw std::invalid_argument("one feature name per column required");

    std::vector<int> seen(class_names_.size(), 0);
    for (int l : labels_) {
        if (l < 0 || static_cast<std::size_t>(l) >= class_names_.size())
            throw std::invalid_argument("label id out of range");
        seen[static_cast<std::size_t>(l)] += 1;
    }
    for (std::size_t q = 0; q < seen.size(); ++q)
        if (seen[q] == 0)
            throw std::invalid_argument("class '" + class_names_[q] + "' has no instances");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
}

Dataset load_csv(const std::string& path, const std::string& label_column, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw std::invalid_argument("empty file: " + path);

    std::size_t first_data = has_header ? 1 : 0;
    if (lines.size() <= first_data) throw std::invalid_argument("no data rows in " + path);

    std::vector<std::string> header;
    std::size_t ncols = 0;
    if (has_header) {
        header = split_line(lines[0]);
        ncols = header.size();
    } else {
        ncols = split_line(lines[first_data]).size();
    }
    if (ncols < 2)
        throw std::invalid_argument("need at least one feature column and a label column");

    // resolve the label column: '#<idx>' selects by position, otherwise by header name
    std::size_t label_idx = 0;
    if (!label_column.empty() && label_column[0] == '#') {
        int idx = -1;
        const char* first = label_column.data() + 1;
        const char* last = label_column.data() + label_column.size();
        auto [ptr, ec] = std::from_chars(first, last, idx);
        if (ec != std::errc{} || ptr != last || idx < 0)
            throw std::invalid_argument("bad label column spec: " + label_column);
        if (static_cast<std::size_t>(idx) >= ncols)
            throw std::invalid_argument("label column index " + std::to_string(idx) +
                                        " out of range (file has " + std::to_string(ncols) +
                                        " columns)");
        label_idx = static_cast<std::size_t>(idx);
    } else {
        if (!has_header)
            throw std::invalid_argument(
                "label column by name requires a header row; use '#<index>' instead");
        auto it = std::find(header.begin(), header.end(), label_column);
        if (it == header.end())
            throw std::invalid_argument("label column '" + label_column + "' not found in header");
        label_idx = static_cast<std::size_t>(it - header.begin());
    }

    auto column_name = [&](std::size_t csv_col) {
        if (has_header) return header[csv_col];
        return "#" + std::to_string(csv_col);
    };

    std::size_t n = lines.size() - first_data;
    std::size_t m = ncols - 1;
    std::vector<double> values;
    values.reserve(n * m);
    std::vector<std::string> raw_labels;
    raw_labels.reserve(n);

    for (std::size_t r = 0; r < n; ++r) {
        auto cells = split_line(lines[first_data + r]);
        if (cells.size() != ncols)
            throw std::invalid_argument("row " + std::to_string(r + 1) + " has " +
                                        std::to_string(cells.size()) + " columns, expected " +
                                        std::to_string(ncols));
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == label_idx) {
                if (cells[c].empty())
                    throw std::invalid_argument("empty label at row " + std::to_string(r + 1));
                raw_labels.push_back(cells[c]);
                continue;
            }
            double v = 0.0;
            if (!parse_double(cells[c], v))
                throw std::invalid_argument("cell \"" + cells[c] + "\" at row " +
                                            std::to_string(r + 1) + ", column " + column_name(c) +
                                            " is not a number");
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite value at row " + std::to_string(r + 1) +
                                            ", column " + column_name(c));
            values.push_back(v);
        }
    }

    // canonical class order: lexicographic on the label text
    std::map<std::string, int> class_ids;
    for (const auto& l : raw_labels) class_ids.emplace(l, 0);
    if (class_ids.size() < 2)
        throw std::invalid_argument("only one class present in " + path);
    std::vector<std::string> class_names;
    class_names.reserve(class_ids.size());
    for (auto& [name, id] : class_ids) {
        id = static_cast<int>(class_names.size());
        class_names.push_back(name);
    }
    std::vector<int> label_ids;
    label_ids.reserve(n);
    for (const auto& l : raw_labels) label_ids.push_back(class_ids[l]);

    std::vector<std::string> feature_names;
    feature_names.reserve(m);
    for (std::size_t c = 0; c < ncols; ++c) {
        if (c == label_idx) continue;
        feature_names.push_back(has_header ? header[c]
                                           : "f" + std::to_string(feature_names.size()));
    }

    return Dataset(std::move(values), n, m, std::move(label_ids), std::move(feature_names),
                   std::move(class_names));
}

Dataset minmax_normalize(const Dataset& d) {
    std::size_t n = d.n(), m = d.m();
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = d.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            lo[j] = std::min(lo[j], row[j]);
            hi[j] = std::max(hi[j], row[j]);
        }
    }
    std::vector<double> values(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = d.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            double range = hi[j] - lo[j];
            values[i * m + j] = range > 0.0 ? (row[j] - lo[j]) / range : 0.0;
        }
    }
    return Dataset(std::move(values), n, m, d.labels(), d.feature_names(), d.class_names());
}

ClassPartition partition_by_class(const Dataset& d) {
    ClassPartition part;
    part.class_order = d.class_names();
    part.classes.assign(d.p(), {});
    for (std::size_t i = 0; i < d.n(); ++i)
        part.classes[static_cast<std::size_t>(d.label(i))].push_back(static_cast<int>(i));
    return part;
}

FoldAssignment stratified_folds(const Dataset& d, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("folds must be at least 2");
    if (static_cast<std::size_t>(folds) > d.n())
        throw std::invalid_argument("folds=" + std::to_string(folds) + " exceeds n=" +
                                    std::to_string(d.n()));

    FoldAssignment fa;
    fa.fold_of.assign(d.n(), -1);
    fa.folds = folds;
    fa.seed = seed;

    auto part = partition_by_class(d);
    // The dealing pointer carries over between classes so that no fold is
    // left empty when folds <= n.
    int next_fold = 0;
    for (std::size_t q = 0; q < part.classes.size(); ++q) {
        std::vector<int> idx = part.classes[q];
        std::mt19937_64 gen(mix64(seed ^ mix64(q + 1)));
        for (std::size_t i = idx.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(bounded_draw(gen, i));
            std::swap(idx[i - 1], idx[j]);
        }
        for (int instance : idx) {
            fa.fold_of[static_cast<std::size_t>(instance)] = next_fold;
            next_fold = (next_fold + 1) % folds;
        }
    }
    return fa;
}

}  // namespace sepselect
