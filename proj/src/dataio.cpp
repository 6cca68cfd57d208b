#include "agghoo/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "agghoo/rng.hpp"

namespace agghoo {

namespace {

constexpr int kUciAttributes = 9;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        fields.push_back(field);
    }
    return fields;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    if (m % 2 == 1) return values[m / 2];
    return (values[m / 2 - 1] + values[m / 2]) / 2.0;
}

}  // namespace

DataPtr load_breast_cancer(const std::string& path, MissingPolicy policy) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_breast_cancer: cannot open " + path);

    std::vector<std::vector<double>> rows;  // NaN marks a missing attribute
    std::vector<Label> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != kUciAttributes + 2)
            throw std::runtime_error("load_breast_cancer: malformed row at line " +
                                     std::to_string(line_no));
        std::vector<double> row(kUciAttributes);
        for (int a = 0; a < kUciAttributes; ++a) {
            const std::string& f = fields[a + 1];  // field 0 is the sample id
            if (f == "?") {
                row[a] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            int value = 0;
            const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (ec != std::errc() || p != f.data() + f.size())
                throw std::runtime_error("load_breast_cancer: malformed attribute at line " +
                                         std::to_string(line_no));
            row[a] = value;
        }
        const std::string& code = fields.back();
        Label y;
        if (code == "2") y = 0;
        else if (code == "4") y = 1;
        else throw std::runtime_error("load_breast_cancer: unknown label code at line " +
                                      std::to_string(line_no));
        rows.push_back(std::move(row));
        labels.push_back(y);
    }
    if (rows.empty()) throw std::runtime_error("load_breast_cancer: no rows in " + path);

    if (policy == MissingPolicy::DropRows) {
        std::vector<std::vector<double>> kept_rows;
        std::vector<Label> kept_labels;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const bool has_missing = std::any_of(rows[i].begin(), rows[i].end(),
                                                 [](double v) { return std::isnan(v); });
            if (!has_missing) {
                kept_rows.push_back(rows[i]);
                kept_labels.push_back(labels[i]);
            }
        }
        rows = std::move(kept_rows);
        labels = std::move(kept_labels);
        if (rows.empty()) throw std::runtime_error("load_breast_cancer: all rows dropped");
    } else {
        for (int a = 0; a < kUciAttributes; ++a) {
            std::vector<double> observed;
            for (const auto& row : rows)
                if (!std::isnan(row[a])) observed.push_back(row[a]);
            if (observed.empty())
                throw std::runtime_error("load_breast_cancer: attribute column entirely missing");
            const double med = median_of(std::move(observed));
            for (auto& row : rows)
                if (std::isnan(row[a])) row[a] = med;
        }
    }

    std::vector<double> features;
    features.reserve(rows.size() * kUciAttributes);
    for (const auto& row : rows) features.insert(features.end(), row.begin(), row.end());
    return std::make_shared<Dataset>(kUciAttributes, 2, std::move(features), std::move(labels));
}

std::pair<DataPtr, DataPtr> train_test_resplit(const Dataset& data, int train_n, std::uint64_t seed) {
    if (train_n < 1 || train_n >= data.size())
        throw std::invalid_argument("train_test_resplit: train_n out of range");
    Rng rng = Rng::stream(seed, 0);
    const IndexSet train = IndexSet::of(rng.sample_without_replacement(data.size(), train_n));
    return {subset(data, train), subset(data, train.complement(data.size()))};
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out.precision(17);
    for (int i = 0; i < data.size(); ++i) {
        const auto row = data.row(i);
        for (const double v : row) out << v << ',';
        out << data.label(i) << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

DataPtr read_csv(const std::string& path, int class_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::vector<double> features;
    std::vector<Label> labels;
    int dim = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() < 2)
            throw std::runtime_error("read_csv: malformed row at line " + std::to_string(line_no));
        const int row_dim = static_cast<int>(fields.size()) - 1;
        if (dim < 0) dim = row_dim;
        if (row_dim != dim)
            throw std::runtime_error("read_csv: inconsistent width at line " + std::to_string(line_no));
        for (int c = 0; c < dim; ++c) features.push_back(std::stod(fields[c]));
        labels.push_back(std::stoi(fields.back()));
    }
    if (labels.empty()) throw std::runtime_error("read_csv: no rows in " + path);
    return std::make_shared<Dataset>(dim, class_count, std::move(features), std::move(labels));
}

std::uint64_t file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_checksum: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return h;
}

}  // namespace agghoo
