#include "agghoo/core.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace agghoo {

Dataset::Dataset(int dim, int class_count, std::vector<double> features, std::vector<Label> labels)
    : dim_(dim), class_count_(class_count), features_(std::move(features)), labels_(std::move(labels)) {
    if (dim_ < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
    if (class_count_ < 2) throw std::invalid_argument("Dataset: class_count must be >= 2");
    if (labels_.empty()) throw std::invalid_argument("Dataset: needs at least one row");
    if (features_.size() != labels_.size() * static_cast<std::size_t>(dim_))
        throw std::invalid_argument("Dataset: features/labels size mismatch");
    for (const Label y : labels_)
        if (y < 0 || y >= class_count_)
            throw std::invalid_argument("Dataset: label out of range");
}

std::uint64_t Dataset::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_bytes = [&h](const void* p, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    mix_bytes(&dim_, sizeof dim_);
    mix_bytes(&class_count_, sizeof class_count_);
    mix_bytes(features_.data(), features_.size() * sizeof(double));
    mix_bytes(labels_.data(), labels_.size() * sizeof(Label));
    return h;
}

IndexSet IndexSet::of(std::vector<int> indices) {
    if (indices.empty()) throw std::invalid_argument("IndexSet: must be non-empty");
    std::sort(indices.begin(), indices.end());
    if (indices.front() < 0) throw std::invalid_argument("IndexSet: negative index");
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("IndexSet: duplicate index");
    IndexSet s;
    s.indices_ = std::move(indices);
    return s;
}

IndexSet IndexSet::all(int n) {
    if (n < 1) throw std::invalid_argument("IndexSet::all: n must be >= 1");
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    IndexSet s;
    s.indices_ = std::move(v);
    return s;
}

bool IndexSet::contains(int i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexSet IndexSet::complement(int n) const {
    if (!valid_for(n)) throw std::invalid_argument("IndexSet::complement: index >= n");
    std::vector<int> out;
    out.reserve(n - size());
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i) {
        if (pos < indices_.size() && indices_[pos] == i) {
            ++pos;
        } else {
            out.push_back(i);
        }
    }
    if (out.empty()) throw std::invalid_argument("IndexSet::complement: empty complement");
    IndexSet s;
    s.indices_ = std::move(out);
    return s;
}

DataPtr subset(const Dataset& data, const IndexSet& rows) {
    if (!rows.valid_for(data.size())) throw std::invalid_argument("subset: index out of range");
    const int d = data.dim();
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(rows.size()) * d);
    std::vector<Label> y;
    y.reserve(rows.size());
    for (const int i : rows.indices()) {
        const auto r = data.row(i);
        f.insert(f.end(), r.begin(), r.end());
        y.push_back(data.label(i));
    }
    return std::make_shared<Dataset>(d, data.class_count(), std::move(f), std::move(y));
}

double empirical_risk(const Classifier& f, const Dataset& data, const IndexSet& b) {
    if (b.empty()) throw std::invalid_argument("empirical_risk: empty evaluation set");
    if (!b.valid_for(data.size())) throw std::invalid_argument("empirical_risk: index out of range");
    long errors = 0;
    for (const int i : b.indices())
        if (f.predict(data.row(i)) != data.label(i)) ++errors;
    return static_cast<double>(errors) / b.size();
}

double test_risk(const Classifier& f, const Dataset& test) {
    return empirical_risk(f, test, IndexSet::all(test.size()));
}

double excess_risk_estimate(const Classifier& f, const Classifier& reference, const Dataset& test) {
    return test_risk(f, test) - test_risk(reference, test);
}

}  // namespace agghoo
