#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "agghoo/core.hpp"

namespace agghoo {

enum class MissingPolicy { ImputeMedian, DropRows };

// Reads the UCI breast-cancer Wisconsin file: comma-separated rows of
// id, nine integer attributes in 1..10, class code 2 (benign) or 4
// (malignant). The id column is dropped, labels map 2 -> 0 and 4 -> 1,
// missing attributes are encoded "?". ImputeMedian replaces them with the
// column median of observed values; DropRows discards the affected rows.
DataPtr load_breast_cancer(const std::string& path, MissingPolicy policy = MissingPolicy::ImputeMedian);

// Uniform random partition into a train part of size train_n and the rest.
std::pair<DataPtr, DataPtr> train_test_resplit(const Dataset& data, int train_n, std::uint64_t seed);

// One observation per row, label last column.
void write_csv(const Dataset& data, const std::string& path);
DataPtr read_csv(const std::string& path, int class_count);

// FNV-1a fingerprint of a file's bytes, for experiment provenance.
std::uint64_t file_checksum(const std::string& path);

}  // namespace agghoo
