#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcc/assign.hpp"
#include "bcc/types.hpp"

namespace bcc {

struct LoadedCsv {
    Matrix values;
    std::vector<std::string> header;       // column names when a header row was present
    bool has_labels = false;
    LabelVector labels;                    // factor-encoded label column, if extracted
    std::vector<std::string> label_names;  // original label token per encoded id
};

/// Parse a rectangular numeric CSV. label_column extracts one column as labels
/// (factor-encoded by first occurrence); negative values count from the end,
/// so -1 is the last column. Errors name the offending line and column.
LoadedCsv load_csv(const std::string& path, bool has_header,
                   std::optional<int> label_column = std::nullopt);

/// Label file: one or two columns (bare label, or index,label); a non-numeric
/// first row is treated as a header. Values are factor-encoded in file order.
LabelVector load_labels(const std::string& path);

/// Weight file: one or two columns (bare weight, or feature,weight); a
/// non-numeric first row is treated as a header.
std::vector<double> load_weights(const std::string& path);

/// Round-trippable decimal form of v (17 significant digits).
std::string format_double(double v);

void write_matrix_csv(const std::string& path, const Matrix& m, const std::string& column_prefix);
void write_dataset_csv(const std::string& path, const Matrix& m, const LabelVector& labels);
void write_weights_csv(const std::string& path, const WeightVector& w);
void write_labels_csv(const std::string& path, const LabelVector& labels);
void write_dendrogram_csv(const std::string& path, const Dendrogram& dendro);
void write_trace_csv(const std::string& path, const std::vector<double>& trace);
void write_affinities_csv(const std::string& path, const AffinityGraph& phi);

/// FNV-1a 64-bit digest of the file bytes, as 16 hex digits.
std::string file_digest_hex(const std::string& path);

}  // namespace bcc
