#include "bcc/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bcc {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    // Ignore trailing blank lines, but keep interior ones so errors point at them.
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

double parse_number_or_throw(const std::string& path, const std::string& field, std::size_t line,
                             std::size_t column) {
    double v = 0.0;
    if (!parse_number(field, v))
        throw std::runtime_error(path + ": line " + std::to_string(line) + ", column " +
                                 std::to_string(column) + ": not a number: '" + trim(field) + "'");
    return v;
}

void check_width(const std::string& path, std::size_t line, std::size_t got, std::size_t want) {
    if (got != want)
        throw std::runtime_error(path + ": line " + std::to_string(line) + ": expected " +
                                 std::to_string(want) + " fields, got " + std::to_string(got));
}

bool all_numeric(const std::vector<std::string>& fields) {
    double v;
    for (const std::string& f : fields)
        if (!parse_number(f, v)) return false;
    return true;
}

// Shared core for the small one-or-two-column loaders.
std::vector<std::string> load_value_column(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error(path + ": empty file");
    std::size_t start = 0;
    if (!all_numeric(split_fields(lines[0]))) start = 1;  // header row
    if (start >= lines.size()) throw std::runtime_error(path + ": no data rows");

    const std::size_t width = split_fields(lines[start]).size();
    if (width != 1 && width != 2)
        throw std::runtime_error(path + ": expected 1 or 2 columns, got " + std::to_string(width));
    std::vector<std::string> values;
    for (std::size_t r = start; r < lines.size(); ++r) {
        const std::vector<std::string> fields = split_fields(lines[r]);
        check_width(path, r + 1, fields.size(), width);
        values.push_back(trim(fields.back()));
    }
    return values;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    return out;
}

}  // namespace

LoadedCsv load_csv(const std::string& path, bool has_header, std::optional<int> label_column) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error(path + ": empty file");

    std::size_t start = 0;
    LoadedCsv out;
    std::size_t width = split_fields(lines[0]).size();
    if (has_header) {
        for (std::string& name : split_fields(lines[0])) out.header.push_back(trim(name));
        start = 1;
    }
    if (start >= lines.size()) throw std::runtime_error(path + ": no data rows");
    width = split_fields(lines[start]).size();

    int label_idx = -1;
    if (label_column.has_value()) {
        label_idx = *label_column >= 0 ? *label_column : static_cast<int>(width) + *label_column;
        if (label_idx < 0 || label_idx >= static_cast<int>(width))
            throw std::runtime_error(path + ": label column " + std::to_string(*label_column) +
                                     " out of range for " + std::to_string(width) + " columns");
        if (width == 1) throw std::runtime_error(path + ": no feature columns besides the label");
        out.has_labels = true;
        // The header should describe the feature matrix that comes back.
        if (label_idx < static_cast<int>(out.header.size()))
            out.header.erase(out.header.begin() + label_idx);
    }

    const int n = static_cast<int>(lines.size() - start);
    const int p = static_cast<int>(width) - (label_idx >= 0 ? 1 : 0);
    Matrix m(n, p);
    std::unordered_map<std::string, int> label_ids;
    for (int r = 0; r < n; ++r) {
        const std::size_t line_no = start + r + 1;
        const std::vector<std::string> fields = split_fields(lines[start + r]);
        check_width(path, line_no, fields.size(), width);
        int c = 0;
        for (std::size_t f = 0; f < fields.size(); ++f) {
            if (static_cast<int>(f) == label_idx) {
                const std::string token = trim(fields[f]);
                auto it = label_ids.try_emplace(token, static_cast<int>(label_ids.size())).first;
                if (it->second == static_cast<int>(out.label_names.size()))
                    out.label_names.push_back(token);
                out.labels.push_back(it->second);
                continue;
            }
            m(r, c++) = parse_number_or_throw(path, fields[f], line_no, f + 1);
        }
    }
    out.values = std::move(m);
    return out;
}

LabelVector load_labels(const std::string& path) {
    const std::vector<std::string> tokens = load_value_column(path);
    std::unordered_map<std::string, int> ids;
    LabelVector labels;
    for (const std::string& t : tokens)
        labels.push_back(ids.try_emplace(t, static_cast<int>(ids.size())).first->second);
    return labels;
}

std::vector<double> load_weights(const std::string& path) {
    const std::vector<std::string> tokens = load_value_column(path);
    std::vector<double> w;
    for (std::size_t r = 0; r < tokens.size(); ++r) {
        double v = 0.0;
        if (!parse_number(tokens[r], v))
            throw std::runtime_error(path + ": not a number: '" + tokens[r] + "'");
        w.push_back(v);
    }
    return w;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& m, const std::string& column_prefix) {
    std::ofstream out = open_for_write(path);
    for (int c = 0; c < m.cols; ++c) out << (c ? "," : "") << column_prefix << c;
    out << "\n";
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) out << (c ? "," : "") << format_double(m(r, c));
        out << "\n";
    }
}

void write_dataset_csv(const std::string& path, const Matrix& m, const LabelVector& labels) {
    if (static_cast<int>(labels.size()) != m.rows)
        throw std::invalid_argument("write_dataset_csv: label length mismatch");
    std::ofstream out = open_for_write(path);
    for (int c = 0; c < m.cols; ++c) out << "x" << c << ",";
    out << "label\n";
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) out << format_double(m(r, c)) << ",";
        out << labels[r] << "\n";
    }
}

void write_weights_csv(const std::string& path, const WeightVector& w) {
    std::ofstream out = open_for_write(path);
    out << "feature,weight\n";
    for (int l = 0; l < w.size(); ++l) out << l << "," << format_double(w[l]) << "\n";
}

void write_labels_csv(const std::string& path, const LabelVector& labels) {
    std::ofstream out = open_for_write(path);
    out << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << "," << labels[i] << "\n";
}

void write_dendrogram_csv(const std::string& path, const Dendrogram& dendro) {
    std::ofstream out = open_for_write(path);
    out << "node_a,node_b,height,size\n";
    for (const Dendrogram::Merge& m : dendro.merges)
        out << m.node_a << "," << m.node_b << "," << format_double(m.height) << "," << m.merged_size
            << "\n";
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
    std::ofstream out = open_for_write(path);
    out << "iteration,objective\n";
    for (std::size_t t = 0; t < trace.size(); ++t)
        out << t << "," << format_double(trace[t]) << "\n";
}

void write_affinities_csv(const std::string& path, const AffinityGraph& phi) {
    std::ofstream out = open_for_write(path);
    out << "i,j,phi\n";
    for (const AffinityGraph::Triple& e : phi.edges())
        out << e.i << "," << e.j << "," << format_double(e.phi) << "\n";
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::uint64_t h = 14695981039346656037ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize b = 0; b < got; ++b) {
            h ^= static_cast<unsigned char>(buf[b]);
            h *= 1099511628211ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace bcc
