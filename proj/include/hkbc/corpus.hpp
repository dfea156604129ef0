#pragma once

// Labeled tweet datasets: loading, shuffling, concatenation, label statistics.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "label.hpp"
#include "random.hpp"
#include "utf8.hpp"

namespace hkbc {

struct Record {
    std::string id;
    std::string text;
    std::optional<Label> label;  // absent for unlabeled test data

    friend bool operator==(const Record&, const Record&) = default;
};

struct Dataset {
    std::string name;
    std::vector<Record> records;
    bool labeled = true;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }

    std::vector<std::string> texts() const {
        std::vector<std::string> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.text);
        return out;
    }

    /// Requires a labeled dataset.
    std::vector<Label> labels() const {
        if (!labeled) throw UsageError("dataset '" + name + "' is unlabeled");
        std::vector<Label> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(*r.label);
        return out;
    }
};

struct LabelShare {
    std::size_t count = 0;
    double percent = 0.0;  // rounded half-up to 2 decimals
};

struct StatsReport {
    std::string name;
    std::size_t total = 0;
    LabelShare not_offensive;
    LabelShare offensive;

    const LabelShare& operator[](Label l) const { return l == Label::OFF ? offensive : not_offensive; }
};

struct LoadOptions {
    char delimiter = '\t';
    bool has_header = false;
    bool labeled = true;
};

namespace detail {

// Splits one line into fields. A field wrapped in double quotes may contain
// the delimiter, and "" inside it stands for one quote. A field that opens
// with a quote but is not well-formed quoting is taken literally.
inline std::vector<std::string> split_fields(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::string field;
        bool quoted = false;
        if (pos < line.size() && line[pos] == '"') {
            std::size_t q = pos + 1;
            while (q < line.size()) {
                if (line[q] != '"') {
                    field += line[q++];
                } else if (q + 1 < line.size() && line[q + 1] == '"') {
                    field += '"';
                    q += 2;
                } else {
                    quoted = q + 1 == line.size() || line[q + 1] == delim;
                    ++q;
                    break;
                }
            }
            if (quoted) pos = q;
        }
        if (!quoted) {
            const std::size_t end = line.find(delim, pos);
            const std::size_t stop = end == std::string_view::npos ? line.size() : end;
            field.assign(line.substr(pos, stop - pos));
            pos = stop;
        }
        fields.push_back(std::move(field));
        if (pos >= line.size()) break;
        ++pos;  // skip delimiter
        if (pos == line.size()) {
            fields.emplace_back();
            break;
        }
    }
    return fields;
}

inline std::string row_context(const std::string& source, std::size_t line_no) {
    return source + ": row " + std::to_string(line_no);
}

}  // namespace detail

/// Parses dataset text already in memory; `source` names it in error messages.
inline Dataset parse_dataset(std::string_view content, const LoadOptions& opts, std::string source) {
    if (const auto bad = utf8::first_invalid(content); bad != std::string_view::npos) {
        std::size_t line_no = 1;
        for (std::size_t i = 0; i < bad; ++i) line_no += content[i] == '\n';
        throw DataError(detail::row_context(source, line_no) + ": invalid UTF-8");
    }

    Dataset ds;
    ds.name = std::filesystem::path(source).stem().string();
    ds.labeled = opts.labeled;
    const std::size_t expected_columns = opts.labeled ? 3 : 2;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && opts.has_header) continue;

        auto fields = detail::split_fields(line, opts.delimiter);
        if (fields.size() != expected_columns) {
            throw DataError(detail::row_context(source, line_no) + ": expected " + std::to_string(expected_columns) +
                            " columns, found " + std::to_string(fields.size()));
        }
        Record rec;
        rec.id = std::move(fields[0]);
        rec.text = std::move(fields[1]);
        if (rec.id.empty()) throw DataError(detail::row_context(source, line_no) + ": empty id");
        if (opts.labeled) {
            rec.label = parse_label(fields[2]);
            if (!rec.label) {
                throw DataError(detail::row_context(source, line_no) + ": unknown label '" + fields[2] + "'");
            }
        }
        ds.records.push_back(std::move(rec));
    }
    if (ds.records.empty()) throw DataError(source + ": no data rows");
    return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in || std::filesystem::is_directory(path)) throw IoError("cannot open dataset '" + path.string() + "'");
    std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_dataset(content, opts, path.string());
}

namespace detail {
inline double rounded_percent(std::size_t count, std::size_t total) {
    // Integer half-up rounding of 100*count/total to hundredths.
    const std::uint64_t hundredths = (20000ULL * count + total) / (2ULL * total);
    return static_cast<double>(hundredths) / 100.0;
}
}  // namespace detail

inline StatsReport dataset_stats(const Dataset& ds) {
    if (!ds.labeled) throw UsageError("statistics need a labeled dataset ('" + ds.name + "' is unlabeled)");
    if (ds.empty()) throw DataError("dataset '" + ds.name + "' is empty");
    StatsReport rep;
    rep.name = ds.name;
    rep.total = ds.size();
    for (const auto& r : ds.records) {
        ++(*r.label == Label::OFF ? rep.offensive : rep.not_offensive).count;
    }
    rep.not_offensive.percent = detail::rounded_percent(rep.not_offensive.count, rep.total);
    rep.offensive.percent = detail::rounded_percent(rep.offensive.count, rep.total);
    return rep;
}

/// Seeded permutation of the records.
inline Dataset shuffle(const Dataset& ds, std::uint64_t seed) {
    Dataset out = ds;
    Rng rng(seed);
    fisher_yates(out.records, rng);
    return out;
}

/// Records of `a` followed by records of `b`. Duplicate ids are kept.
inline Dataset concat(const Dataset& a, const Dataset& b) {
    if (!a.empty() && !b.empty() && a.labeled != b.labeled) {
        throw UsageError("cannot concatenate labeled and unlabeled datasets ('" + a.name + "', '" + b.name + "')");
    }
    Dataset out;
    out.name = a.name + "+" + b.name;
    out.labeled = a.empty() ? b.labeled : a.labeled;
    out.records.reserve(a.size() + b.size());
    out.records.insert(out.records.end(), a.records.begin(), a.records.end());
    out.records.insert(out.records.end(), b.records.begin(), b.records.end());
    return out;
}

}  // namespace hkbc
