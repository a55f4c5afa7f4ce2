#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/frame.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tabpipe {

struct CsvDialect {
    char delimiter = ',';
    bool header = true;
    char quote = '"';
    std::vector<std::string> nullTokens = defaultNullTokens();
};

namespace csv_detail {

struct RawRow {
    std::vector<std::string> fields;
    size_t line = 0; // 1-based physical line the row starts on
};

// RFC-4180 style: quoted fields may contain delimiters, newlines and doubled
// quotes; no escape character beyond quote doubling.
inline std::vector<RawRow> splitRows(const std::string& text, const CsvDialect& d) {
    std::vector<RawRow> rows;
    std::vector<std::string> fields;
    std::string field;
    bool inQuotes = false;
    bool fieldWasQuoted = false;
    bool anyData = false;
    size_t line = 1;
    size_t rowStartLine = 1;

    auto endField = [&]() {
        fields.push_back(std::move(field));
        field.clear();
        fieldWasQuoted = false;
    };
    auto endRow = [&]() {
        endField();
        rows.push_back({std::move(fields), rowStartLine});
        fields.clear();
        anyData = false;
        rowStartLine = line;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (inQuotes) {
            if (c == d.quote) {
                if (i + 1 < text.size() && text[i + 1] == d.quote) {
                    field += d.quote;
                    ++i;
                } else {
                    inQuotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == d.quote && field.empty() && !fieldWasQuoted) {
            inQuotes = true;
            fieldWasQuoted = true;
            anyData = true;
        } else if (c == d.delimiter) {
            endField();
            anyData = true;
        } else if (c == '\r') {
            // swallowed; \r\n and bare \n both end the row at the \n
        } else if (c == '\n') {
            ++line;
            if (anyData || !field.empty() || !fields.empty()) endRow();
            rowStartLine = line;
        } else {
            field += c;
            anyData = true;
        }
    }
    if (inQuotes)
        throw Error(ErrorCode::CsvParse, "unterminated quoted field starting near line " +
                                             std::to_string(rowStartLine));
    if (anyData || !field.empty() || !fields.empty()) endRow();
    return rows;
}

inline bool needsQuoting(const std::string& s, const CsvDialect& d) {
    for (char c : s)
        if (c == d.delimiter || c == d.quote || c == '\n' || c == '\r') return true;
    return false;
}

inline void writeField(std::ostream& os, const std::string& s, const CsvDialect& d) {
    if (!needsQuoting(s, d)) {
        os << s;
        return;
    }
    os << d.quote;
    for (char c : s) {
        if (c == d.quote) os << d.quote;
        os << c;
    }
    os << d.quote;
}

} // namespace csv_detail

/// Parse delimited text into a Frame. Per-cell inference followed by the
/// narrowest column type consistent with every non-null cell (Int64 widens to
/// Float64; any other conflict falls back to Str). With inferSchema=false all
/// columns are Str, though null tokens still produce Null.
inline Frame readCsvText(const std::string& text, const CsvDialect& dialect, bool inferSchema = true) {
    auto rows = csv_detail::splitRows(text, dialect);
    if (rows.empty()) throw Error(ErrorCode::CsvParse, "input contains no rows");

    std::vector<std::string> names;
    size_t firstDataRow = 0;
    if (dialect.header) {
        names = rows[0].fields;
        firstDataRow = 1;
    } else {
        for (size_t i = 0; i < rows[0].fields.size(); ++i) names.push_back("c" + std::to_string(i));
    }
    const size_t ncols = names.size();

    for (size_t r = firstDataRow; r < rows.size(); ++r) {
        if (rows[r].fields.size() != ncols)
            throw Error(ErrorCode::RaggedRow, "line " + std::to_string(rows[r].line) + " has " +
                                                  std::to_string(rows[r].fields.size()) +
                                                  " fields, expected " + std::to_string(ncols));
    }
    const size_t nrows = rows.size() - firstDataRow;

    std::vector<Column> cols;
    cols.reserve(ncols);
    for (size_t c = 0; c < ncols; ++c) {
        Column col{names[c], DType::Str, {}};
        col.values.reserve(nrows);

        if (!inferSchema) {
            for (size_t r = 0; r < nrows; ++r) {
                const std::string& cell = rows[firstDataRow + r].fields[c];
                bool null = false;
                for (const auto& t : dialect.nullTokens)
                    if (cell == t) { null = true; break; }
                col.values.push_back(null ? Value(std::monostate{}) : Value(cell));
            }
            cols.push_back(std::move(col));
            continue;
        }

        // First pass: narrowest dtype over all non-null cells.
        std::optional<DType> dtype;
        bool conflict = false;
        for (size_t r = 0; r < nrows && !conflict; ++r) {
            Value v = inferCellType(rows[firstDataRow + r].fields[c], dialect.nullTokens);
            auto t = valueDType(v);
            if (!t) continue;
            if (!dtype) {
                dtype = *t;
            } else if (*dtype != *t) {
                if (isNumeric(*dtype) && isNumeric(*t))
                    dtype = DType::Float64;
                else
                    conflict = true;
            }
        }
        col.dtype = conflict ? DType::Str : dtype.value_or(DType::Str);

        // Second pass: materialize under the column dtype.
        for (size_t r = 0; r < nrows; ++r) {
            const std::string& cell = rows[firstDataRow + r].fields[c];
            Value v = inferCellType(cell, dialect.nullTokens);
            if (isNull(v)) {
                col.values.push_back(std::monostate{});
            } else if (col.dtype == DType::Str) {
                col.values.push_back(cell); // keep original text on fallback
            } else if (col.dtype == DType::Float64 && std::holds_alternative<int64_t>(v)) {
                col.values.push_back(static_cast<double>(std::get<int64_t>(v)));
            } else {
                col.values.push_back(std::move(v));
            }
        }
        cols.push_back(std::move(col));
    }
    return Frame(std::move(cols));
}

inline Frame readCsvFile(const std::filesystem::path& path, const CsvDialect& dialect,
                         bool inferSchema = true) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return readCsvText(buf.str(), dialect, inferSchema);
}

/// DateTime renders "YYYY-MM-DD HH:MM:SS", Null as an empty field, Float as
/// the shortest round-trip decimal.
inline std::string writeCsvText(const Frame& f, const CsvDialect& dialect) {
    std::ostringstream os;
    if (dialect.header) {
        for (size_t c = 0; c < f.ncols(); ++c) {
            if (c) os << dialect.delimiter;
            csv_detail::writeField(os, f.column(c).name, dialect);
        }
        os << "\n";
    }
    for (size_t r = 0; r < f.nrows(); ++r) {
        for (size_t c = 0; c < f.ncols(); ++c) {
            if (c) os << dialect.delimiter;
            csv_detail::writeField(os, renderValue(f.column(c).values[r]), dialect);
        }
        os << "\n";
    }
    return os.str();
}

inline void writeCsvFile(const Frame& f, const std::filesystem::path& path,
                         const CsvDialect& dialect, bool overwrite) {
    if (!overwrite && std::filesystem::exists(path))
        throw Error(ErrorCode::FileExists, path.string());
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out << writeCsvText(f, dialect);
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

} // namespace tabpipe
