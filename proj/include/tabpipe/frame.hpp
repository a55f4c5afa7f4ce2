#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/value.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace tabpipe {

struct Column {
    std::string name;
    DType dtype = DType::Str;
    std::vector<Value> values;
};

/// Immutable table of named, typed, equal-length columns. Every operation
/// returns a new Frame; inputs are never mutated.
class Frame {
public:
    Frame() = default;

    explicit Frame(std::vector<Column> columns) : columns_(std::move(columns)) {
        if (!columns_.empty()) nrows_ = columns_.front().values.size();
        rebuildIndex();
        checkInvariants();
    }

    size_t nrows() const { return nrows_; }
    size_t ncols() const { return columns_.size(); }
    const std::vector<Column>& columns() const { return columns_; }

    bool hasColumn(const std::string& name) const { return index_.count(name) > 0; }

    size_t columnIndex(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            throw Error(ErrorCode::UnknownColumn, "no column named '" + name + "'");
        return it->second;
    }

    const Column& column(const std::string& name) const { return columns_[columnIndex(name)]; }
    const Column& column(size_t i) const { return columns_.at(i); }

    std::vector<std::string> columnNames() const {
        std::vector<std::string> names;
        names.reserve(columns_.size());
        for (const auto& c : columns_) names.push_back(c.name);
        return names;
    }

    /// New frame with the given column appended.
    Frame withColumn(Column col, bool asFirst = false) const {
        if (hasColumn(col.name))
            throw Error(ErrorCode::DuplicateColumn, "column '" + col.name + "' already exists");
        if (col.values.size() != nrows_ && !columns_.empty())
            throw Error(ErrorCode::LengthMismatch, "column '" + col.name + "' has " +
                                                       std::to_string(col.values.size()) +
                                                       " rows, frame has " + std::to_string(nrows_));
        std::vector<Column> cols = columns_;
        if (asFirst)
            cols.insert(cols.begin(), std::move(col));
        else
            cols.push_back(std::move(col));
        return Frame(std::move(cols));
    }

    /// New frame with the named column's contents replaced in place.
    Frame replacingColumn(const std::string& name, Column col) const {
        size_t i = columnIndex(name);
        std::vector<Column> cols = columns_;
        cols[i] = std::move(col);
        return Frame(std::move(cols));
    }

    Frame dropColumns(const std::vector<std::string>& names) const {
        for (const auto& n : names) columnIndex(n);
        std::vector<Column> cols;
        for (const auto& c : columns_)
            if (std::find(names.begin(), names.end(), c.name) == names.end()) cols.push_back(c);
        return Frame(std::move(cols));
    }

private:
    void rebuildIndex() {
        index_.clear();
        for (size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].name.empty())
                throw Error(ErrorCode::BadParam, "column names must be non-empty");
            if (!index_.emplace(columns_[i].name, i).second)
                throw Error(ErrorCode::DuplicateColumn,
                            "duplicate column name '" + columns_[i].name + "'");
        }
    }

    void checkInvariants() const {
        for (const auto& c : columns_) {
            if (c.values.size() != nrows_)
                throw Error(ErrorCode::LengthMismatch, "column '" + c.name + "' length mismatch");
#ifndef NDEBUG
            for (const auto& v : c.values) {
                auto t = valueDType(v);
                assert(!t || *t == c.dtype);
            }
#endif
        }
    }

    std::vector<Column> columns_;
    std::map<std::string, size_t> index_;
    size_t nrows_ = 0;
};

inline Frame selectColumns(const Frame& f, const std::vector<std::string>& names) {
    std::vector<Column> cols;
    cols.reserve(names.size());
    for (const auto& n : names) cols.push_back(f.column(n));
    return Frame(std::move(cols));
}

inline Frame renameColumn(const Frame& f, const std::string& oldName, const std::string& newName) {
    size_t i = f.columnIndex(oldName);
    if (newName != oldName && f.hasColumn(newName))
        throw Error(ErrorCode::DuplicateColumn, "column '" + newName + "' already exists");
    std::vector<Column> cols = f.columns();
    cols[i].name = newName;
    return Frame(std::move(cols));
}

/// Rows where mask is true, in original order.
inline Frame filterByMask(const Frame& f, const std::vector<bool>& mask) {
    if (mask.size() != f.nrows())
        throw Error(ErrorCode::LengthMismatch, "mask length " + std::to_string(mask.size()) +
                                                   " != row count " + std::to_string(f.nrows()));
    std::vector<Column> cols;
    cols.reserve(f.ncols());
    for (const auto& c : f.columns()) {
        Column out{c.name, c.dtype, {}};
        for (size_t r = 0; r < mask.size(); ++r)
            if (mask[r]) out.values.push_back(c.values[r]);
        cols.push_back(std::move(out));
    }
    if (cols.empty()) return Frame();
    return Frame(std::move(cols));
}

/// Rows of top followed by rows of bottom; bottom's columns are reordered to
/// top's column order. Both frames must share the same name set and dtypes.
inline Frame unionByName(const Frame& top, const Frame& bottom) {
    if (top.ncols() != bottom.ncols())
        throw Error(ErrorCode::SchemaMismatch,
                    "column counts differ: " + std::to_string(top.ncols()) + " vs " +
                        std::to_string(bottom.ncols()));
    std::vector<Column> cols;
    cols.reserve(top.ncols());
    for (const auto& tc : top.columns()) {
        if (!bottom.hasColumn(tc.name))
            throw Error(ErrorCode::SchemaMismatch, "column '" + tc.name + "' missing from bottom frame");
        const Column& bc = bottom.column(tc.name);
        if (bc.dtype != tc.dtype)
            throw Error(ErrorCode::SchemaMismatch,
                        "column '" + tc.name + "' dtype differs: " + dtypeName(tc.dtype) + " vs " +
                            dtypeName(bc.dtype));
        Column out{tc.name, tc.dtype, tc.values};
        out.values.insert(out.values.end(), bc.values.begin(), bc.values.end());
        cols.push_back(std::move(out));
    }
    return Frame(std::move(cols));
}

} // namespace tabpipe
