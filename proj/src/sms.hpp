#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "sparsemat.hpp"
#include "sparserow.hpp"

namespace rowfall {

// Sparse matrix text format:
//   header    "rows cols M"
//   entries   "i j v"   (1-based indices, any value the domain can parse)
//   trailer   "0 0 0"
// Entries of one row must be grouped together (the row-major convention);
// that is what makes single-pass streaming possible. Zero values are dropped
// on read, duplicate positions and out-of-range indices are errors.
template <typename D>
class SmsReader {
public:
    using V = typename D::value_type;

    SmsReader(std::istream& in, const D& dom) : in_(in), dom_(dom) {
        std::string line = next_content_line("header");
        std::istringstream hs(line);
        std::string a, b, c, extra;
        if (!(hs >> a >> b >> c) || (hs >> extra))
            throw ParseError(lineno_, "header must be \"rows cols M\"");
        rows_ = parse_dim(a);
        cols_ = parse_dim(b);
        if (c != "M")
            throw ParseError(lineno_, "third header field must be \"M\"");
    }

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }

    // Yields (row index, assembled row) for each row that has entries, in file
    // order. Returns nullopt once the trailer has been consumed. Only one
    // row is held in memory at a time.
    std::optional<std::pair<std::int64_t, SparseRow<V>>> next_row() {
        while (!done_) {
            std::string line = next_content_line("entry or trailer");
            std::istringstream es(line);
            std::string is, js, vs, extra;
            if (!(es >> is >> js >> vs) || (es >> extra))
                throw ParseError(lineno_, "entry must be \"i j v\"");
            if (is == "0" && js == "0" && vs == "0") {
                done_ = true;
                break;
            }
            std::int64_t i = parse_index(is, rows_, "row");
            std::int64_t j = parse_index(js, cols_, "column");
            auto v = dom_.parse(vs);
            if (!v)
                throw ParseError(lineno_, "cannot parse value \"" + vs + "\"");

            if (!current_ || i - 1 != current_->first) {
                auto finished = close_current();
                open_row(i - 1);
                add_entry(j - 1, std::move(*v));
                if (finished)
                    return finished;
            } else {
                add_entry(j - 1, std::move(*v));
            }
        }
        return close_current();
    }

private:
    std::string next_content_line(const char* what) {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                return line;
        }
        throw ParseError(lineno_ + 1, std::string("unexpected end of input, expected ") + what);
    }

    std::int64_t parse_dim(const std::string& tok) {
        try {
            std::size_t pos = 0;
            std::int64_t v = std::stoll(tok, &pos);
            if (pos != tok.size() || v < 0)
                throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError(lineno_, "bad dimension \"" + tok + "\"");
        }
    }

    std::int64_t parse_index(const std::string& tok, std::int64_t limit, const char* what) {
        std::int64_t v;
        try {
            std::size_t pos = 0;
            v = std::stoll(tok, &pos);
            if (pos != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError(lineno_, std::string("bad ") + what + " index \"" + tok + "\"");
        }
        if (v < 1 || v > limit)
            throw ParseError(lineno_, std::string(what) + " index " + tok +
                                          " out of range [1, " + std::to_string(limit) + "]");
        return v;
    }

    void open_row(std::int64_t i) {
        if (seen_.count(i))
            throw ParseError(lineno_, "entries for row " + std::to_string(i + 1) +
                                          " are not contiguous");
        current_.emplace(i, std::vector<std::pair<std::int64_t, V>>{});
        cols_seen_.clear();
    }

    void add_entry(std::int64_t j, V v) {
        if (!cols_seen_.insert(j).second)
            throw ParseError(lineno_, "duplicate entry at row " +
                                          std::to_string(current_->first + 1) + ", column " +
                                          std::to_string(j + 1));
        if (!dom_.is_zero(v))
            current_->second.emplace_back(j, std::move(v));
    }

    std::optional<std::pair<std::int64_t, SparseRow<V>>> close_current() {
        if (!current_)
            return std::nullopt;
        std::int64_t i = current_->first;
        seen_.insert(i);
        auto row = make_row(cols_, std::move(current_->second), dom_);
        current_.reset();
        return std::make_pair(i, std::move(row));
    }

    std::istream& in_;
    D dom_;
    std::int64_t rows_ = 0, cols_ = 0;
    std::int64_t lineno_ = 0;
    bool done_ = false;
    std::optional<std::pair<std::int64_t, std::vector<std::pair<std::int64_t, V>>>> current_;
    std::unordered_set<std::int64_t> seen_;
    std::unordered_set<std::int64_t> cols_seen_;
};

template <typename D>
SparseMatrix<typename D::value_type> read_sms(std::istream& in, const D& dom) {
    SmsReader<D> reader(in, dom);
    SparseMatrix<typename D::value_type> m(reader.rows(), reader.cols());
    while (auto r = reader.next_row())
        m.set_row(r->first, std::move(r->second));
    return m;
}

template <typename D>
SparseMatrix<typename D::value_type> read_sms_text(const std::string& text, const D& dom) {
    std::istringstream in(text);
    return read_sms(in, dom);
}

template <typename D>
void write_sms(std::ostream& out, const SparseMatrix<typename D::value_type>& m, const D& dom) {
    out << m.rows() << ' ' << m.cols() << " M\n";
    for (std::int64_t i = 0; i < m.rows(); ++i)
        for (const auto& e : m.row(i).entries())
            out << (i + 1) << ' ' << (e.col + 1) << ' ' << dom.to_text(e.val) << '\n';
    out << "0 0 0\n";
}

template <typename D>
std::string write_sms_text(const SparseMatrix<typename D::value_type>& m, const D& dom) {
    std::ostringstream out;
    write_sms(out, m, dom);
    return out.str();
}

} // namespace rowfall
