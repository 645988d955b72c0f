#include "scram/errors.hpp"
#include "scram/ldpc.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scram {

namespace {

struct Token {
    std::string text;
    std::size_t line;
};

class TokenStream {
public:
    explicit TokenStream(std::istream& in)
    {
        std::string line;
        std::size_t number = 0;
        while (std::getline(in, line)) {
            ++number;
            std::istringstream words(line);
            std::string word;
            while (words >> word)
                tokens_.push_back({word, number});
        }
        last_line_ = number;
    }

    bool done() const { return pos_ >= tokens_.size(); }

    std::size_t line() const { return done() ? last_line_ : tokens_[pos_].line; }

    bool peek_is_zero() const { return !done() && tokens_[pos_].text == "0"; }

    std::size_t next(const char* what)
    {
        if (done())
            throw AlistError(last_line_, std::string("unexpected end of file reading ") + what);
        const auto& tok = tokens_[pos_++];
        std::size_t value = 0;
        const auto* first = tok.text.data();
        const auto* last = first + tok.text.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last)
            throw AlistError(tok.line, std::string("expected non-negative integer for ") + what +
                                           ", got '" + tok.text + "'");
        return value;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t last_line_ = 0;
};

// Reads one adjacency list of the given degree plus optional zero padding.
std::vector<std::size_t> read_list(TokenStream& ts, std::size_t degree, std::size_t max_degree,
                                   std::size_t bound, const char* what)
{
    std::vector<std::size_t> out;
    out.reserve(degree);
    for (std::size_t k = 0; k < degree; ++k) {
        const auto line = ts.line();
        const auto idx = ts.next(what);
        if (idx == 0)
            throw AlistError(line, std::string("degree list inconsistent with adjacency: ") + what +
                                       " has fewer entries than its degree");
        if (idx > bound)
            throw AlistError(line, std::string(what) + " index " + std::to_string(idx) +
                                       " out of range (max " + std::to_string(bound) + ")");
        out.push_back(idx - 1);
    }
    for (std::size_t k = degree; k < max_degree && ts.peek_is_zero(); ++k)
        ts.next("padding");
    return out;
}

} // namespace

ParityCheckMatrix parse_alist(std::istream& in)
{
    TokenStream ts(in);
    if (ts.done())
        throw AlistError(1, "malformed header: empty input");

    const auto header_line = ts.line();
    const auto n = ts.next("header column count");
    if (ts.line() != header_line)
        throw AlistError(header_line, "malformed header: expected 'n m'");
    const auto m = ts.next("header row count");
    const auto max_col = ts.next("maximum column degree");
    const auto max_row = ts.next("maximum row degree");
    if (max_col > m || max_row > n)
        throw AlistError(header_line, "malformed header: maximum degree exceeds matrix dimension");

    std::vector<std::size_t> col_deg(n);
    std::vector<std::size_t> row_deg(m);
    for (auto& d : col_deg) {
        const auto line = ts.line();
        d = ts.next("column degree");
        if (d > max_col)
            throw AlistError(line, "column degree exceeds declared maximum");
    }
    for (auto& d : row_deg) {
        const auto line = ts.line();
        d = ts.next("row degree");
        if (d > max_row)
            throw AlistError(line, "row degree exceeds declared maximum");
    }

    std::vector<Entry> entries;
    for (std::size_t c = 0; c < n; ++c) {
        for (auto r : read_list(ts, col_deg[c], max_col, m, "row"))
            entries.push_back({r, c});
    }
    std::sort(entries.begin(), entries.end());

    std::vector<Entry> from_rows;
    for (std::size_t r = 0; r < m; ++r) {
        const auto line = ts.line();
        for (auto c : read_list(ts, row_deg[r], max_row, n, "column"))
            from_rows.push_back({r, c});
        // Compare incrementally so the error points at the first bad row.
        std::vector<Entry> expected;
        for (const auto& e : entries)
            if (e.row == r)
                expected.push_back(e);
        std::vector<Entry> got(from_rows.end() - static_cast<std::ptrdiff_t>(row_deg[r]), from_rows.end());
        std::sort(got.begin(), got.end());
        if (got != expected)
            throw AlistError(line, "degree list inconsistent with adjacency: row " +
                                       std::to_string(r + 1) + " disagrees with column lists");
    }
    if (!ts.done())
        throw AlistError(ts.line(), "trailing data after adjacency lists");

    return ParityCheckMatrix(m, n, std::move(entries));
}

ParityCheckMatrix read_alist_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open alist file '" + path + "'");
    try {
        return parse_alist(in);
    } catch (const AlistError& e) {
        throw AlistError(e.line(), e.detail(), path);
    }
}

void serialize_alist(const ParityCheckMatrix& h, std::ostream& out)
{
    std::size_t max_col = 0;
    std::size_t max_row = 0;
    for (std::size_t c = 0; c < h.n_cols(); ++c)
        max_col = std::max(max_col, h.col(c).size());
    for (std::size_t r = 0; r < h.n_rows(); ++r)
        max_row = std::max(max_row, h.row(r).size());

    auto write_list = [&out](auto values, std::size_t width) {
        std::size_t k = 0;
        for (auto v : values) {
            out << (k++ ? " " : "") << v;
        }
        for (; k < width; ++k)
            out << (k ? " " : "") << 0;
        out << '\n';
    };

    out << h.n_cols() << ' ' << h.n_rows() << '\n' << max_col << ' ' << max_row << '\n';
    std::vector<std::size_t> degrees;
    for (std::size_t c = 0; c < h.n_cols(); ++c)
        degrees.push_back(h.col(c).size());
    write_list(degrees, 0);
    degrees.clear();
    for (std::size_t r = 0; r < h.n_rows(); ++r)
        degrees.push_back(h.row(r).size());
    write_list(degrees, 0);

    std::vector<std::size_t> one_based;
    for (std::size_t c = 0; c < h.n_cols(); ++c) {
        one_based.clear();
        for (auto r : h.col(c))
            one_based.push_back(r + 1);
        write_list(one_based, max_col);
    }
    for (std::size_t r = 0; r < h.n_rows(); ++r) {
        one_based.clear();
        for (auto c : h.row(r))
            one_based.push_back(c + 1);
        write_list(one_based, max_row);
    }
}

std::string to_alist(const ParityCheckMatrix& h)
{
    std::ostringstream out;
    serialize_alist(h, out);
    return out.str();
}

} // namespace scram
