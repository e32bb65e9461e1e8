#pragma once

#include "tok/numeric.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace tok {

/// Sparse matrix with explicit dimensions; zero entries are never stored.
template <class T>
class SparseMatrix {
public:
    SparseMatrix(std::size_t rows = 0, std::size_t cols = 0) : rows_(rows), cols_(cols), data_(rows) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void set(std::size_t r, std::size_t c, const T& v)
    {
        check(r, c);
        if (v == 0) data_[r].erase(c);
        else data_[r][c] = v;
    }
    void add(std::size_t r, std::size_t c, const T& v)
    {
        check(r, c);
        if (v == 0) return;
        auto [it, inserted] = data_[r].try_emplace(c, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) data_[r].erase(it);
        }
    }
    T get(std::size_t r, std::size_t c) const
    {
        check(r, c);
        auto it = data_[r].find(c);
        return it == data_[r].end() ? T(0) : it->second;
    }
    const std::map<std::size_t, T>& row(std::size_t r) const { return data_[r]; }
    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }

    static SparseMatrix from_rows(const std::vector<std::vector<long long>>& rows)
    {
        SparseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c) m.set(r, c, T(rows[r][c]));
        return m;
    }

private:
    void check(std::size_t r, std::size_t c) const
    {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
    }

    std::size_t rows_, cols_;
    std::vector<std::map<std::size_t, T>> data_;
};

using IntMatrix = SparseMatrix<Integer>;
using RatMatrix = SparseMatrix<Rational>;

struct SmithForm {
    std::size_t rank = 0;
    std::vector<Integer> divisors;  // positive, each dividing the next
};

/// Smith normal form by repeated magnitude-minimal pivoting.
inline SmithForm smith_normal_form(const IntMatrix& input)
{
    using boost::multiprecision::abs;
    const std::size_t R = input.rows(), C = input.cols();
    std::vector<std::vector<Integer>> a(R, std::vector<Integer>(C));
    for (std::size_t r = 0; r < R; ++r)
        for (const auto& [c, v] : input.row(r)) a[r][c] = v;

    std::vector<Integer> diag;
    std::size_t t = 0;
    while (t < R && t < C) {
        // Smallest nonzero entry of the remaining block.
        std::size_t pr = R, pc = C;
        for (std::size_t r = t; r < R; ++r)
            for (std::size_t c = t; c < C; ++c)
                if (a[r][c] != 0 && (pr == R || abs(a[r][c]) < abs(a[pr][pc]))) {
                    pr = r;
                    pc = c;
                }
        if (pr == R) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t r = t + 1; r < R; ++r) {
                if (a[r][t] == 0) continue;
                Integer q = a[r][t] / a[t][t];
                for (std::size_t c = t; c < C; ++c) a[r][c] -= q * a[t][c];
                if (a[r][t] != 0) {
                    std::swap(a[t], a[r]);
                    clean = false;
                }
            }
            for (std::size_t c = t + 1; c < C; ++c) {
                if (a[t][c] == 0) continue;
                Integer q = a[t][c] / a[t][t];
                for (std::size_t r = t; r < R; ++r) a[r][c] -= q * a[r][t];
                if (a[t][c] != 0) {
                    for (auto& row : a) std::swap(row[t], row[c]);
                    clean = false;
                }
            }
            if (!clean) continue;
            // The pivot must divide the whole remaining block.
            for (std::size_t r = t + 1; r < R && clean; ++r)
                for (std::size_t c = t + 1; c < C; ++c)
                    if (a[r][c] % a[t][t] != 0) {
                        for (std::size_t k = t; k < C; ++k) a[t][k] += a[r][k];
                        clean = false;
                        break;
                    }
        }
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    std::sort(diag.begin(), diag.end());
    return SmithForm{diag.size(), diag};
}

/// Rank over Q. Rows are scaled to primitive integer vectors and eliminated
/// without division.
inline std::size_t rank_q(const RatMatrix& m)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    using boost::multiprecision::numerator;
    using Row = std::map<std::size_t, Integer>;

    auto primitive = [](Row& row) {
        Integer g = 0;
        for (const auto& [c, v] : row) g = gcd(g, v);
        if (g > 1)
            for (auto& [c, v] : row) v /= g;
    };

    std::vector<Row> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.row(r).empty()) continue;
        Integer den = 1;
        for (const auto& [c, v] : m.row(r)) den = lcm(den, Integer(denominator(v)));
        Row row;
        for (const auto& [c, v] : m.row(r)) row[c] = Integer(numerator(v)) * (den / Integer(denominator(v)));
        primitive(row);
        rows.push_back(std::move(row));
    }

    std::size_t rank = 0;
    while (!rows.empty()) {
        // Sparsest row first keeps fill-in down.
        auto best = std::min_element(rows.begin(), rows.end(),
                                     [](const Row& a, const Row& b) { return a.size() < b.size(); });
        Row pivot = std::move(*best);
        rows.erase(best);
        ++rank;
        const std::size_t pc = pivot.begin()->first;
        const Integer pv = pivot.begin()->second;
        std::vector<Row> next;
        next.reserve(rows.size());
        for (auto& row : rows) {
            auto it = row.find(pc);
            if (it != row.end()) {
                Integer f = it->second;
                Row combined;
                for (const auto& [c, v] : row) combined[c] = v * pv;
                for (const auto& [c, v] : pivot) {
                    Integer& e = combined[c];
                    e -= f * v;
                    if (e == 0) combined.erase(c);
                }
                row = std::move(combined);
                primitive(row);
            }
            if (!row.empty()) next.push_back(std::move(row));
        }
        rows = std::move(next);
    }
    return rank;
}

}  // namespace tok
