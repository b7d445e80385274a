#pragma once

#include "adcert/rational.hpp"

#include <string>
#include <vector>

namespace adcert {

struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Rational& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool is_zero() const {
        for (const auto& x : data)
            if (!x.is_zero()) return false;
        return true;
    }
    friend bool operator==(const Matrix&, const Matrix&) = default;

    // Rows separated by "; ", entries by ", ".
    std::string str() const {
        std::string s;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r) s += "; ";
            for (std::size_t c = 0; c < cols; ++c) {
                if (c) s += ", ";
                s += (*this)(r, c).str();
            }
        }
        return s;
    }
};

} // namespace adcert
