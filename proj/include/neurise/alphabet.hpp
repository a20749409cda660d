#pragma once

#include <cstdint>
#include <vector>

#include "neurise/errors.hpp"

namespace neurise {

using Symbol = std::uint8_t;
using Config = std::vector<Symbol>;

/// Discrete alphabet {0, .., q-1}. For q = 2 the spin convention is fixed
/// globally: symbol 0 is spin +1, symbol 1 is spin -1.
struct Alphabet {
    int q = 2;

    Alphabet() = default;
    explicit Alphabet(int q_) : q(q_) {
        if (q < 2) throw invalid_input("alphabet size must be >= 2, got " + std::to_string(q));
    }

    bool valid(Symbol s) const { return static_cast<int>(s) < q; }

    /// Spin value of a binary symbol: 0 -> +1, 1 -> -1.
    static double spin(Symbol s) { return s == 0 ? 1.0 : -1.0; }

    /// Centered indicator of label s evaluated at symbol sigma:
    /// 1 - 1/q when s == sigma, else -1/q. Sums to zero over sigma.
    double centered_indicator(Symbol label, Symbol sigma) const {
        return (label == sigma ? 1.0 : 0.0) - 1.0 / static_cast<double>(q);
    }

    bool operator==(const Alphabet&) const = default;
};

}  // namespace neurise
