#pragma once

#include <cstddef>
#include <vector>

#include "neurise/alphabet.hpp"

namespace neurise {

/// n rows of p symbols, stored row-major. Immutable after construction;
/// construction validates every symbol against the alphabet.
class SampleSet {
public:
    SampleSet(int p, Alphabet alphabet, std::vector<Symbol> data)
        : p_(p), alphabet_(alphabet), data_(std::move(data)) {
        if (p_ < 1) throw invalid_input("sample set needs p >= 1");
        if (data_.empty() || data_.size() % static_cast<std::size_t>(p_) != 0)
            throw invalid_input("sample data size is not a multiple of p");
        for (Symbol s : data_)
            if (!alphabet_.valid(s))
                throw invalid_input("sample symbol " + std::to_string(int(s)) +
                                    " out of range for q=" + std::to_string(alphabet_.q));
    }

    int p() const { return p_; }
    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return data_.size() / static_cast<std::size_t>(p_); }

    const Symbol* row(std::size_t t) const { return data_.data() + t * static_cast<std::size_t>(p_); }
    Config config(std::size_t t) const {
        return Config(row(t), row(t) + p_);
    }
    const std::vector<Symbol>& data() const { return data_; }

private:
    int p_;
    Alphabet alphabet_;
    std::vector<Symbol> data_;
};

}  // namespace neurise
