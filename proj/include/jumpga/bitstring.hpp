#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <jumpga/rng.hpp>

namespace jumpga::core {

/// Fixed-length bit vector over {0,1}^n, packed into 64-bit words.
///
/// Position i (0-based, corresponding to the i+1-th character of the text
/// form) lives at word i/64, bit i%64. Bits beyond position n-1 in the last
/// word are always zero; all operations preserve this. Genotypes are values:
/// operators return fresh instances instead of mutating.
class Genotype {
public:
    Genotype() = default;

    static Genotype zeros(std::size_t n) {
        Genotype g;
        g.length_ = n;
        g.words_.assign(word_count(n), 0);
        return g;
    }

    static Genotype all_ones(std::size_t n) {
        Genotype g = zeros(n);
        for (auto& w : g.words_) w = ~0ULL;
        g.mask_tail();
        return g;
    }

    /// Takes ownership of pre-packed words. Throws if the word count is wrong
    /// or a bit beyond position n-1 is set.
    static Genotype from_words(std::vector<std::uint64_t> words, std::size_t n) {
        if (words.size() != word_count(n))
            throw std::invalid_argument("Genotype::from_words: word count does not match length");
        Genotype g;
        g.length_ = n;
        g.words_ = std::move(words);
        if (n % 64 != 0 && !g.words_.empty()) {
            const std::uint64_t tail = g.words_.back() & ~((1ULL << (n % 64)) - 1);
            if (tail != 0)
                throw std::invalid_argument("Genotype::from_words: bits set beyond length");
        }
        return g;
    }

    /// Parses the text form: '0'/'1' characters, position 1 first.
    static Genotype from_string(std::string_view s) {
        Genotype g = zeros(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                g.words_[i / 64] |= 1ULL << (i % 64);
            else if (s[i] != '0')
                throw std::invalid_argument("Genotype::from_string: expected '0' or '1'");
        }
        return g;
    }

    std::size_t length() const { return length_; }

    bool bit(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1ULL; }

    int ones_count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    int zeros_count() const { return static_cast<int>(length_) - ones_count(); }

    std::span<const std::uint64_t> words() const { return words_; }

    std::string to_string() const {
        std::string s(length_, '0');
        for (std::size_t i = 0; i < length_; ++i)
            if (bit(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const Genotype&, const Genotype&) = default;

    static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

private:
    void mask_tail() {
        if (length_ % 64 != 0 && !words_.empty())
            words_.back() &= (1ULL << (length_ % 64)) - 1;
    }

    std::vector<std::uint64_t> words_;
    std::size_t length_ = 0;
};

/// Hamming distance via word-wise XOR + popcount. Throws on length mismatch.
inline int hamming(const Genotype& a, const Genotype& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("hamming: genotype lengths differ");
    int d = 0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) d += std::popcount(wa[i] ^ wb[i]);
    return d;
}

/// Uniform sample over {0,1}^n. Consumes one engine draw per 64-bit word.
inline Genotype random_genotype(std::size_t n, rng::Engine& eng) {
    if (n < 1) throw std::invalid_argument("random_genotype: n must be >= 1");
    std::vector<std::uint64_t> words(Genotype::word_count(n));
    for (auto& w : words) w = eng();
    if (n % 64 != 0) words.back() &= (1ULL << (n % 64)) - 1;
    return Genotype::from_words(std::move(words), n);
}

} // namespace jumpga::core
