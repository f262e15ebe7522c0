#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qdim {

// A finite word over the digit alphabet {0, 1, 3}. The empty word is a
// valid value (rendered as "-" in the text format).
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> digits);
    explicit Word(std::span<const std::uint8_t> digits);

    static bool is_digit(int d) { return d == 0 || d == 1 || d == 3; }

    // Parses the concatenated-digit text format, e.g. "103"; "-" or ""
    // parse to the empty word. Throws std::invalid_argument on other input.
    static Word parse(const std::string& text);
    std::string str() const;

    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    std::uint8_t operator[](std::size_t k) const { return digits_[k]; }
    std::uint8_t front() const { return digits_.front(); }
    std::uint8_t back() const { return digits_.back(); }

    void push_back(int d);
    void pop_back() { digits_.pop_back(); }

    // First z digits.
    Word prefix(std::size_t z) const;
    // Word with the last digit removed; invalid on the empty word.
    Word parent() const;
    // this + [d]
    Word append(int d) const;
    Word concat(const Word& tail) const;

    bool is_prefix_of(const Word& other) const;
    bool is_proper_prefix_of(const Word& other) const;

    auto begin() const { return digits_.begin(); }
    auto end() const { return digits_.end(); }
    const std::vector<std::uint8_t>& digits() const { return digits_; }

    friend bool operator==(const Word&, const Word&) = default;
    // Lexicographic on digit values; orders same-length words by projection.
    friend auto operator<=>(const Word& a, const Word& b) {
        return a.digits_ <=> b.digits_;
    }

private:
    std::vector<std::uint8_t> digits_;
};

// Drops the first z digits; requires 0 <= z <= |w|.
Word shift(const Word& w, std::size_t z);

}  // namespace qdim
