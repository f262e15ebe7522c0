#include "qdim/word.hpp"

#include <stdexcept>

namespace qdim {

namespace {
[[noreturn]] void bad_digit(int d) {
    throw std::invalid_argument("word digit must be 0, 1 or 3, got " +
                                std::to_string(d));
}
}  // namespace

Word::Word(std::initializer_list<int> digits) {
    digits_.reserve(digits.size());
    for (int d : digits) push_back(d);
}

Word::Word(std::span<const std::uint8_t> digits) {
    digits_.reserve(digits.size());
    for (std::uint8_t d : digits) push_back(d);
}

Word Word::parse(const std::string& text) {
    Word w;
    if (text == "-" || text.empty()) return w;
    w.digits_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1' && c != '3')
            throw std::invalid_argument("invalid word text: \"" + text + "\"");
        w.digits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return w;
}

std::string Word::str() const {
    if (digits_.empty()) return "-";
    std::string s;
    s.reserve(digits_.size());
    for (std::uint8_t d : digits_) s.push_back(static_cast<char>('0' + d));
    return s;
}

void Word::push_back(int d) {
    if (!is_digit(d)) bad_digit(d);
    digits_.push_back(static_cast<std::uint8_t>(d));
}

Word Word::prefix(std::size_t z) const {
    if (z > size()) throw std::invalid_argument("prefix length exceeds word length");
    Word w;
    w.digits_.assign(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(z));
    return w;
}

Word Word::parent() const {
    if (empty()) throw std::invalid_argument("the empty word has no parent");
    return prefix(size() - 1);
}

Word Word::append(int d) const {
    Word w = *this;
    w.push_back(d);
    return w;
}

Word Word::concat(const Word& tail) const {
    Word w = *this;
    w.digits_.insert(w.digits_.end(), tail.digits_.begin(), tail.digits_.end());
    return w;
}

bool Word::is_prefix_of(const Word& other) const {
    if (size() > other.size()) return false;
    return std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

bool Word::is_proper_prefix_of(const Word& other) const {
    return size() < other.size() && is_prefix_of(other);
}

Word shift(const Word& w, std::size_t z) {
    if (z > w.size()) throw std::invalid_argument("shift amount exceeds word length");
    Word out;
    for (std::size_t k = z; k < w.size(); ++k) out.push_back(w[k]);
    return out;
}

}  // namespace qdim
