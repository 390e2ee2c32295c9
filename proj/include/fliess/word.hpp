#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "fliess/error.hpp"

namespace fliess {

// A word over the alphabet {1, ..., M}: the index sequence of a
// noncommutative monomial E_{i1} E_{i2} ... E_{ik}.  The empty word is
// the unit.  Words order graded-lexicographically (length first, then
// left-to-right letter comparison), which fixes iteration and print
// order everywhere.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {
        for (int c : letters_)
            if (c < 1) throw parse_error("word letters must be >= 1");
    }

    static Word empty() { return Word(); }
    static Word letter(int i) { return Word(std::vector<int>{i}); }

    std::size_t size() const { return letters_.size(); }
    bool is_empty() const { return letters_.empty(); }
    int at(std::size_t k) const { return letters_[k]; }
    const std::vector<int>& letters() const { return letters_; }

    int max_letter() const {
        int m = 0;
        for (int c : letters_)
            if (c > m) m = c;
        return m;
    }

    Word concat(const Word& w) const {
        std::vector<int> out = letters_;
        out.insert(out.end(), w.letters_.begin(), w.letters_.end());
        return Word(std::move(out));
    }

    Word append(int letter) const {
        std::vector<int> out = letters_;
        out.push_back(letter);
        return Word(std::move(out));
    }

    // Subword picked out by sorted positions, used by the coproduct.
    Word subword(const std::vector<std::size_t>& positions) const {
        std::vector<int> out;
        out.reserve(positions.size());
        for (std::size_t k : positions) out.push_back(letters_[k]);
        return Word(std::move(out));
    }

    Word drop_first() const {
        return Word(std::vector<int>(letters_.begin() + 1, letters_.end()));
    }

    bool operator==(const Word& w) const { return letters_ == w.letters_; }

    // Graded-lex order.
    std::strong_ordering operator<=>(const Word& w) const {
        if (letters_.size() != w.letters_.size())
            return letters_.size() <=> w.letters_.size();
        return letters_ <=> w.letters_;
    }

    // Pure lexicographic order with the prefix property: a proper prefix
    // precedes any word extending it.  This is the order Lyndon words
    // minimize over their rotations.
    static bool lex_less(const Word& a, const Word& b) {
        return a.letters_ < b.letters_;
    }

    // "e" for the empty word, otherwise space-separated letters.
    std::string str() const {
        if (letters_.empty()) return "e";
        std::string s;
        for (std::size_t k = 0; k < letters_.size(); ++k) {
            if (k) s += ' ';
            s += std::to_string(letters_[k]);
        }
        return s;
    }

private:
    std::vector<int> letters_;
};

// All words over {1..M} of the given exact length, in lex order.
inline std::vector<Word> words_of_length(int M, int len) {
    std::vector<Word> out;
    std::vector<int> cur(static_cast<std::size_t>(len), 1);
    if (len == 0) {
        out.push_back(Word::empty());
        return out;
    }
    for (;;) {
        out.push_back(Word(cur));
        int k = len - 1;
        while (k >= 0 && cur[k] == M) cur[k--] = 1;
        if (k < 0) break;
        ++cur[k];
    }
    return out;
}

// All words of length <= maxlen in graded-lex order.
inline std::vector<Word> words_up_to(int M, int maxlen) {
    std::vector<Word> out;
    for (int n = 0; n <= maxlen; ++n) {
        auto layer = words_of_length(M, n);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace fliess
