#pragma once

#include <string>
#include <vector>

#include "cgreat/core/errors.hpp"
#include "cgreat/core/types.hpp"

namespace cgreat::minimal {

/// Irrational rotation number given by continued-fraction coefficients
/// [0; a_1, ..., a_k] whose last coefficient repeats forever, so the value is
/// a quadratic irrational. {1} is the golden mean (sqrt 5 - 1) / 2.
struct RotationNumber {
    std::vector<int> coefficients{1};

    Real value() const;
    /// Denominators q_n of the first `count` convergents p_n / q_n.
    std::vector<long> convergent_denominators(std::size_t count) const;
    std::vector<long> expanded(std::size_t count) const;
};

/// Finite word over {l, r}; the first digit selects the child of the root.
struct Word {
    std::string digits;

    std::size_t size() const { return digits.size(); }
    static Word from_string(const std::string& s);
    /// The level-n word whose digits are the binary digits of index (msb first, 0 = l).
    static Word from_index(std::size_t n, std::size_t index);
    std::size_t index() const;
};

class RecurrenceViolation : public Error {
public:
    RecurrenceViolation(int level, std::string word, long k, std::string detail)
        : Error(ErrorKind::RecurrenceViolation, detail), level(level), word(std::move(word)), k(k) {}
    int level;
    std::string word;
    long k;
};

struct RecurrenceCheck {
    int level = 0;
    long k_max = 0;       // |k| range actually scanned
    bool capped = false;  // true if k_max < 2^(2^n)
    Real min_clearance = 0;  // smallest gap between a translate and an interval
};

struct TreeOptions {
    long k_cap = 100000;
    Real margin = 1e-13L;
};

/// Nested intervals I_w of length 2^-m_n for words of length n <= depth.
class IntervalTree {
public:
    IntervalTree(RotationNumber alpha, std::vector<int> m_seq, int depth, const TreeOptions& opts = {});

    Real alpha() const { return alpha_; }
    const RotationNumber& rotation() const { return rotation_; }
    int depth() const { return depth_; }
    const std::vector<int>& m_seq() const { return m_seq_; }
    Real length(int level) const;

    const Interval& interval(const Word& w) const;
    const std::vector<Interval>& level(int n) const { return levels_[static_cast<std::size_t>(n)]; }
    const std::vector<RecurrenceCheck>& recurrence() const { return recurrence_; }

private:
    void check_recurrence(const TreeOptions& opts);

    RotationNumber rotation_;
    Real alpha_;
    std::vector<int> m_seq_;
    int depth_;
    std::vector<std::vector<Interval>> levels_;
    std::vector<RecurrenceCheck> recurrence_;
};

/// Left and right child centres: a + 3/8 (b - a) and a + 5/8 (b - a).
Real left_point(const Interval& iv);
Real right_point(const Interval& iv);

IntervalTree build_tree(const RotationNumber& alpha, const std::vector<int>& m_seq, int depth,
                        const TreeOptions& opts = {});

/// build_tree, raising m_n by 2 (and later levels to keep the gaps) after a
/// recurrence violation at level n, until m reaches `m_cap`.
IntervalTree build_tree_escalating(const RotationNumber& alpha, std::vector<int> m_seq, int depth,
                                   int m_cap = 40, const TreeOptions& opts = {});

/// Exhaustive |k| range for level n: 2^(2^n), capped.
long recurrence_range(int level, long cap);

}  // namespace cgreat::minimal
