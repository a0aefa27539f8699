#include "cgreat/minimal/interval_tree.hpp"

#include <cmath>
#include <sstream>

namespace cgreat::minimal {

Real RotationNumber::value() const {
    if (coefficients.empty()) throw Error(ErrorKind::Config, "rotation number needs coefficients");
    for (int a : coefficients)
        if (a < 1) throw Error(ErrorKind::Config, "continued fraction coefficients must be >= 1");
    Real a = coefficients.back();
    // periodic tail t = a + 1/t
    Real t = (a + std::sqrt(a * a + 4)) / 2;
    for (std::size_t i = coefficients.size() - 1; i-- > 0;) t = coefficients[i] + 1 / t;
    return 1 / t;
}

std::vector<long> RotationNumber::expanded(std::size_t count) const {
    std::vector<long> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(i < coefficients.size() ? coefficients[i] : coefficients.back());
    return out;
}

std::vector<long> RotationNumber::convergent_denominators(std::size_t count) const {
    std::vector<long> q{1};
    long prev = 0;
    for (long a : expanded(count)) {
        long next = a * q.back() + prev;
        prev = q.back();
        q.push_back(next);
    }
    return q;
}

Word Word::from_string(const std::string& s) {
    for (char c : s)
        if (c != 'l' && c != 'r') throw Error(ErrorKind::Precondition, "word digits must be l or r");
    return Word{s};
}

Word Word::from_index(std::size_t n, std::size_t index) {
    std::string s(n, 'l');
    for (std::size_t i = 0; i < n; ++i)
        if (index & (std::size_t(1) << (n - 1 - i))) s[i] = 'r';
    return Word{s};
}

std::size_t Word::index() const {
    std::size_t idx = 0;
    for (char c : digits) idx = (idx << 1) | (c == 'r' ? 1u : 0u);
    return idx;
}

Real left_point(const Interval& iv) { return iv.lo + Real(3) / 8 * (iv.hi - iv.lo); }
Real right_point(const Interval& iv) { return iv.lo + Real(5) / 8 * (iv.hi - iv.lo); }

long recurrence_range(int level, long cap) {
    if (level >= 5) return cap;  // 2^32 and beyond
    long full = 1L << (1L << level);
    return std::min(full, cap);
}

IntervalTree::IntervalTree(RotationNumber alpha, std::vector<int> m_seq, int depth, const TreeOptions& opts)
    : rotation_(std::move(alpha)), alpha_(rotation_.value()), m_seq_(std::move(m_seq)), depth_(depth) {
    if (depth_ < 0) throw Error(ErrorKind::Precondition, "depth must be >= 0");
    if (m_seq_.size() < static_cast<std::size_t>(depth_) + 1)
        throw Error(ErrorKind::Precondition, "m_seq needs depth + 1 entries");
    for (std::size_t i = 1; i < m_seq_.size(); ++i)
        if (m_seq_[i] <= m_seq_[i - 1]) throw Error(ErrorKind::Precondition, "m_seq must be strictly increasing");
    for (int n = 0; n < depth_; ++n) {
        // siblings are |I|/4 apart, so they are disjoint iff 2^-m_{n+1} < |I|/4
        if (!(length(n + 1) < length(n) / 4)) {
            std::ostringstream os;
            os << "siblings overlap at level " << n + 1 << ": m_" << n + 1 << " = " << m_seq_[n + 1]
               << " needs to exceed m_" << n << " + 2";
            throw Error(ErrorKind::SiblingOverlap, os.str());
        }
    }
    Real h0 = length(0) / 2;
    levels_.push_back({Interval{-h0, h0}});
    for (int n = 1; n <= depth_; ++n) {
        Real h = length(n) / 2;
        std::vector<Interval> next;
        next.reserve(levels_.back().size() * 2);
        for (const Interval& parent : levels_.back()) {
            Real cl = left_point(parent), cr = right_point(parent);
            next.push_back({cl - h, cl + h});
            next.push_back({cr - h, cr + h});
        }
        levels_.push_back(std::move(next));
    }
    check_recurrence(opts);
}

Real IntervalTree::length(int level) const {
    return std::ldexp(Real(1), -m_seq_[static_cast<std::size_t>(level)]);
}

const Interval& IntervalTree::interval(const Word& w) const {
    if (w.size() > static_cast<std::size_t>(depth_))
        throw Error(ErrorKind::Precondition, "word longer than tree depth");
    return levels_[w.size()][w.index()];
}

void IntervalTree::check_recurrence(const TreeOptions& opts) {
    Real root_half = length(0) / 2;
    for (int n = 0; n <= depth_; ++n) {
        RecurrenceCheck rc;
        rc.level = n;
        rc.k_max = recurrence_range(n, opts.k_cap);
        rc.capped = n >= 5 || rc.k_max < (1L << (1L << n));
        rc.min_clearance = INFINITY;
        const auto& ivs = levels_[static_cast<std::size_t>(n)];
        Real len = length(n);
        for (long k = 1; k <= rc.k_max; ++k) {
            Real shift = wrap(static_cast<Real>(k) * alpha_);
            // every level-n interval lies inside the root interval
            if (std::fabs(shift) > 2 * root_half + opts.margin) {
                rc.min_clearance = std::min(rc.min_clearance, std::fabs(shift) - 2 * root_half);
                continue;
            }
            for (long sgn : {1L, -1L}) {
                for (std::size_t a = 0; a < ivs.size(); ++a) {
                    for (std::size_t b = 0; b < ivs.size(); ++b) {
                        Real d = std::fabs(wrap(ivs[a].center() + sgn * shift - ivs[b].center()));
                        Real clearance = d - len;
                        rc.min_clearance = std::min(rc.min_clearance, clearance);
                        if (clearance <= opts.margin) {
                            std::ostringstream os;
                            os << "I_" << Word::from_index(n, a).digits << " + " << sgn * k
                               << " alpha meets I_" << Word::from_index(n, b).digits << " at level " << n;
                            throw RecurrenceViolation(n, Word::from_index(n, a).digits, sgn * k, os.str());
                        }
                    }
                }
            }
        }
        recurrence_.push_back(rc);
    }
}

IntervalTree build_tree(const RotationNumber& alpha, const std::vector<int>& m_seq, int depth,
                        const TreeOptions& opts) {
    if (depth < 1) throw Error(ErrorKind::Precondition, "build_tree needs depth >= 1");
    return IntervalTree(alpha, m_seq, depth, opts);
}

IntervalTree build_tree_escalating(const RotationNumber& alpha, std::vector<int> m_seq, int depth,
                                   int m_cap, const TreeOptions& opts) {
    for (;;) {
        try {
            return IntervalTree(alpha, m_seq, depth, opts);
        } catch (const RecurrenceViolation& v) {
            std::size_t n = static_cast<std::size_t>(v.level);
            m_seq[n] += 2;
            for (std::size_t i = n + 1; i < m_seq.size(); ++i) m_seq[i] = std::max(m_seq[i], m_seq[i - 1] + 3);
            if (m_seq.back() > m_cap) throw;
        }
    }
}

}  // namespace cgreat::minimal
