#include "twistlift/oracle.hpp"

#include <array>

namespace twistlift {

namespace {

// Tuple-side transposition, kept separate from twistlift::Transposition's
// helpers on purpose: the oracle path composes nothing with Perm.
struct TPair {
    int a, b; // unordered support
    bool operator==(const TPair &o) const {
        return (a == o.a && b == o.b) || (a == o.b && b == o.a);
    }
};

int pair_apply(const TPair &t, int x) {
    if (x == t.a) return t.b;
    if (x == t.b) return t.a;
    return x;
}

// t u t, computed by relabelling the support of u through t.
TPair pair_conj(const TPair &t, const TPair &u) {
    return TPair{pair_apply(t, u.a), pair_apply(t, u.b)};
}

// Letters are consumed right to left so that the tuple action composes the
// same way as the free-group substitution on the braid side.
bool hurwitz_fixes(const std::vector<int> &letters, std::vector<TPair> tuple) {
    const std::vector<TPair> original = tuple;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        int l = *it;
        size_t i = size_t(std::abs(l)) - 1;
        TPair left = tuple[i], right = tuple[i + 1];
        if (l > 0) {
            tuple[i] = pair_conj(left, right);
            tuple[i + 1] = left;
        } else {
            tuple[i] = right;
            tuple[i + 1] = pair_conj(right, left);
        }
    }
    for (size_t i = 0; i < tuple.size(); ++i)
        if (!(tuple[i] == original[i])) return false;
    return true;
}

std::vector<TPair> branch_tuple(const CoverPresentation &pres) {
    std::vector<TPair> tuple;
    for (const Transposition &t : pres.branches) tuple.push_back(TPair{t.low, t.high});
    return tuple;
}

} // namespace

bool hurwitz_liftable(const BraidWord &b, const CoverPresentation &pres) {
    if (b.strands != pres.branch_count())
        throw StrandMismatch("braid strand count differs from branch count");
    return hurwitz_fixes(b.letters, branch_tuple(pres));
}

namespace {

// Words of exactly `len` letters starting with `first`, in lexicographic
// letter order (1, -1, 2, -2, ...). Checks both oracles on each word.
void enumerate_from(const CoverPresentation &pres, int n, int len, std::vector<int> &word,
                    std::vector<BraidWord> &out) {
    if (int(word.size()) == len) {
        BraidWord b(n, word);
        bool lift = is_liftable(b, pres);
        bool hur = hurwitz_liftable(b, pres);
        if (lift != hur)
            throw InternalInvariant("liftability oracles disagree on a word");
        if (lift) out.push_back(b);
        return;
    }
    for (int g = 1; g < n; ++g) {
        for (int s : {+1, -1}) {
            word.push_back(s * g);
            enumerate_from(pres, n, len, word, out);
            word.pop_back();
        }
    }
}

void check_guard(const CoverPresentation &pres, int max_len) {
    if (pres.branch_count() > 5 || max_len > 6)
        throw TooLarge("enumerate_liftable guarded to n <= 5, maxLen <= 6");
    if (max_len < 0) throw TooLarge("negative word length");
}

} // namespace

std::vector<BraidWord> enumerate_liftable_serial(const CoverPresentation &pres, int max_len) {
    check_guard(pres, max_len);
    int n = pres.branch_count();
    std::vector<BraidWord> out;
    out.emplace_back(n, std::vector<int>{});
    for (int len = 1; len <= max_len; ++len) {
        std::vector<int> word;
        enumerate_from(pres, n, len, word, out);
    }
    return out;
}

std::vector<BraidWord> enumerate_liftable(const CoverPresentation &pres, int max_len) {
    check_guard(pres, max_len);
    int n = pres.branch_count();
    std::vector<BraidWord> out;
    out.emplace_back(n, std::vector<int>{});
    if (n < 2) return out;

    // first letters in lexicographic order; parallel over prefixes with
    // per-prefix buckets so the result order matches the serial path
    std::vector<int> firsts;
    for (int g = 1; g < n; ++g) {
        firsts.push_back(g);
        firsts.push_back(-g);
    }
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<BraidWord>> buckets(firsts.size());
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
        for (size_t fi = 0; fi < firsts.size(); ++fi) {
            try {
                std::vector<int> word{firsts[fi]};
                enumerate_from(pres, n, len, word, buckets[fi]);
            } catch (...) {
#pragma omp critical
                err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        for (auto &b : buckets) out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

nlohmann::json to_json(const VerificationReport &r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto &c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    return nlohmann::json{{"overall", r.overall}, {"checks", checks}};
}

} // namespace twistlift
