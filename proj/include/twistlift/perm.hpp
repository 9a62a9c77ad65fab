#pragma once

#include <vector>
#include <algorithm>

namespace twistlift {

// Permutation of {1..d}, stored as images (1-based; img[0] unused).
class Perm {
public:
    explicit Perm(int d = 0) : img_(d + 1) {
        for (int i = 0; i <= d; ++i) img_[i] = i;
    }
    int degree() const { return int(img_.size()) - 1; }
    int operator()(int i) const { return img_[i]; }
    int &at(int i) { return img_[i]; }

    static Perm transposition(int d, int a, int b) {
        Perm p(d);
        p.img_[a] = b;
        p.img_[b] = a;
        return p;
    }

    // q.then(r): apply q first, then r.
    Perm then(const Perm &r) const {
        Perm out(degree());
        for (int i = 1; i <= degree(); ++i) out.img_[i] = r(img_[i]);
        return out;
    }

    Perm inverse() const {
        Perm out(degree());
        for (int i = 1; i <= degree(); ++i) out.img_[img_[i]] = i;
        return out;
    }

    bool is_identity() const {
        for (int i = 1; i <= degree(); ++i)
            if (img_[i] != i) return false;
        return true;
    }

    bool operator==(const Perm &o) const { return img_ == o.img_; }

    // Cycle lengths, descending.
    std::vector<int> cycle_type() const {
        std::vector<bool> seen(degree() + 1, false);
        std::vector<int> lens;
        for (int i = 1; i <= degree(); ++i) {
            if (seen[i]) continue;
            int len = 0, j = i;
            while (!seen[j]) { seen[j] = true; j = img_[j]; ++len; }
            lens.push_back(len);
        }
        std::sort(lens.rbegin(), lens.rend());
        return lens;
    }

private:
    std::vector<int> img_;
};

} // namespace twistlift
