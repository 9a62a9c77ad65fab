#include "twistlift/braid.hpp"

namespace twistlift {

BraidWord BraidWord::concat(const BraidWord &other) const {
    BraidWord out(std::max(strands, other.strands), letters);
    for (int l : other.letters) {
        if (!out.letters.empty() && out.letters.back() == -l)
            out.letters.pop_back();
        else
            out.letters.push_back(l);
    }
    return out;
}

void FreeWord::reduce() {
    std::vector<int> out;
    for (int l : letters) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    letters = std::move(out);
}

FreeWord FreeWord::inverse() const {
    FreeWord out;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back(-*it);
    return out;
}

FreeWord FreeWord::concat(const FreeWord &other) const {
    FreeWord out;
    out.letters = letters;
    for (int l : other.letters) {
        if (!out.letters.empty() && out.letters.back() == -l)
            out.letters.pop_back();
        else
            out.letters.push_back(l);
    }
    return out;
}

namespace {

// Image of one meridian generator under sigma_i^{+-1}.
FreeWord gen_image(int braid_letter, int x) {
    int i = std::abs(braid_letter);
    if (braid_letter > 0) {
        if (x == i) return FreeWord({i, i + 1, -i});
        if (x == i + 1) return FreeWord({i});
    } else {
        if (x == i) return FreeWord({i + 1});
        if (x == i + 1) return FreeWord({-(i + 1), i, i + 1});
    }
    return FreeWord({x});
}

FreeWord substitute(int braid_letter, const FreeWord &w) {
    FreeWord out;
    for (int l : w.letters) {
        FreeWord img = gen_image(braid_letter, std::abs(l));
        if (l < 0) img = img.inverse();
        out = out.concat(img);
    }
    return out;
}

} // namespace

FreeWord artin_action(const BraidWord &b, const FreeWord &x) {
    for (int l : x.letters)
        if (std::abs(l) > b.strands)
            throw GeneratorOutOfRange("free word uses generator beyond strand count");
    for (int l : b.letters)
        if (l == 0 || std::abs(l) >= b.strands)
            throw GeneratorOutOfRange("braid letter out of range");
    FreeWord cur = x;
    for (int l : b.letters) cur = substitute(l, cur);
    return cur;
}

Perm underlying_permutation(const BraidWord &b) {
    Perm p(b.strands);
    for (int l : b.letters) {
        int i = std::abs(l);
        p = p.then(Perm::transposition(b.strands, i, i + 1));
    }
    return p;
}

Perm monodromy_of_word(const FreeWord &w, const CoverPresentation &pres) {
    Perm p(pres.degree);
    for (int l : w.letters) {
        int m = std::abs(l);
        if (m < 1 || m > pres.branch_count())
            throw GeneratorOutOfRange("meridian index out of range");
        p = p.then(pres.branches[size_t(m - 1)].as_perm(pres.degree));
    }
    return p;
}

bool is_liftable(const BraidWord &b, const CoverPresentation &pres) {
    if (b.strands != pres.branch_count())
        throw StrandMismatch("braid strand count differs from branch count");
    for (int m = 1; m <= pres.branch_count(); ++m) {
        FreeWord img = artin_action(b, FreeWord::generator(m));
        if (!(monodromy_of_word(img, pres) == pres.branches[size_t(m - 1)].as_perm(pres.degree)))
            return false;
    }
    return true;
}

int halftwist_power_liftable(const Transposition &m1, const Transposition &m2) {
    if (m1 == m2) return 1;
    bool share = m1.low == m2.low || m1.low == m2.high || m1.high == m2.low || m1.high == m2.high;
    return share ? 3 : 2;
}

BraidWord halftwist_to_word(const HalfTwistWord &h) {
    BraidWord core(h.conjugator.strands, {h.sign > 0 ? h.core : -h.core});
    return h.conjugator.concat(core).concat(h.conjugator.inverse());
}

nlohmann::json to_json(const BraidWord &b) {
    return nlohmann::json{{"strands", b.strands}, {"letters", b.letters}};
}

BraidWord braid_from_json(const nlohmann::json &j) {
    return BraidWord(j.at("strands").get<int>(), j.at("letters").get<std::vector<int>>());
}

nlohmann::json to_json(const HalfTwistWord &h) {
    return nlohmann::json{{"conjugator", to_json(h.conjugator)}, {"core", h.core}, {"sign", h.sign}};
}

HalfTwistWord halftwist_from_json(const nlohmann::json &j) {
    HalfTwistWord h;
    h.conjugator = braid_from_json(j.at("conjugator"));
    h.core = j.at("core").get<int>();
    h.sign = j.at("sign").get<int>();
    return h;
}

} // namespace twistlift
