#pragma once

#include "twistlift/cover.hpp"

#include <json.hpp>
#include <vector>

namespace twistlift {

// Word in the Artin generators; letter +i / -i stands for sigma_i^{+-1}.
struct BraidWord {
    int strands = 2;
    std::vector<int> letters;

    BraidWord() = default;
    BraidWord(int n, std::vector<int> ls) : strands(n), letters(std::move(ls)) {}

    BraidWord inverse() const {
        BraidWord out(strands, {});
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back(-*it);
        return out;
    }
    BraidWord concat(const BraidWord &other) const; // free cancellation only
    bool operator==(const BraidWord &o) const { return strands == o.strands && letters == o.letters; }
};

// Freely reduced word in the meridian generators x_1..x_n.
struct FreeWord {
    std::vector<int> letters;

    FreeWord() = default;
    explicit FreeWord(std::vector<int> ls) : letters(std::move(ls)) { reduce(); }
    static FreeWord generator(int i) { return FreeWord({i}); }

    void reduce();
    FreeWord inverse() const;
    FreeWord concat(const FreeWord &other) const;
    bool operator==(const FreeWord &o) const { return letters == o.letters; }
};

// w sigma_k^{sign} w^{-1}.
struct HalfTwistWord {
    BraidWord conjugator;
    int core = 1;
    int sign = +1;
};

// Standard Artin action: sigma_i sends x_i -> x_i x_{i+1} x_i^{-1},
// x_{i+1} -> x_i, and fixes the rest. Letters act left to right, so the
// action of a concatenation is the composition of the actions.
FreeWord artin_action(const BraidWord &b, const FreeWord &x);

Perm underlying_permutation(const BraidWord &b);

// Monodromy of a free word: branch transpositions multiplied in letter
// order (inverse letters give the same transposition).
Perm monodromy_of_word(const FreeWord &w, const CoverPresentation &pres);

// Lifting criterion: the braid lifts iff it fixes the monodromy of every
// meridian generator.
bool is_liftable(const BraidWord &b, const CoverPresentation &pres);

// Smallest e in {1,2,3} with t_alpha^e liftable, from the path-conjugated
// endpoint monodromies of the arc.
int halftwist_power_liftable(const Transposition &m1, const Transposition &m2);

BraidWord halftwist_to_word(const HalfTwistWord &h);

nlohmann::json to_json(const BraidWord &b);
BraidWord braid_from_json(const nlohmann::json &j);
nlohmann::json to_json(const HalfTwistWord &h);
HalfTwistWord halftwist_from_json(const nlohmann::json &j);

} // namespace twistlift
