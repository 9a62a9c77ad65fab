#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistlift/braid.hpp"

#include <random>

using namespace twistlift;

static CoverPresentation make(int d, std::vector<std::pair<int, int>> br) {
    CoverPresentation p;
    p.degree = d;
    for (auto [a, b] : br) p.branches.emplace_back(a, b);
    return p;
}

static const CoverPresentation annulus = make(2, {{1, 2}, {1, 2}});
static const CoverPresentation disk3 = make(3, {{1, 2}, {2, 3}});

TEST_CASE("artin action on generators") {
    BraidWord id(3, {});
    CHECK(artin_action(id, FreeWord::generator(2)) == FreeWord::generator(2));

    BraidWord s1(3, {1});
    CHECK(artin_action(s1, FreeWord::generator(1)) == FreeWord({1, 2, -1}));
    CHECK(artin_action(s1, FreeWord::generator(2)) == FreeWord({1}));
    CHECK(artin_action(s1, FreeWord::generator(3)) == FreeWord({3}));

    BraidWord inv_then(3, {-1, 1});
    FreeWord x12({1, 2});
    CHECK(artin_action(inv_then, x12) == x12);
}

TEST_CASE("action of concatenation equals composition") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 3 + int(rng() % 3);
        auto rand_word = [&](int len) {
            BraidWord w(n, {});
            for (int i = 0; i < len; ++i) {
                int g = 1 + int(rng() % unsigned(n - 1));
                w.letters.push_back(rng() % 2 ? g : -g);
            }
            return w;
        };
        BraidWord u = rand_word(int(rng() % 4)), v = rand_word(int(rng() % 4));
        for (int m = 1; m <= n; ++m) {
            FreeWord x = FreeWord::generator(m);
            CHECK(artin_action(u.concat(v), x) == artin_action(v, artin_action(u, x)));
        }
    }
}

TEST_CASE("braid relations hold under artin_action, exhaustively for n <= 5") {
    for (int n = 2; n <= 5; ++n) {
        for (int i = 1; i < n; ++i) {
            for (int j = 1; j < n; ++j) {
                BraidWord lhs(n, {}), rhs(n, {});
                if (std::abs(i - j) > 1) {
                    lhs.letters = {i, j};
                    rhs.letters = {j, i};
                } else if (std::abs(i - j) == 1) {
                    lhs.letters = {i, j, i};
                    rhs.letters = {j, i, j};
                } else {
                    continue;
                }
                for (int m = 1; m <= n; ++m) {
                    FreeWord x = FreeWord::generator(m);
                    CHECK(artin_action(lhs, x) == artin_action(rhs, x));
                }
            }
        }
    }
}

TEST_CASE("underlying permutation") {
    CHECK(underlying_permutation(BraidWord(3, {1})) == Perm::transposition(3, 1, 2));
    // sigma1 sigma2 sigma1 = (1 3); equal to sigma2 sigma1 sigma2 by the braid relation
    auto p = underlying_permutation(BraidWord(3, {1, 2, 1}));
    CHECK(p == Perm::transposition(3, 1, 3));
    CHECK(p == underlying_permutation(BraidWord(3, {2, 1, 2})));
    CHECK(underlying_permutation(BraidWord(4, {})).is_identity());
}

TEST_CASE("is_liftable") {
    CHECK(is_liftable(BraidWord(2, {1}), annulus));
    CHECK(!is_liftable(BraidWord(2, {1}), disk3));
    CHECK(is_liftable(BraidWord(2, {}), disk3));
    CHECK(is_liftable(BraidWord(2, {1, 1, 1}), disk3)); // sigma_1^3 lifts
    CHECK(!is_liftable(BraidWord(2, {1, 1}), disk3));
    CHECK_THROWS_AS(is_liftable(BraidWord(3, {1}), annulus), StrandMismatch);
}

TEST_CASE("liftable words form a subgroup (sampled)") {
    std::mt19937 rng(5);
    auto pres = make(3, {{1, 2}, {2, 3}, {1, 3}});
    std::vector<BraidWord> liftable;
    for (int iter = 0; iter < 2000 && liftable.size() < 40; ++iter) {
        BraidWord w(3, {});
        int len = 1 + int(rng() % 5);
        for (int i = 0; i < len; ++i) {
            int g = 1 + int(rng() % 2u);
            w.letters.push_back(rng() % 2 ? g : -g);
        }
        if (is_liftable(w, pres)) liftable.push_back(w);
    }
    REQUIRE(liftable.size() >= 2);
    for (size_t i = 0; i + 1 < liftable.size(); i += 2) {
        CHECK(is_liftable(liftable[i].concat(liftable[i + 1]), pres));
        CHECK(is_liftable(liftable[i].inverse(), pres));
    }
}

TEST_CASE("halftwist power law") {
    CHECK(halftwist_power_liftable(Transposition(1, 2), Transposition(1, 2)) == 1);
    CHECK(halftwist_power_liftable(Transposition(1, 2), Transposition(3, 4)) == 2);
    CHECK(halftwist_power_liftable(Transposition(1, 2), Transposition(2, 3)) == 3);
}

TEST_CASE("halftwist_to_word") {
    HalfTwistWord h1{BraidWord(3, {}), 1, +1};
    CHECK(halftwist_to_word(h1) == BraidWord(3, {1}));

    HalfTwistWord h2{BraidWord(3, {2}), 1, +1};
    CHECK(halftwist_to_word(h2) == BraidWord(3, {2, 1, -2}));

    HalfTwistWord h3{BraidWord(3, {1}), 1, -1};
    CHECK(halftwist_to_word(h3) == BraidWord(3, {-1}));

    // underlying permutation of any half-twist word is a transposition
    std::mt19937 rng(3);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 3 + int(rng() % 3);
        HalfTwistWord h;
        h.conjugator = BraidWord(n, {});
        int len = int(rng() % 6);
        for (int i = 0; i < len; ++i) {
            int g = 1 + int(rng() % unsigned(n - 1));
            h.conjugator.letters.push_back(rng() % 2 ? g : -g);
        }
        h.core = 1 + int(rng() % unsigned(n - 1));
        h.sign = rng() % 2 ? +1 : -1;
        auto p = underlying_permutation(halftwist_to_word(h));
        int moved = 0;
        for (int s = 1; s <= n; ++s)
            if (p(s) != s) ++moved;
        CHECK(moved == 2);
        CHECK(p.then(p).is_identity());
    }
}

TEST_CASE("braid json round trip") {
    BraidWord w(4, {1, -2, 1});
    CHECK(braid_from_json(to_json(w)) == w);
    CHECK(to_json(w)["letters"] == nlohmann::json({1, -2, 1}));
}
