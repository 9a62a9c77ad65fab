#pragma once

#include <gmpxx.h>
#include <string>
#include <stdexcept>

namespace twistlift {

// Exact rational scalar. All geometric predicates in the library are
// evaluated over these; floating point appears only in rendering.
using Rat = mpq_class;

inline Rat rat_parse(const std::string &s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat &q) {
    return q.get_str();
}

inline int sgn(const Rat &q) { return sgn(q.get_num()); }

} // namespace twistlift
