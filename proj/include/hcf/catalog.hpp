#ifndef HCF_CATALOG_HPP
#define HCF_CATALOG_HPP

//
// Standard example algebras. All constructors return validated descriptors.
//

#include <string>
#include <utility>
#include <vector>

#include "hcf/algebra.hpp"

namespace hcf {
namespace catalog {

// mu(Z1, Z2) = s Z3 on C^3.
inline Algebra heisenberg3(cplx s = 1.0) {
    Bracket mu(3);
    mu.set_entry(0, 1, 2, s);
    return Algebra(std::move(mu));
}

// mu(Z1,Z2) = a Z5, mu(Z3,Z4) = b Z5 on C^5.
inline Algebra weighted_h5(cplx a, cplx b) {
    Bracket mu(5);
    mu.set_entry(0, 1, 4, a);
    mu.set_entry(2, 3, 4, b);
    return Algebra(std::move(mu));
}

// Heisenberg algebra of odd dimension 2m+1: m generator pairs, one center.
inline Algebra heisenberg(int dim) {
    if (dim < 3 || dim % 2 == 0)
        throw ValidationError("bad_parameter", "heisenberg requires odd dimension >= 3");
    Bracket mu(dim);
    for (int i = 0; i < (dim - 1) / 2; ++i)
        mu.set_entry(2 * i, 2 * i + 1, dim - 1, 1.0);
    return Algebra(std::move(mu));
}

// Free 2-step algebra on m generators: dim m + m(m-1)/2,
// mu(Z_i, Z_j) = W_ij with one center direction per generator pair.
inline Algebra free_two_step(int m) {
    if (m < 1) throw ValidationError("bad_parameter", "free_two_step requires m >= 1");
    const int n = m + m * (m - 1) / 2;
    Bracket mu(n);
    int w = m;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            mu.set_entry(i, j, w++, 1.0);
    return Algebra(std::move(mu));
}

inline Algebra abelian(int n) {
    if (n < 1) throw ValidationError("bad_parameter", "abelian requires n >= 1");
    return Algebra(Bracket(n));
}

inline Algebra direct_sum(const Algebra& a, const Algebra& b) {
    const int na = a.dim(), nb = b.dim();
    Bracket mu(na + nb);
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j)
            for (int k = 0; k < na; ++k)
                if (a.bracket().entry(i, j, k) != 0.0)
                    mu.set_entry(i, j, k, a.bracket().entry(i, j, k));
    for (int i = 0; i < nb; ++i)
        for (int j = i + 1; j < nb; ++j)
            for (int k = 0; k < nb; ++k)
                if (b.bracket().entry(i, j, k) != 0.0)
                    mu.set_entry(na + i, na + j, na + k, b.bracket().entry(i, j, k));
    return Algebra(std::move(mu));
}

struct Entry {
    std::string name;
    Algebra algebra;
};

// Fixed non-abelian roster used by the verification suites.
inline std::vector<Entry> nonabelian_roster() {
    std::vector<Entry> out;
    out.push_back({"heisenberg3(1)", heisenberg3(1.0)});
    out.push_back({"heisenberg3(2)", heisenberg3(2.0)});
    out.push_back({"heisenberg3(0.3+0.4i)", heisenberg3(cplx(0.3, 0.4))});
    out.push_back({"weighted_h5(1,1)", weighted_h5(1.0, 1.0)});
    out.push_back({"weighted_h5(2,1)", weighted_h5(2.0, 1.0)});
    out.push_back({"weighted_h5(1+i,2)", weighted_h5(cplx(1, 1), 2.0)});
    out.push_back({"heisenberg(5)", heisenberg(5)});
    out.push_back({"heisenberg(7)", heisenberg(7)});
    out.push_back({"free_two_step(2)", free_two_step(2)});
    out.push_back({"free_two_step(3)", free_two_step(3)});
    out.push_back({"direct_sum(h3,h3)", direct_sum(heisenberg3(1.0), heisenberg3(1.0))});
    out.push_back({"direct_sum(h3(1),h3(2))", direct_sum(heisenberg3(1.0), heisenberg3(2.0))});
    out.push_back({"direct_sum(h3,abelian2)", direct_sum(heisenberg3(1.0), abelian(2))});
    return out;
}

}  // namespace catalog
}  // namespace hcf

#endif
