#pragma once
// Finite symmetries of the second-order theta coordinates: diagonal and
// Fourier generators, admissible monomials, AGL(g,F2) orbit sums, the
// half-weight invariant basis, and the degree-16 relation among the eight
// genus-3 coordinates.

#include "tb/bits.hpp"
#include "tb/poly.hpp"

#include <vector>

namespace tb {

struct ActionMatrix {
  std::string label;
  std::vector<std::vector<QI>> m;  // 2^g x 2^g over Q(i)
};

// diagonal action a -> i^(aSa) x_a for integral symmetric S
ActionMatrix action_matrix_ds(int g, const std::vector<std::vector<long>>& S);
// Fourier-type generator ((1+i)/2)^g ((-1)^{<a,b>})
ActionMatrix action_matrix_tg(int g);

// exponent assignment e over x_a, a in F2^g: invariant under every DS(S),
// checked on the elementary basis (diagonal masses mod 4, pair masses mod 2)
bool is_admissible(const ExpVec& e, int g);

// descending multiplicity string of an assignment (orbit label data)
std::vector<int> mult_string(const ExpVec& e);

// sum of the monomial orbit under variable relabeling by AGL(g,F2)
SparsePoly orbit_sum(const ExpVec& e, int g);

// orbit sums of all admissible monomials of the given degree; for (3,12)
// this is pinned to the six half-weight basis elements
std::vector<SparsePoly> invariant_basis(int g, int degree);

// the z=0 square table: even (eps,delta) -> sum_s (-1)^{d.s} x_s x_{s+e};
// validated numerically at seeded points before first symbolic use
std::vector<std::pair<Characteristic, SparsePoly>> square_table(int g);

enum class SchottkyRepr { FirstOrder, SecondOrder };

// degree-16 relation: FirstOrder in the 36 even constants, SecondOrder in
// the 8 coordinates via the square table
SparsePoly schottky_poly(SchottkyRepr repr);

}  // namespace tb
