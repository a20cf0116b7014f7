#pragma once

#include <cstdint>
#include <vector>

namespace shiftlab::modn {

using Vec = std::vector<long>;      // entries reduced into [0, n)
using Mat = std::vector<Vec>;       // list of rows

long normalize(long x, long n);

// Canonical (Howell) generating matrix of the row span of m inside Z_n^cols.
// Rows have strictly increasing pivot columns; each pivot entry divides n;
// entries above a pivot are reduced modulo it.  Unique per submodule, so
// row spans compare by comparing forms.
Mat howell_form(Mat m, long cols, long n);

// All x in Z_n^cols with a·x ≡ 0 (mod n) for every row a, as a Howell form.
// Computed by integer elimination on [A | n·I] (Smith-style column
// reduction), then projected back mod n.
Mat kernel(const Mat& a, long cols, long n);

// Number of elements of the subgroup generated by the rows of a Howell form.
std::uint64_t subgroup_order(const Mat& howell, long n);

bool member(const Vec& x, const Mat& howell, long n);

// Intersection of two row spans (given in any generating form), as a Howell
// form; computed through duals: S1 ∩ S2 = (S1⊥ + S2⊥)⊥.
Mat intersect(const Mat& gens1, const Mat& gens2, long cols, long n);

}  // namespace shiftlab::modn
