#ifndef MATRANGE_HERM_VEC_HPP
#define MATRANGE_HERM_VEC_HPP

#include "matrange/types.hpp"

namespace matrange {

// Isometric coordinates for n x n Hermitian matrices: the n diagonal entries,
// then √2·Re h_ij and √2·Im h_ij for i < j. Euclidean inner products of the
// vectors equal Re tr(h* g).
RVector herm_to_vec(const CMatrix& h);
CMatrix vec_to_herm(const Eigen::Ref<const RVector>& v, Eigen::Index n);

}  // namespace matrange

#endif  // MATRANGE_HERM_VEC_HPP
