#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpkernel/kernels.hpp"
#include "cpkernel/matrix.hpp"

namespace cpkernel {

/// Completely positive map given by a finite Kraus family:
/// T |-> sum_r A_r* T A_r.
struct CPMap {
  std::string label;
  std::vector<ComplexMatrix> kraus;

  Eigen::Index dim() const { return kraus.empty() ? 0 : kraus.front().rows(); }
};

using CPMapSet = std::map<std::string, CPMap>;

/// Word over map labels; composition is read left-to-right with the LAST
/// label applied first: K_w = Phi_{s_1} o ... o Phi_{s_n} (K).
using Word = std::vector<std::string>;

void check_cpmap(const CPMap& phi);
const CPMap& resolve(const CPMapSet& maps, const std::string& label);

ComplexMatrix apply(const CPMap& phi, const ComplexMatrix& t);

/// Phi(I) = sum_r A_r* A_r.
ComplexMatrix unit_image(const CPMap& phi);

/// ||Phi(I)||; for CP maps this equals the completely bounded norm.
double cb_norm(const CPMap& phi);

bool is_unital(const CPMap& phi, double tol = kPsdTol);
bool is_subunital(const CPMap& phi, double tol = kPsdTol);

/// Blockwise fold from the right: the last label of w acts first on every
/// block of K. The empty word returns K unchanged.
PDKernel iterate_kernel(const PDKernel& k, const Word& w, const CPMapSet& maps);

/// One block, same fold.
ComplexMatrix iterate_block(const ComplexMatrix& t, const Word& w, const CPMapSet& maps);

/// A Kraus index string for a word: per-position (label, kraus index) tags and
/// the right-to-left product A_{s_n,r_n} ... A_{s_1,r_1}. Strings from distinct
/// words never compare equal because the tags carry the labels.
struct KrausString {
  std::vector<std::pair<std::string, std::size_t>> tags;
  ComplexMatrix product;

  std::string key() const;
};

/// All Kraus strings of w in a fixed deterministic order.
/// ErrTooManyStrings when the count would exceed max_count.
std::vector<KrausString> kraus_strings(const Word& w, const CPMapSet& maps,
                                       std::size_t max_count);

/// Matrix of T |-> Phi(T) on column-stacked d x d inputs (d^2 x d^2). Prefix
/// products of these give all iterated kernels along a path in O(path length).
ComplexMatrix superop(const CPMap& phi);

}  // namespace cpkernel
