#include "cpkernel/channels.hpp"

#include <algorithm>

namespace cpkernel {

void check_cpmap(const CPMap& phi) {
  if (phi.kraus.empty())
    throw Error(errc::dimension_mismatch, "cpmap '" + phi.label + "': empty Kraus family");
  const Eigen::Index d = phi.kraus.front().rows();
  for (const auto& a : phi.kraus) {
    if (a.rows() != d || a.cols() != d)
      throw Error(errc::dimension_mismatch,
                  "cpmap '" + phi.label + "': Kraus operators are not square of equal size");
    if (!all_finite(a))
      throw Error(errc::numerical, "cpmap '" + phi.label + "': non-finite Kraus entries");
  }
}

const CPMap& resolve(const CPMapSet& maps, const std::string& label) {
  auto it = maps.find(label);
  if (it == maps.end()) throw Error(errc::unknown_label, "no CP map with label '" + label + "'");
  return it->second;
}

ComplexMatrix apply(const CPMap& phi, const ComplexMatrix& t) {
  check_cpmap(phi);
  const Eigen::Index d = phi.dim();
  if (t.rows() != d || t.cols() != d)
    throw Error(errc::dimension_mismatch, "apply: argument is not " + std::to_string(d) + "x" +
                                              std::to_string(d));
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& a : phi.kraus) out += a.adjoint() * t * a;
  return out;
}

ComplexMatrix unit_image(const CPMap& phi) {
  check_cpmap(phi);
  const Eigen::Index d = phi.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& a : phi.kraus) out += a.adjoint() * a;
  return hermitian_part(out);
}

double cb_norm(const CPMap& phi) { return op_norm(unit_image(phi)); }

bool is_unital(const CPMap& phi, double tol) {
  const Eigen::Index d = phi.dim();
  return op_norm(unit_image(phi) - ComplexMatrix::Identity(d, d)) <= tol;
}

bool is_subunital(const CPMap& phi, double tol) {
  const Eigen::Index d = phi.dim();
  const HermitianEigen eig = hermitian_eigen(unit_image(phi) - ComplexMatrix::Identity(d, d));
  return eig.values(eig.values.size() - 1) <= tol;
}

ComplexMatrix iterate_block(const ComplexMatrix& t, const Word& w, const CPMapSet& maps) {
  ComplexMatrix out = t;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = apply(resolve(maps, *it), out);
  return out;
}

PDKernel iterate_kernel(const PDKernel& k, const Word& w, const CPMapSet& maps) {
  for (const auto& label : w) {
    const CPMap& phi = resolve(maps, label);
    check_cpmap(phi);
    if (phi.dim() != k.fiber_dim)
      throw Error(errc::dimension_mismatch,
                  "iterate_kernel: map '" + label + "' does not act on the kernel fiber");
  }
  PDKernel out = k;
  for (Eigen::Index i = 0; i < k.point_count(); ++i)
    for (Eigen::Index j = 0; j < k.point_count(); ++j)
      out.blocks[i][j] = iterate_block(k.blocks[i][j], w, maps);
  return out;
}

std::string KrausString::key() const {
  std::string out;
  for (const auto& [label, idx] : tags) {
    if (!out.empty()) out += '|';
    out += label;
    out += ':';
    out += std::to_string(idx);
  }
  return out;
}

std::vector<KrausString> kraus_strings(const Word& w, const CPMapSet& maps,
                                       std::size_t max_count) {
  Eigen::Index d = 0;
  std::size_t count = 1;
  for (const auto& label : w) {
    const CPMap& phi = resolve(maps, label);
    check_cpmap(phi);
    d = phi.dim();
    if (count > max_count / std::max<std::size_t>(phi.kraus.size(), 1))
      throw Error(errc::too_many_strings, "kraus_strings: more than " +
                                              std::to_string(max_count) + " index strings");
    count *= phi.kraus.size();
  }
  if (count > max_count)
    throw Error(errc::too_many_strings,
                "kraus_strings: more than " + std::to_string(max_count) + " index strings");
  if (w.empty()) {
    // The empty word contributes the single empty string with product I; the
    // dimension is unknown without context, so take it from any declared map.
    if (!maps.empty()) d = maps.begin()->second.dim();
    KrausString s;
    s.product = ComplexMatrix::Identity(d, d);
    return {std::move(s)};
  }

  const std::size_t n = w.size();
  std::vector<const CPMap*> phis(n);
  for (std::size_t j = 0; j < n; ++j) phis[j] = &resolve(maps, w[j]);

  std::vector<KrausString> out;
  out.reserve(count);
  std::vector<std::size_t> idx(n, 0);  // idx[j] picks r_{j+1} in I(s_{j+1})
  while (true) {
    KrausString s;
    s.tags.reserve(n);
    ComplexMatrix prod = ComplexMatrix::Identity(d, d);
    // Product right-to-left: A_{s_n,r_n} ... A_{s_1,r_1}.
    for (std::size_t j = 0; j < n; ++j) {
      s.tags.emplace_back(w[j], idx[j]);
      prod = prod * phis[n - 1 - j]->kraus[idx[n - 1 - j]];
    }
    s.product = std::move(prod);
    out.push_back(std::move(s));

    // Odometer with the last position fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < phis[pos]->kraus.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

ComplexMatrix superop(const CPMap& phi) {
  check_cpmap(phi);
  const Eigen::Index d = phi.dim();
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  // vec(A* T A) = (A^T kron A*) vec(T) for column-stacked vec, with A* the
  // conjugate transpose.
  for (const auto& a : phi.kraus) {
    const ComplexMatrix at = a.transpose();
    const ComplexMatrix adj = a.adjoint();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        s.block(i * d, j * d, d, d) += at(i, j) * adj;
  }
  return s;
}

}  // namespace cpkernel
