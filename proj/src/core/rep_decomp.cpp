#include "rep_decomp.hpp"

#include "errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace spencer {

namespace {

std::vector<std::vector<Rational>> invert(const std::vector<std::vector<int>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) throw UsageError("singular Cartan matrix");
    std::swap(m[p], m[c]);
    const Rational inv = 1 / m[c][c];
    for (auto& x : m[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = m[i][n + j];
  return out;
}

Weight monomial_weight(const LieAlgebra& algebra, std::span<const std::uint16_t> m) {
  Weight w(algebra.rank(), 0);
  for (auto b : m)
    for (int i = 0; i < algebra.rank(); ++i) w[i] += algebra.basis_weights()[b][i];
  return w;
}

const RootSystem& roots_of(const LieAlgebra& algebra) {
  if (!algebra.roots()) throw UsageError("algebra " + algebra.label() + " carries no root data");
  return *algebra.roots();
}

}  // namespace

SymElement ad_action_on_sym(const LieAlgebra& algebra, const Combination& x, const SymElement& s) {
  if (s.ambient_dim != algebra.dim()) throw UsageError("element does not belong to " + algebra.label());
  SymElement out = SymElement::zero(s.ambient_dim, s.degree);
  std::vector<Combination> cache(algebra.dim());
  std::vector<bool> cached(algebra.dim(), false);
  Monomial scratch;
  for (const auto& [m, coef] : s.terms)
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!cached[m[j]]) {
        cache[m[j]] = algebra.bracket(x, Combination{{m[j], Rational(1)}});
        cached[m[j]] = true;
      }
      for (const auto& [t, c] : cache[m[j]]) {
        scratch = m;
        scratch[j] = static_cast<std::uint16_t>(t);
        std::sort(scratch.begin(), scratch.end());
        out.add(scratch, coef * c);
      }
    }
  return out;
}

SubmoduleReport is_g_submodule(const LieAlgebra& algebra, const KernelBasis& kb, std::size_t max_listed) {
  SubmoduleReport r;
  if (kb.vectors.empty()) return r;
  const MonomialIndexer idx(kb.ambient_dim, kb.k);
  std::unordered_map<std::uint64_t, std::size_t> free_pos;
  for (std::size_t j = 0; j < kb.free_columns.size(); ++j) free_pos[kb.free_columns[j]] = j;
  std::vector<SymElement> elements;
  for (std::size_t i = 0; i < kb.vectors.size(); ++i) elements.push_back(kb.element(i));
  for (std::uint32_t x = 0; x < algebra.dim(); ++x) {
    const Combination gen{{x, Rational(1)}};
    for (std::uint32_t i = 0; i < elements.size(); ++i) {
      ++r.checked;
      const auto image = to_coordinates(ad_action_on_sym(algebra, gen, elements[i]), idx);
      // Reduced basis: membership is decided by the free-column coordinates.
      std::map<std::uint64_t, Rational> candidate;
      for (const auto& [c, v] : image) {
        auto it = free_pos.find(c);
        if (it == free_pos.end()) continue;
        for (const auto& [row, w] : kb.vectors[it->second]) candidate[row] += v * w;
      }
      std::erase_if(candidate, [](const auto& e) { return e.second == 0; });
      bool member = candidate.size() == image.size();
      if (member) {
        std::size_t t = 0;
        for (const auto& [c, v] : candidate) {
          if (image[t].first != c || image[t].second != v) { member = false; break; }
          ++t;
        }
      }
      if (!member) {
        r.holds = false;
        ++r.violation_count;
        if (r.violations.size() < max_listed) r.violations.emplace_back(x, i);
      }
    }
  }
  return r;
}

WeightDecomposition weight_decomposition(const LieAlgebra& algebra, const KernelBasis& kb) {
  roots_of(algebra);
  WeightDecomposition out;
  if (kb.vectors.empty()) return out;
  const MonomialIndexer idx(kb.ambient_dim, kb.k);
  std::map<Weight, std::vector<SparseVector>> pieces;
  for (const auto& v : kb.vectors) {
    std::map<Weight, SparseVector> split;
    for (const auto& [c, val] : v) split[monomial_weight(algebra, idx.unrank(c))].emplace_back(c, val);
    for (auto& [w, piece] : split) pieces[w].push_back(std::move(piece));
  }
  std::uint64_t total = 0;
  for (const auto& [w, vecs] : pieces) {
    const auto r = span_rank(vecs, kb.source_dim);
    if (r) out.weights[w] = static_cast<std::int64_t>(r);
    total += r;
  }
  out.cartan_stable = total == kb.dim();
  return out;
}

WeightMultiset sym_power_weights(const LieAlgebra& algebra, int k) {
  roots_of(algebra);
  WeightMultiset out;
  for (const auto& m : enumerate_basis(algebra.dim(), k)) ++out[monomial_weight(algebra, m)];
  return out;
}

// ---------------------------------------------------------------------------

WeightLattice::WeightLattice(const RootSystem& roots) : rank_(roots.rank()), roots_(&roots) {
  const auto& a = roots.datum.cartan_matrix;
  inverse_ = invert(a);
  gram_.assign(rank_, std::vector<Rational>(rank_));
  for (int i = 0; i < rank_; ++i)
    for (int k = 0; k < rank_; ++k) gram_[i][k] = inverse_[k][i] * roots.symmetrizer[k];
  for (std::size_t p = 0; p < roots.positive_roots.size(); ++p) {
    positive_labels_.push_back(roots.dynkin_labels(roots.positive_roots[p]));
    positive_coroots_.push_back(roots.coroot_coefficients(p));
    positive_heights_.push_back(roots.height(p));
  }
}

Rational WeightLattice::inner(const Weight& a, const Weight& b) const {
  Rational s = 0;
  for (int i = 0; i < rank_; ++i)
    for (int k = 0; k < rank_; ++k)
      if (a[i] && b[k]) s += a[i] * b[k] * gram_[i][k];
  return s;
}

bool WeightLattice::dominant(const Weight& w) const {
  return std::all_of(w.begin(), w.end(), [](int x) { return x >= 0; });
}

Weight WeightLattice::reflect(const Weight& w, int i) const {
  Weight out = w;
  const auto& a = roots_->datum.cartan_matrix;
  for (int j = 0; j < rank_; ++j) out[j] -= w[i] * a[j][i];
  return out;
}

Rational WeightLattice::height(const Weight& w) const {
  Rational s = 0;
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) s += inverse_[i][j] * w[j];
  return s;
}

Integer WeightLattice::weyl_dim(const Weight& highest) const {
  if (static_cast<int>(highest.size()) != rank_) throw UsageError("weight has wrong length");
  if (!dominant(highest)) throw UsageError("Weyl dimension formula needs a dominant weight");
  Rational d = 1;
  for (const auto& cor : positive_coroots_) {
    std::int64_t num = 0, den = 0;
    for (int i = 0; i < rank_; ++i) {
      num += static_cast<std::int64_t>(highest[i] + 1) * cor[i];
      den += cor[i];
    }
    d *= Rational(num, den);
  }
  d.canonicalize();
  if (d.get_den() != 1) throw IdentityFailure("Weyl dimension is not an integer");
  return d.get_num();
}

WeightMultiset WeightLattice::character(const Weight& highest) const {
  if (!dominant(highest)) throw UsageError("highest weight must be dominant");
  const auto& a = roots_->datum.cartan_matrix;
  Weight rho(rank_, 1);
  auto plus = [](Weight x, const Weight& y, int s = 1) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * y[i];
    return x;
  };
  const Weight lr = plus(highest, rho);
  const Rational top = inner(lr, lr);
  WeightMultiset mult{{highest, 1}};
  std::map<Weight, int> depth{{highest, 0}};
  std::vector<Weight> layer{highest};
  std::vector<Weight> simple(rank_, Weight(rank_));
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) simple[i][j] = a[j][i];
  for (int t = 1; !layer.empty(); ++t) {
    std::vector<Weight> candidates;
    for (const auto& nu : layer)
      for (int i = 0; i < rank_; ++i) {
        Weight mu = plus(nu, simple[i], -1);
        if (depth.emplace(mu, t).second) candidates.push_back(std::move(mu));
      }
    std::sort(candidates.begin(), candidates.end());
    std::vector<Weight> next;
    for (const auto& mu : candidates) {
      const Weight mr = plus(mu, rho);
      const Rational denom = top - inner(mr, mr);
      if (denom == 0) continue;
      Rational sum = 0;
      for (std::size_t p = 0; p < positive_labels_.size(); ++p) {
        Weight shifted = mu;
        for (int j = 1; j * positive_heights_[p] <= t; ++j) {
          shifted = plus(shifted, positive_labels_[p]);
          auto it = mult.find(shifted);
          if (it != mult.end()) sum += it->second * inner(shifted, positive_labels_[p]);
        }
      }
      Rational m = 2 * sum / denom;
      m.canonicalize();
      if (m.get_den() != 1) throw IdentityFailure("non-integral Freudenthal multiplicity");
      if (m > 0) {
        mult[mu] = m.get_num().get_si();
        next.push_back(mu);
      }
    }
    layer = std::move(next);
  }
  return mult;
}

Integer weyl_dim(const Weight& highest, const LieAlgebra& algebra) {
  return WeightLattice(roots_of(algebra)).weyl_dim(highest);
}

std::vector<IrrepSummand> decompose_character(const WeightMultiset& weights, const LieAlgebra& algebra) {
  const WeightLattice lattice(roots_of(algebra));
  WeightMultiset rest;
  for (const auto& [w, c] : weights) {
    if (static_cast<int>(w.size()) != lattice.rank()) throw UsageError("weight has wrong length");
    if (c < 0) throw CharacterError("negative multiplicity in input");
    if (c) rest[w] = c;
  }
  for (const auto& [w, c] : rest)
    for (int i = 0; i < lattice.rank(); ++i) {
      auto it = rest.find(lattice.reflect(w, i));
      if (it == rest.end() || it->second != c) throw CharacterError("weight multiset is not Weyl-symmetric");
    }
  std::vector<IrrepSummand> out;
  while (!rest.empty()) {
    auto best = rest.begin();
    Rational best_h = lattice.height(best->first);
    for (auto it = std::next(rest.begin()); it != rest.end(); ++it) {
      Rational h = lattice.height(it->first);
      if (h > best_h || (h == best_h && it->first > best->first)) best = it, best_h = h;
    }
    const Weight hw = best->first;
    const std::int64_t m = best->second;
    if (m < 0 || !lattice.dominant(hw)) throw CharacterError("peeling produced a negative multiplicity");
    for (const auto& [w, c] : lattice.character(hw)) {
      auto& slot = rest[w];
      slot -= m * c;
      if (slot < 0) throw CharacterError("peeling produced a negative multiplicity");
      if (slot == 0) rest.erase(w);
    }
    out.push_back(IrrepSummand{hw, lattice.weyl_dim(hw), m});
  }
  return out;
}

}  // namespace spencer
