#pragma once

// Brute-force time derivative of the truncated moments of a quasifree state,
// obtained from the Heisenberg equations of
//   H = sum h_ij a_i^* a_j + 1/2 sum v_ij a_i^* a_j^* a_j a_i
// with every moment of a word of creation/annihilation operators evaluated by
// Wick's rule around the mean. Works in the orthonormal node basis
// a_i = sqrt(w) psi(x_i) and shares no code with the library kernels.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace wick {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Op {
  int index;
  bool dagger;
};
using Word = std::vector<Op>;

struct Term {
  C coef;
  Word word;
};

struct Moments {
  Vec phi;    // <a_i>
  Mat gamma;  // <b_j^* b_i> at (i, j)
  Mat sigma;  // <b_i b_j>
};

inline C contraction(const Moments& m, Op x, Op y) {
  if (!x.dagger && !y.dagger) return m.sigma(x.index, y.index);
  if (x.dagger && y.dagger) return std::conj(m.sigma(x.index, y.index));
  if (x.dagger && !y.dagger) return m.gamma(y.index, x.index);
  return m.gamma(x.index, y.index) + (x.index == y.index ? 1.0 : 0.0);
}

inline C pairings(const Moments& m, const std::vector<Op>& f) {
  if (f.empty()) return 1.0;
  if (f.size() % 2) return 0.0;
  C total = 0.0;
  for (std::size_t e = 1; e < f.size(); ++e) {
    std::vector<Op> rest;
    for (std::size_t q = 1; q < f.size(); ++q)
      if (q != e) rest.push_back(f[q]);
    total += contraction(m, f[0], f[e]) * pairings(m, rest);
  }
  return total;
}

inline C expect(const Moments& m, const Word& w) {
  const std::size_t n = w.size();
  C total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    C mean = 1.0;
    std::vector<Op> fluct;
    for (std::size_t p = 0; p < n; ++p) {
      if (mask & (1u << p)) {
        mean *= w[p].dagger ? std::conj(m.phi(w[p].index)) : m.phi(w[p].index);
      } else {
        fluct.push_back(w[p]);
      }
    }
    total += mean * pairings(m, fluct);
  }
  return total;
}

inline C expect(const Moments& m, const std::vector<Term>& terms) {
  C s = 0.0;
  for (const auto& t : terms) s += t.coef * expect(m, t.word);
  return s;
}

inline std::vector<Term> times(const std::vector<Term>& terms, Op op, bool left) {
  std::vector<Term> out = terms;
  for (auto& t : out) {
    if (left) {
      t.word.insert(t.word.begin(), op);
    } else {
      t.word.push_back(op);
    }
  }
  return out;
}

struct Derivative {
  Vec phi;
  Mat gamma;
  Mat sigma;
};

/// h and v in the orthonormal basis (h Hermitian, v real symmetric).
inline Derivative derivative(const Moments& m, const Mat& h, const Mat& v) {
  const int n = static_cast<int>(m.phi.size());
  // R_k = [a_k, H], R_k^dagger.
  std::vector<std::vector<Term>> r(n), rd(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      r[k].push_back({h(k, j), {{j, false}}});
      r[k].push_back({v(k, j), {{j, true}, {j, false}, {k, false}}});
      rd[k].push_back({std::conj(h(k, j)), {{j, true}}});
      rd[k].push_back({std::conj(v(k, j)), {{k, true}, {j, true}, {j, false}}});
    }
  const C i(0.0, 1.0);
  Derivative d;
  d.phi.resize(n);
  for (int k = 0; k < n; ++k) d.phi(k) = -i * expect(m, r[k]);
  d.gamma.resize(n, n);
  d.sigma.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const C dm = i * (expect(m, times(rd[l], {k, false}, false)) - expect(m, times(r[k], {l, true}, true)));
      const C ds = -i * (expect(m, times(r[k], {l, false}, false)) + expect(m, times(r[l], {k, false}, true)));
      d.gamma(k, l) = dm - d.phi(k) * std::conj(m.phi(l)) - m.phi(k) * std::conj(d.phi(l));
      d.sigma(k, l) = ds - d.phi(k) * m.phi(l) - m.phi(k) * d.phi(l);
    }
  return d;
}

}  // namespace wick
