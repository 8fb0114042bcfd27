#pragma once

// Brute-force reference computations used as independent oracles by the
// unit tests. Nothing here calls into the library's normal forms.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gq3/presparse.hpp"

namespace oracle {

using Vec = std::vector<int>;

inline int rand_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Every vector of (Z/q)^m, in lexicographic order of the reversed digits.
inline std::vector<Vec> all_vectors(int q, int m) {
  std::vector<Vec> out;
  Vec v(m, 0);
  for (;;) {
    out.push_back(v);
    int i = 0;
    while (i < m && ++v[i] == q) v[i++] = 0;
    if (i == m) break;
  }
  return out;
}

/// Z-span of gens inside (Z/q)^m by closure under addition.
inline std::set<Vec> span(int q, int m, const std::vector<Vec>& gens) {
  std::set<Vec> seen{Vec(m, 0)};
  std::vector<Vec> todo{Vec(m, 0)};
  while (!todo.empty()) {
    Vec v = todo.back();
    todo.pop_back();
    for (const Vec& g : gens) {
      Vec w(m);
      for (int i = 0; i < m; ++i) w[i] = (v[i] + g[i]) % q;
      if (seen.insert(w).second) todo.push_back(w);
    }
  }
  return seen;
}

inline std::int64_t dot(const Vec& a, const Vec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<std::int64_t>(a[i]) * b[i];
  return s;
}

inline std::set<Vec> annihilator(int q, int m, const std::vector<Vec>& gens) {
  std::set<Vec> out;
  for (const Vec& v : all_vectors(q, m)) {
    bool ok = true;
    for (const Vec& g : gens) ok = ok && dot(v, g) % q == 0;
    if (ok) out.insert(v);
  }
  return out;
}

/// { x : rows . x = 0 } for a matrix given by its rows.
inline std::set<Vec> kernel(int q, int cols, const std::vector<Vec>& rows) { return annihilator(q, cols, rows); }

// Letter-by-letter collection in S / S^(3) with the normal form
// s_1^{e_1} .. s_n^{e_n} prod_{k<l} [s_k,s_l]^{c_kl}. Appending s_j^{+-1}
// moves it left past s_k^{e_k} for k > j, which leaves [s_k, s_j]^{e_k}
// behind, i.e. w_jk^{-e_k}.
struct Collected {
  Vec e;
  Vec c;  // pairs (0,1), (0,2), .., (n-2,n-1)
};

inline int pair_slot(int n, int k, int l) {
  int idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++idx)
      if (a == k && b == l) return idx;
  return -1;
}

inline void append_letter(Collected& x, int n, int q, int j, int sign) {
  for (int k = j + 1; k < n; ++k) {
    int& c = x.c[pair_slot(n, j, k)];
    c = ((c - sign * x.e[k]) % q + q) % q;
  }
  x.e[j] = ((x.e[j] + sign) % (q * q) + q * q) % (q * q);
}

inline Collected collect(const std::vector<gq3::Syllable>& word, int n, int q) {
  Collected x{Vec(n, 0), Vec(n * (n - 1) / 2, 0)};
  for (const auto& s : word) {
    const int sign = s.exponent > 0 ? 1 : -1;
    const std::int64_t count = s.exponent > 0 ? s.exponent : -s.exponent;
    for (std::int64_t t = 0; t < count; ++t) append_letter(x, n, q, s.generator, sign);
  }
  return x;
}

/// Random word in n generators, mixing letters, powers and commutators.
inline std::string random_word_text(std::mt19937_64& rng, int n, int depth = 2) {
  const auto g = [&] { return "x" + std::to_string(rand_int(rng, 1, n)); };
  std::string out;
  const int factors = rand_int(rng, 1, 4);
  for (int f = 0; f < factors; ++f) {
    if (!out.empty()) out += " ";
    const int kind = depth > 0 ? rand_int(rng, 0, 3) : 0;
    if (kind == 0) {
      out += g();
    } else if (kind == 1) {
      out += g() + "^" + std::to_string(rand_int(rng, -5, 5));
    } else if (kind == 2) {
      out += "[" + random_word_text(rng, n, depth - 1) + "," + random_word_text(rng, n, depth - 1) + "]";
    } else {
      out += "(" + random_word_text(rng, n, depth - 1) + ")^" + std::to_string(rand_int(rng, -3, 3));
    }
  }
  return out;
}

inline std::vector<std::string> gen_names(int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back("x" + std::to_string(k));
  return out;
}

}  // namespace oracle
