#pragma once

// Exact reference values. Deliberately depends on nothing but the data
// types: oracles must never share code with the protocols they judge.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mpsketch::oracle {

/// F_p = sum_i |x_i|^p (with 0^p = 0).
double frequency_moment(const std::vector<std::uint64_t>& x, double p);

/// ||x||_p = F_p^(1/p).
double lp_norm(const std::vector<std::uint64_t>& x, double p);

/// Shannon entropy in nats of p_i = x_i / ||x||_1; throws on x = 0.
double entropy(const std::vector<std::uint64_t>& x);

/// ||x_tail(s)||_2: l2 norm after removing the s largest entries.
double tail_norm(const std::vector<std::uint64_t>& x, std::size_t s);

/// X^T Y for row-major n x t1 and n x t2 inputs; t1 x t2 row-major result.
std::vector<double> transpose_product(const std::vector<std::uint64_t>& x,
                                      const std::vector<std::uint64_t>& y,
                                      std::size_t n, std::size_t t1,
                                      std::size_t t2);

double frobenius(const std::vector<std::uint64_t>& a);
double frobenius(const std::vector<double>& a);
double frobenius_distance(const std::vector<double>& a,
                          const std::vector<double>& b);

}  // namespace mpsketch::oracle
