#pragma once

#include <array>
#include <map>

// Published reference values used by the CLI and the acceptance suite.
namespace bellpoly::golden {

// Minimal N for k-polygamy, rotated MABK bound, k = 1..12.
inline constexpr std::array<int, 12> kTable1 = {5, 7, 10, 12, 15, 18, 21, 23, 26, 29, 32, 35};

// Minimal N for K-hyper-polygamy, rotated MABK bound, K = 2..12.
inline constexpr std::array<int, 11> kTable2 = {7, 10, 13, 15, 18, 21, 24, 26, 29, 32, 35};

// Same with the sigma_x/sigma_y Mermin bound, K = 2..12.
inline constexpr std::array<int, 11> kTable3 = {7, 10, 13, 16, 19, 22, 25, 28, 29, 32, 35};

// Secondary reference values for a few K of the MABK table. K = 9 disagrees
// with the table (27 vs 26).
inline const std::map<int, int> kTable2TextValues = {{5, 15}, {6, 18}, {9, 27}, {10, 29}};

inline constexpr int kTable1MaxK = 12;
inline constexpr int kTable2MinK = 2;
inline constexpr int kTable2MaxK = 12;

inline int table1(int k) { return kTable1.at(static_cast<std::size_t>(k - 1)); }
inline int table2(int K) { return kTable2.at(static_cast<std::size_t>(K - kTable2MinK)); }
inline int table3(int K) { return kTable3.at(static_cast<std::size_t>(K - kTable2MinK)); }

}  // namespace bellpoly::golden
