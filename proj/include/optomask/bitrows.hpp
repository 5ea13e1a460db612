// bitrows.hpp - dense row-major bit matrix, 64-bit word packed
#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace optomask {

class BitRows {
 public:
  BitRows() = default;
  BitRows(std::uint64_t rows, int cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
        words_(rows * static_cast<std::uint64_t>((cols + 63) / 64), 0) {
    if (cols <= 0) throw std::invalid_argument("BitRows: cols must be positive");
  }

  std::uint64_t rows() const { return rows_; }
  int cols() const { return cols_; }
  int words_per_row() const { return wpr_; }

  bool get(std::uint64_t r, int c) const {
    return (words_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::uint64_t r, int c) {
    words_[r * wpr_ + c / 64] |= std::uint64_t(1) << (c % 64);
  }

  std::span<const std::uint64_t> row(std::uint64_t r) const {
    return {words_.data() + r * wpr_, static_cast<std::size_t>(wpr_)};
  }

  // Number of ones a row shares with a word-packed column mask.
  int and_popcount(std::uint64_t r, std::span<const std::uint64_t> mask) const {
    const std::uint64_t* p = words_.data() + r * wpr_;
    int acc = 0;
    for (int i = 0; i < wpr_; ++i) acc += std::popcount(p[i] & mask[i]);
    return acc;
  }

  int row_popcount(std::uint64_t r) const {
    const std::uint64_t* p = words_.data() + r * wpr_;
    int acc = 0;
    for (int i = 0; i < wpr_; ++i) acc += std::popcount(p[i]);
    return acc;
  }

  bool operator==(const BitRows&) const = default;

 private:
  std::uint64_t rows_ = 0;
  int cols_ = 0;
  int wpr_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace optomask
