#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sdmp::gf2 {

/// Fixed-width row vector over GF(2), packed 64 bits per word.
class BitVector {
 public:
  explicit BitVector(std::size_t width = 0);

  static BitVector unit(std::size_t width, std::size_t index);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] bool test(std::size_t index) const;
  void set(std::size_t index, bool value = true);

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  [[nodiscard]] bool none() const noexcept;
  [[nodiscard]] std::size_t count() const noexcept;
  [[nodiscard]] std::optional<std::size_t> lowest_set() const noexcept;
  [[nodiscard]] std::vector<std::size_t> ones() const;

 private:
  std::size_t width_;
  std::vector<std::uint64_t> words_;
};

/// Row span kept in fully reduced echelon form: every pivot column is set in
/// exactly one basis row.
class Basis {
 public:
  explicit Basis(std::size_t width);

  /// Adds a row to the span. Returns true when the rank grew.
  bool insert(BitVector row);

  [[nodiscard]] bool contains(BitVector v) const;
  /// e_index is in the span iff its pivot row has no other bit set.
  [[nodiscard]] bool contains_unit(std::size_t index) const;

  [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
  [[nodiscard]] std::size_t width() const noexcept { return width_; }

 private:
  void reduce(BitVector& v) const;

  std::size_t width_;
  std::vector<BitVector> rows_;
  std::vector<std::size_t> pivot_cols_;
  std::vector<std::ptrdiff_t> row_of_pivot_;
};

std::size_t rank(std::span<const BitVector> rows);

}  // namespace sdmp::gf2
