#include "sdmp/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace sdmp::gf2 {

namespace {
constexpr std::size_t kWordBits = 64;
}

BitVector::BitVector(std::size_t width)
    : width_(width), words_((width + kWordBits - 1) / kWordBits, 0) {}

BitVector BitVector::unit(std::size_t width, std::size_t index) {
  BitVector v(width);
  v.set(index);
  return v;
}

bool BitVector::test(std::size_t index) const {
  if (index >= width_) throw std::out_of_range("BitVector::test");
  return (words_[index / kWordBits] >> (index % kWordBits)) & 1U;
}

void BitVector::set(std::size_t index, bool value) {
  if (index >= width_) throw std::out_of_range("BitVector::set");
  const std::uint64_t mask = std::uint64_t{1} << (index % kWordBits);
  if (value) {
    words_[index / kWordBits] |= mask;
  } else {
    words_[index / kWordBits] &= ~mask;
  }
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.width_ != width_) throw std::invalid_argument("BitVector width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

bool BitVector::none() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::optional<std::size_t> BitVector::lowest_set() const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) {
      return i * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[i]));
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> BitVector::ones() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      out.push_back(i * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

Basis::Basis(std::size_t width) : width_(width), row_of_pivot_(width, -1) {}

void Basis::reduce(BitVector& v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (v.test(pivot_cols_[r])) v ^= rows_[r];
  }
}

bool Basis::insert(BitVector row) {
  if (row.width() != width_) throw std::invalid_argument("Basis width mismatch");
  reduce(row);
  const auto pivot = row.lowest_set();
  if (!pivot) return false;
  for (auto& existing : rows_) {
    if (existing.test(*pivot)) existing ^= row;
  }
  row_of_pivot_[*pivot] = static_cast<std::ptrdiff_t>(rows_.size());
  pivot_cols_.push_back(*pivot);
  rows_.push_back(std::move(row));
  return true;
}

bool Basis::contains(BitVector v) const {
  if (v.width() != width_) throw std::invalid_argument("Basis width mismatch");
  reduce(v);
  return v.none();
}

bool Basis::contains_unit(std::size_t index) const {
  if (index >= width_) throw std::out_of_range("Basis::contains_unit");
  const auto r = row_of_pivot_[index];
  return r >= 0 && rows_[static_cast<std::size_t>(r)].count() == 1;
}

std::size_t rank(std::span<const BitVector> rows) {
  if (rows.empty()) return 0;
  Basis basis(rows.front().width());
  for (const auto& row : rows) basis.insert(row);
  return basis.rank();
}

}  // namespace sdmp::gf2
