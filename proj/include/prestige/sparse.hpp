#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace prestige {

using JournalIndex = std::uint32_t;

// Compressed sparse row storage. Column indices are strictly increasing
// within each row, so traversal order is fixed and reproducible.
template <class T>
class CsrMatrix {
 public:
  struct Entry {
    JournalIndex row;
    JournalIndex col;
    T value;
  };

  CsrMatrix() : offsets_(1, 0) {}
  explicit CsrMatrix(std::size_t n) : rows_(n), cols_(n), offsets_(n + 1, 0) {}

  // Duplicate (row, col) pairs are summed. Input order does not matter.
  static CsrMatrix from_entries(std::size_t rows, std::size_t cols, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.offsets_.assign(rows + 1, 0);
    for (std::size_t k = 0; k < entries.size();) {
      const auto& e = entries[k];
      if (e.row >= rows || e.col >= cols) throw std::out_of_range("CsrMatrix: entry outside shape");
      T sum = T{};
      std::size_t l = k;
      for (; l < entries.size() && entries[l].row == e.row && entries[l].col == e.col; ++l) {
        sum += entries[l].value;
      }
      m.indices_.push_back(e.col);
      m.values_.push_back(sum);
      ++m.offsets_[e.row + 1];
      k = l;
    }
    for (std::size_t r = 0; r < rows; ++r) m.offsets_[r + 1] += m.offsets_[r];
    return m;
  }

  // Rows must be appended in order; columns within a row must be increasing.
  void append_row(std::span<const JournalIndex> cols, std::span<const T> vals) {
    indices_.insert(indices_.end(), cols.begin(), cols.end());
    values_.insert(values_.end(), vals.begin(), vals.end());
    offsets_.push_back(indices_.size());
    ++rows_;
  }
  void set_cols(std::size_t cols) { cols_ = cols; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return indices_.size(); }

  std::span<const JournalIndex> row_indices(std::size_t r) const {
    return {indices_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  std::span<const T> row_values(std::size_t r) const {
    return {values_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  std::size_t row_begin(std::size_t r) const { return offsets_[r]; }
  std::size_t row_end(std::size_t r) const { return offsets_[r + 1]; }

  const std::vector<JournalIndex>& indices() const { return indices_; }
  const std::vector<T>& values() const { return values_; }
  std::vector<T>& mutable_values() { return values_; }

  // Position of (r, c) in the flat entry arrays, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(std::size_t r, std::size_t c) const {
    if (r >= rows_) return npos;
    auto first = indices_.begin() + static_cast<std::ptrdiff_t>(offsets_[r]);
    auto last = indices_.begin() + static_cast<std::ptrdiff_t>(offsets_[r + 1]);
    auto it = std::lower_bound(first, last, static_cast<JournalIndex>(c));
    if (it == last || *it != c) return npos;
    return static_cast<std::size_t>(it - indices_.begin());
  }
  T at(std::size_t r, std::size_t c) const {
    auto k = find(r, c);
    return k == npos ? T{} : values_[k];
  }

  // Counting-sort transpose; keeps the column order within each output row
  // increasing because input rows are visited in order.
  CsrMatrix transposed() const {
    CsrMatrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.offsets_.assign(cols_ + 1, 0);
    for (auto c : indices_) ++t.offsets_[c + 1];
    for (std::size_t c = 0; c < cols_; ++c) t.offsets_[c + 1] += t.offsets_[c];
    t.indices_.resize(indices_.size());
    t.values_.resize(values_.size());
    std::vector<std::size_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
        auto pos = cursor[indices_[k]]++;
        t.indices_[pos] = static_cast<JournalIndex>(r);
        t.values_[pos] = values_[k];
      }
    }
    return t;
  }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<JournalIndex> indices_;
  std::vector<T> values_;
};

}  // namespace prestige
