#include "sigverify/matrix.hpp"

#include "sigverify/error.hpp"

namespace sigverify {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) return {};
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols_) throw InvalidArgument("ragged matrix rows");
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) return {};
  const std::size_t n = columns.front().size();
  Matrix m(n, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != n) throw InvalidArgument("columns differ in length");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

}  // namespace sigverify
