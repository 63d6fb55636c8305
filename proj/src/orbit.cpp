#include "echoverse/orbit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace echoverse {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

Orbit::Orbit(Eigen::MatrixXd values, double bound)
    : values_(std::move(values)), bound_(bound) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DimensionError("orbit needs dim >= 1 and length >= 1");
  }
  if (!(bound_ > 0.0)) {
    throw ValidationError("orbit bound must be positive");
  }
  if (!values_.allFinite()) {
    throw ValidationError("orbit contains non-finite entries");
  }
  if (values_.cwiseAbs().maxCoeff() > bound_) {
    throw ValidationError("orbit entry exceeds the stated bound");
  }
}

Orbit Orbit::scalar(const std::vector<double>& values, double bound) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = values[i];
  return Orbit(std::move(m), bound);
}

Orbit Orbit::zeros(int dim, int length, double bound) {
  return Orbit(Eigen::MatrixXd::Zero(dim, length), bound);
}

int Orbit::col_of(int t) const {
  const int c = t + length() - 1;
  if (t > 0 || c < 0) {
    throw DimensionError("orbit time index out of range");
  }
  return c;
}

Orbit Orbit::prefix(int count) const {
  if (count < 1 || count > length()) {
    throw DimensionError("prefix length out of range");
  }
  return Orbit(values_.leftCols(count), bound_);
}

Orbit Orbit::keep_last(int count) const {
  if (count < 1 || count > length()) {
    throw DimensionError("suffix length out of range");
  }
  return Orbit(values_.rightCols(count), bound_);
}

bool Orbit::operator==(const Orbit& other) const {
  return values_.rows() == other.values_.rows() &&
         values_.cols() == other.values_.cols() && values_ == other.values_;
}

std::string Orbit::to_csv() const {
  std::string out = "t";
  for (int i = 1; i <= dim(); ++i) {
    out += ",x" + std::to_string(i);
  }
  out += "\n";
  for (int c = 0; c < length(); ++c) {
    out += std::to_string(c - (length() - 1));
    for (int r = 0; r < dim(); ++r) {
      out += ',';
      append_double(out, values_(r, c));
    }
    out += "\n";
  }
  return out;
}

Orbit Orbit::from_csv(const std::string& text, double bound) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("orbit csv: empty input");
  }
  if (line.rfind("t,", 0) != 0) {
    throw ValidationError("orbit csv: missing `t,x1,...` header");
  }
  std::vector<std::vector<double>> rows;
  long prev_t = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> cells;
    std::size_t pos = 0;
    while (true) {
      std::size_t next = line.find(',', pos);
      const std::string cell =
          line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw ValidationError("orbit csv: bad number `" + cell + "`");
      }
      cells.push_back(v);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (cells.size() < 2) {
      throw ValidationError("orbit csv: rows need at least one component");
    }
    const long t = static_cast<long>(cells.front());
    if (!first && t != prev_t + 1) {
      throw ValidationError("orbit csv: time column must ascend by 1");
    }
    prev_t = t;
    first = false;
    rows.emplace_back(cells.begin() + 1, cells.end());
  }
  if (rows.empty()) {
    throw ValidationError("orbit csv: no data rows");
  }
  if (prev_t != 0) {
    throw ValidationError("orbit csv: last row must have t = 0");
  }
  const std::size_t dim = rows.front().size();
  if (dim == 0) {
    throw ValidationError("orbit csv: rows need at least one component");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (rows[c].size() != dim) {
      throw ValidationError("orbit csv: ragged rows");
    }
    for (std::size_t r = 0; r < dim; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[c][r];
  }
  if (bound <= 0.0) {
    bound = std::max(m.cwiseAbs().maxCoeff(), 1e-12);
  }
  return Orbit(std::move(m), bound);
}

Orbit random_orbit(Rng& rng, int dim, int length, double bound) {
  Eigen::MatrixXd m(dim, length);
  for (int c = 0; c < length; ++c) {
    for (int r = 0; r < dim; ++r) m(r, c) = rng.uniform(-bound, bound);
  }
  return Orbit(std::move(m), bound);
}

Orbit random_scalar_orbit(Rng& rng, int length, double lo, double hi) {
  Eigen::MatrixXd m(1, length);
  for (int c = 0; c < length; ++c) m(0, c) = rng.uniform(lo, hi);
  return Orbit(std::move(m), std::max(std::abs(lo), std::abs(hi)));
}

}  // namespace echoverse
