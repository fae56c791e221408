#include "sbcode/codes.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sbcode/rng.hpp"

namespace sbcode {

const char* family_name(CodeFamily family) {
  switch (family) {
    case CodeFamily::kSbc:
      return "SBC";
    case CodeFamily::kFrc:
      return "FRC";
    case CodeFamily::kBgc:
      return "BGC";
  }
  return "SBC";
}

void CodeSpec::validate() const {
  if (k < 1) {
    throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
  }
  if (s < 1 || s > k) {
    throw std::invalid_argument("s must be in [1, k], got s=" +
                                std::to_string(s) + " k=" + std::to_string(k));
  }
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("p and q must lie in [0, 1]");
  }
  if (q > p) {
    throw std::invalid_argument("q must not exceed p (got p=" +
                                std::to_string(p) + " q=" + std::to_string(q) +
                                ")");
  }
  if (family == CodeFamily::kFrc && (p != 1.0 || q != 0.0)) {
    throw std::invalid_argument("FRC requires p=1, q=0");
  }
  if (family == CodeFamily::kBgc && p != q) {
    throw std::invalid_argument("BGC requires p=q");
  }
}

CodeSpec sbc_spec(std::int64_t k, std::int64_t s, double p, double q) {
  CodeSpec spec{k, s, p, q, CodeFamily::kSbc};
  spec.validate();
  return spec;
}

CodeSpec frc_spec(std::int64_t k, std::int64_t s) {
  CodeSpec spec{k, s, 1.0, 0.0, CodeFamily::kFrc};
  spec.validate();
  return spec;
}

CodeSpec bgc_spec(std::int64_t k, std::int64_t s, double p) {
  CodeSpec spec{k, s, p, p, CodeFamily::kBgc};
  spec.validate();
  return spec;
}

namespace {

// Entry (i, j) is 1 iff the stream value at counter i*k+j maps below prob.
// The counter scheme makes generation order irrelevant and makes an SBC with
// p == q bitwise identical to the BGC drawn from the same seed.
AssignmentMatrix fill_block_bernoulli(const CodeSpec& spec,
                                      std::uint64_t seed) {
  const std::int64_t k = spec.k;
  const std::int64_t s = spec.s;
  AssignmentMatrix out{spec, Matrix(k, k, 0.0), seed};
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t j = 0; j < k; ++j) {
      const bool in_block = (i / s) == (j / s);
      const double prob = in_block ? spec.p : spec.q;
      const double u = unit_double(
          stream_at(seed, static_cast<std::uint64_t>(i * k + j)));
      if (u < prob) {
        out.g.at(i, j) = 1.0;
      }
    }
  }
  return out;
}

}  // namespace

AssignmentMatrix construct_frc(std::int64_t k, std::int64_t s) {
  CodeSpec spec = frc_spec(k, s);
  AssignmentMatrix out{spec, Matrix(k, k, 0.0), 0};
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t block = i / s;
    const std::int64_t lo = block * s;
    const std::int64_t hi = std::min(lo + s, k);
    for (std::int64_t j = lo; j < hi; ++j) {
      out.g.at(i, j) = 1.0;
    }
  }
  return out;
}

AssignmentMatrix construct_bgc(std::int64_t k, std::int64_t s, double p,
                               std::uint64_t seed) {
  return fill_block_bernoulli(bgc_spec(k, s, p), seed);
}

AssignmentMatrix construct_sbc(const CodeSpec& spec, std::uint64_t seed) {
  spec.validate();
  return fill_block_bernoulli(spec, seed);
}

double matched_q(std::int64_t k, std::int64_t s, double p) {
  if (k <= s) {
    throw std::invalid_argument("matched_q requires k > s");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in [0, 1]");
  }
  const double q = static_cast<double>(s) * (1.0 - p) /
                   static_cast<double>(k - s);
  return std::min(1.0, std::max(0.0, q));
}

double expected_column_weight(const CodeSpec& spec) {
  spec.validate();
  return static_cast<double>(spec.s) * spec.p +
         static_cast<double>(spec.k - spec.s) * spec.q;
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.rows * (m.cols * 2)));
  for (std::int64_t i = 0; i < m.rows; ++i) {
    for (std::int64_t j = 0; j < m.cols; ++j) {
      if (j > 0) {
        out.push_back(',');
      }
      out.push_back(m.at(i, j) != 0.0 ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

Matrix matrix_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "0") {
        row.push_back(0.0);
      } else if (cell == "1") {
        row.push_back(1.0);
      } else {
        throw std::invalid_argument("matrix CSV cell must be 0 or 1, got '" +
                                    cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("matrix CSV rows have inconsistent widths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::invalid_argument("matrix CSV is empty");
  }
  Matrix m(static_cast<std::int64_t>(rows.size()),
           static_cast<std::int64_t>(rows.front().size()), 0.0);
  for (std::int64_t i = 0; i < m.rows; ++i) {
    for (std::int64_t j = 0; j < m.cols; ++j) {
      m.at(i, j) = rows[static_cast<std::size_t>(i)]
                       [static_cast<std::size_t>(j)];
    }
  }
  return m;
}

}  // namespace sbcode
