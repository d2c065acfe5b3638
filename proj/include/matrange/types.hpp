#ifndef MATRANGE_TYPES_HPP
#define MATRANGE_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace matrange {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Error hierarchy. Everything thrown by the library derives from Error so the
// CLI can map it to an exit code in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class CertificateError : public Error {
 public:
  using Error::Error;
};

class NotInSimplex : public Error {
 public:
  NotInSimplex(double min_eigenvalue, int vertex)
      : Error("tuple is not inside the simplex: POVM element " + std::to_string(vertex) +
              " has eigenvalue " + std::to_string(min_eigenvalue)),
        min_eigenvalue(min_eigenvalue),
        vertex(vertex) {}
  double min_eigenvalue;
  int vertex;
};

class TruncationTooSmall : public Error {
 public:
  TruncationTooSmall(int have, int required)
      : Error("truncation level " + std::to_string(have) + " too small; need at least " +
              std::to_string(required)),
        have(have),
        required(required) {}
  int have;
  int required;
};

}  // namespace matrange

#endif  // MATRANGE_TYPES_HPP
