#ifndef GIBBS_ERRORS_HPP
#define GIBBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gibbs {

// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Series or quadrature did not reach the requested accuracy, or a sampler hit its
// iteration cap. partial and bound describe the best value available and its error.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double partial = 0.0, double bound = 0.0)
      : std::runtime_error(what), partial_(partial), bound_(bound) {}
  double partial() const { return partial_; }
  double bound() const { return bound_; }

 private:
  double partial_;
  double bound_;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw domain_error(what);
}

}  // namespace gibbs

#endif
