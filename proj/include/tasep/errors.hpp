#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tasep {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NumericalDomain : public Error {
public:
  using Error::Error;
};

class Degenerate : public Error {
public:
  using Error::Error;
};

class Invalid : public Error {
public:
  using Error::Error;
};

class Unsupported : public Error {
public:
  using Error::Error;
};

class Conditioning : public Error {
public:
  using Error::Error;
};

class Convergence : public Error {
public:
  Convergence(const std::string& what, std::complex<double> best, double err)
      : Error(what), best_value(best), last_difference(err) {}
  std::complex<double> best_value;
  double last_difference;
};

}  // namespace tasep
