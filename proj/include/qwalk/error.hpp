#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Root of every error raised by the library. Callers that only need to know
// "something numerical went wrong" catch this.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class NotUnitary : public Error {
public:
  using Error::Error;
};

class TrivialCoin : public Error {
public:
  using Error::Error;
};

class OutOfRegime : public Error {
public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class SingularSystem : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

class ZeroField : public Error {
public:
  using Error::Error;
};

class Unsupported : public Error {
public:
  using Error::Error;
};

class InconsistentScaling : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace qwalk
