#pragma once

#include <stdexcept>
#include <string>

namespace kickoff {

/// Root of every exception the engine throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1-based line and column inside a scenario source.
struct SourcePos {
  int line = 0;
  int col = 0;
};

/// Raised by nearest-player queries whose filter matches nobody.
class EmptyFilter : public Error {
 public:
  EmptyFilter() : Error("no player matches the filter") {}
};

class UnknownPlayer : public Error {
 public:
  explicit UnknownPlayer(int id) : Error("unknown player id " + std::to_string(id)), id_(id) {}
  int id() const { return id_; }

 private:
  int id_;
};

}  // namespace kickoff
