#pragma once

#include <stdexcept>
#include <string>

namespace adm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: axis out of range, wrong variance, invalid grid size.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("fields live on different grids") {}
};

/// A metric failed the leading-principal-minor test somewhere on the grid.
class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// Time argument outside a metric path's validity window.
class OutsideWindow : public Error {
 public:
  using Error::Error;
};

}  // namespace adm
