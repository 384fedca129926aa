#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpsketch {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unsupported parameter combination.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A requested allocation exceeds the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Graph is unusable for the requested operation (disconnected, bad vertex).
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Quantity undefined on the given input (e.g. entropy of the zero vector).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rounded value fell outside the configured exponent window.
class WindowError : public Error {
 public:
  explicit WindowError(const std::string& what, std::size_t vertex = npos)
      : Error(what), vertex_(vertex) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

/// A Morris counter grew beyond its wire-size cap; the protocol reports
/// failure instead of sending an oversized message.
class CounterOverflow : public Error {
 public:
  explicit CounterOverflow(const std::string& what, std::size_t vertex = npos)
      : Error(what), vertex_(vertex) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

}  // namespace mpsketch
