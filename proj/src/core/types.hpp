// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace numasim {

using PhysicalAddress = std::uint64_t;
using LineAddress = std::uint64_t;
using Tag = std::uint64_t;
using SocketId = std::uint32_t;
using CoreId = std::uint32_t;
using SetId = std::uint32_t;
using WayId = std::uint32_t;
using SeqNo = std::uint64_t;

inline constexpr SocketId kMaxSockets = 64;

enum class MoesiState : std::uint8_t { Invalid, Shared, Exclusive, Owner, Modified };

enum class ServiceSource : std::uint8_t { LocalHit, RemoteCacheToCache, LocalDram, RemoteDram };

enum class AccessOp : std::uint8_t { Read, Write };

const char* to_string(MoesiState s);
const char* to_string(ServiceSource s);

// Error hierarchy. The C API maps each class onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Broken internal precondition (caller bug), never a user input problem.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace numasim
