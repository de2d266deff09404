#include "hjdyn/error.hpp"

#include <utility>

namespace hjdyn {

ParseError::ParseError(std::string message, std::size_t offset)
    : Error(std::move(message) + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

}  // namespace hjdyn
