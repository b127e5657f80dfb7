#pragma once
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynleiden {

/** Vertex identifier. Community ids live in the same space. */
using vertex_id = std::uint32_t;

/** Edge weight as stored in input graphs. */
using edge_weight = float;

/** Marker for "no vertex / no community". Never a valid id. */
inline constexpr vertex_id kNoVertex = std::numeric_limits<vertex_id>::max();

/** Community of each vertex, indexed by vertex id. */
using Membership = std::vector<vertex_id>;

/** 8-bit flag vector (affected vertices, split/refine marks). */
using FlagVector = std::vector<std::uint8_t>;


/**
 * Raised when caller-supplied data violates a documented precondition
 * (bad vertex id, missing edge in a deletion, inconsistent arrays, ...).
 */
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};


/** Input error tied to a specific line of a text file. */
class parse_error : public input_error {
 public:
  parse_error(const std::string& path, std::size_t line, const std::string& what)
      : input_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dynleiden
