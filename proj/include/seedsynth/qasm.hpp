#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "seedsynth/circuit.hpp"

namespace seedsynth {

class QasmError : public std::runtime_error {
 public:
  QasmError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("qasm:" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

// OpenQASM 2.0 subset: optional "OPENQASM 2.0;", includes ignored, a single
// qreg, gates u3/u/cx, barrier ignored, // comments. Angle expressions are
// float literals or pi forms (pi, pi/2, -pi/4, 2*pi).
Circuit parse_qasm(const std::string& text);

std::string emit_qasm(const Circuit& c);

}  // namespace seedsynth
