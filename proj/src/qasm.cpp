#include "seedsynth/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>

namespace seedsynth {

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw QasmError(line, col, msg);
  }

  bool eof() const { return pos >= text.size(); }

  char peek() const { return text[pos]; }

  char advance() {
    const char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!eof()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
        while (!eof() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string identifier() {
    skip_space_and_comments();
    if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) ||
                   peek() == '_')) {
      fail("expected identifier");
    }
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '_' || peek() == '.')) {
      out.push_back(advance());
    }
    return out;
  }

  void expect(char c) {
    skip_space_and_comments();
    if (eof() || peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    advance();
  }

  bool try_consume(char c) {
    skip_space_and_comments();
    if (!eof() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  std::size_t index() {
    skip_space_and_comments();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("expected qubit index");
    }
    std::size_t value = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::size_t>(advance() - '0');
    }
    return value;
  }

  double number() {
    std::size_t start = pos;
    if (!eof() && (peek() == '+' || peek() == '-')) advance();
    bool any = false;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                      peek() == '.')) {
      advance();
      any = true;
    }
    if (!eof() && (peek() == 'e' || peek() == 'E')) {
      advance();
      if (!eof() && (peek() == '+' || peek() == '-')) advance();
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        advance();
      }
    }
    if (!any) fail("expected number");
    try {
      return std::stod(text.substr(start, pos - start));
    } catch (const std::exception&) {
      fail("bad numeric literal '" + text.substr(start, pos - start) + "'");
    }
  }

  // literal | pi | pi/num | num*pi | -any_of_those
  double angle_expr() {
    skip_space_and_comments();
    double sign = 1.0;
    while (!eof() && (peek() == '+' || peek() == '-')) {
      if (advance() == '-') sign = -sign;
      skip_space_and_comments();
    }
    if (eof()) fail("expected angle expression");
    double value;
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      if (identifier() != "pi") fail("unknown symbol in angle expression");
      value = std::numbers::pi;
      if (try_consume('/')) {
        skip_space_and_comments();
        value /= number();
      }
    } else {
      value = number();
      if (try_consume('*')) {
        skip_space_and_comments();
        if (identifier() != "pi") fail("only pi may follow '*'");
        value *= std::numbers::pi;
      }
    }
    return sign * value;
  }

  void skip_statement() {
    while (!eof() && peek() != ';') advance();
    if (!eof()) advance();
  }
};

struct RegisterRef {
  std::string name;
  std::size_t index;
};

RegisterRef qubit_ref(Lexer& lex) {
  RegisterRef ref;
  ref.name = lex.identifier();
  lex.expect('[');
  ref.index = lex.index();
  lex.expect(']');
  return ref;
}

}  // namespace

Circuit parse_qasm(const std::string& text) {
  Lexer lex(text);
  std::optional<Circuit> circuit;
  std::string qreg_name;
  std::size_t qreg_size = 0;

  auto resolve = [&](const RegisterRef& ref) -> std::size_t {
    if (!circuit) lex.fail("gate before qreg declaration");
    if (ref.name != qreg_name) {
      lex.fail("unknown register '" + ref.name + "'");
    }
    if (ref.index >= qreg_size) {
      lex.fail("qubit index " + std::to_string(ref.index) +
               " out of range for qreg of size " + std::to_string(qreg_size));
    }
    return ref.index;
  };

  for (;;) {
    lex.skip_space_and_comments();
    if (lex.eof()) break;
    const std::size_t stmt_line = lex.line;
    const std::size_t stmt_col = lex.col;
    const std::string word = lex.identifier();

    if (word == "OPENQASM") {
      lex.skip_statement();
    } else if (word == "include") {
      lex.skip_statement();
    } else if (word == "barrier") {
      lex.skip_statement();
    } else if (word == "qreg") {
      if (circuit) {
        throw QasmError(stmt_line, stmt_col, "only one qreg is supported");
      }
      qreg_name = lex.identifier();
      lex.expect('[');
      qreg_size = lex.index();
      lex.expect(']');
      lex.expect(';');
      if (qreg_size == 0) {
        throw QasmError(stmt_line, stmt_col, "qreg must have positive size");
      }
      circuit.emplace(qreg_size);
    } else if (word == "u3" || word == "u") {
      lex.expect('(');
      const double theta = lex.angle_expr();
      lex.expect(',');
      const double phi = lex.angle_expr();
      lex.expect(',');
      const double lambda = lex.angle_expr();
      lex.expect(')');
      const std::size_t q = resolve(qubit_ref(lex));
      lex.expect(';');
      circuit->add_u3(q, theta, phi, lambda);
    } else if (word == "cx") {
      const std::size_t control = resolve(qubit_ref(lex));
      lex.expect(',');
      const std::size_t target = resolve(qubit_ref(lex));
      lex.expect(';');
      if (control == target) {
        throw QasmError(stmt_line, stmt_col, "cx control equals target");
      }
      circuit->add_cnot(control, target);
    } else {
      throw QasmError(stmt_line, stmt_col, "unsupported gate '" + word + "'");
    }
  }
  if (!circuit) {
    throw QasmError(lex.line, lex.col, "no qreg declaration found");
  }
  return *circuit;
}

std::string emit_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\n";
  os << "include \"qelib1.inc\";\n";
  os << "qreg q[" << c.n_qubits() << "];\n";
  char buf[32];
  for (const GatePlacement& g : c.gates()) {
    if (g.kind == GateKind::u3) {
      os << "u3(";
      for (int p = 0; p < 3; ++p) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.params()[g.param_offset + p]);
        os << (p ? "," : "") << buf;
      }
      os << ") q[" << g.q0 << "];\n";
    } else {
      os << "cx q[" << g.q0 << "],q[" << g.q1 << "];\n";
    }
  }
  return os.str();
}

}  // namespace seedsynth
