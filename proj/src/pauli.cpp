#include "twirlkit/pauli.hpp"

#include <cmath>
#include <complex>

namespace twirlkit {

namespace {

const std::complex<double> kImag(0.0, 1.0);

ComplexMatrix single_qubit_matrix(PauliOp op) {
  ComplexMatrix m(2, 2);
  switch (op) {
    case PauliOp::I:
      m << 1, 0, 0, 1;
      break;
    case PauliOp::X:
      m << 0, 1, 1, 0;
      break;
    case PauliOp::Y:
      m << 0, -kImag, kImag, 0;
      break;
    case PauliOp::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

}  // namespace

bool PauliString::is_identity() const {
  for (PauliOp op : factors) {
    if (op != PauliOp::I) return false;
  }
  return true;
}

std::string PauliString::label() const {
  std::string out;
  out.reserve(factors.size());
  for (PauliOp op : factors) out.push_back(static_cast<char>(op));
  return out;
}

PauliString PauliString::parse(const std::string& label) {
  if (label.empty()) throw InvalidParamsError("PauliString: empty label");
  PauliString out;
  out.factors.reserve(label.size());
  for (char c : label) {
    switch (c) {
      case 'I':
        out.factors.push_back(PauliOp::I);
        break;
      case 'X':
        out.factors.push_back(PauliOp::X);
        break;
      case 'Y':
        out.factors.push_back(PauliOp::Y);
        break;
      case 'Z':
        out.factors.push_back(PauliOp::Z);
        break;
      default:
        throw InvalidParamsError("PauliString: bad letter '" + std::string(1, c) + "' in label \"" +
                                 label + "\"");
    }
  }
  return out;
}

PauliSum::PauliSum(int n_qubits, std::vector<Term> in_terms) : n_qubits(n_qubits) {
  if (n_qubits < 1) throw InvalidParamsError("PauliSum: need at least one qubit");
  for (const Term& t : in_terms) add(t.coefficient, t.string);
}

PauliSum& PauliSum::add(double coefficient, const PauliString& string) {
  if (string.n_qubits() != n_qubits) {
    throw DimensionMismatchError("PauliSum: term \"" + string.label() + "\" does not act on " +
                                 std::to_string(n_qubits) + " qubits");
  }
  if (!std::isfinite(coefficient)) {
    throw InvalidParamsError("PauliSum: non-finite coefficient");
  }
  for (Term& t : terms) {
    if (t.string == string) {
      t.coefficient += coefficient;
      return *this;
    }
  }
  terms.push_back(Term{coefficient, string});
  return *this;
}

ModelParams ModelParams::single_qubit(double j) {
  ModelParams p;
  p.kind = ModelKind::SingleQubit;
  p.j = j;
  return p;
}

ModelParams ModelParams::h2() {
  ModelParams p;
  p.kind = ModelKind::H2;
  return p;
}

ModelParams ModelParams::h2_with(const std::array<double, 5>& a) {
  ModelParams p;
  p.kind = ModelKind::H2;
  p.a = a;
  return p;
}

PauliSum build_model(const ModelParams& params) {
  switch (params.kind) {
    case ModelKind::SingleQubit: {
      if (!std::isfinite(params.j)) throw InvalidParamsError("build_model: J must be finite");
      PauliSum h(1, {});
      h.add(1.0, PauliString::parse("X"));
      if (params.j != 0.0) h.add(params.j, PauliString::parse("Z"));
      return h;
    }
    case ModelKind::H2: {
      for (double c : params.a) {
        if (!std::isfinite(c)) throw InvalidParamsError("build_model: coefficients must be finite");
      }
      PauliSum h(2, {});
      h.add(params.a[0], PauliString::parse("II"));
      h.add(params.a[1], PauliString::parse("ZI"));
      h.add(params.a[2], PauliString::parse("IZ"));
      h.add(params.a[3], PauliString::parse("ZZ"));
      h.add(params.a[4], PauliString::parse("XX"));
      return h;
    }
  }
  throw InvalidParamsError("build_model: unknown model kind");
}

ComplexMatrix to_dense(const PauliString& s) {
  if (s.n_qubits() < 1) throw InvalidParamsError("to_dense: empty Pauli string");
  if (s.n_qubits() > kMaxQubits) {
    throw TooManyQubitsError("to_dense: " + std::to_string(s.n_qubits()) + " qubits exceeds " +
                             std::to_string(kMaxQubits));
  }
  ComplexMatrix out = single_qubit_matrix(s.factors[0]);
  for (int q = 1; q < s.n_qubits(); ++q) {
    out = kron(out, single_qubit_matrix(s.factors[q]));
  }
  return out;
}

ComplexMatrix to_dense(const PauliSum& s) {
  if (s.n_qubits > kMaxQubits) {
    throw TooManyQubitsError("to_dense: " + std::to_string(s.n_qubits) + " qubits exceeds " +
                             std::to_string(kMaxQubits));
  }
  const Eigen::Index dim = Eigen::Index(1) << s.n_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const PauliSum::Term& t : s.terms) {
    out += t.coefficient * to_dense(t.string);
  }
  return out;
}

namespace {

double expectation_of_dense(const ComplexMatrix& m, const StateVector& psi, const char* who) {
  if (m.rows() != psi.dim()) {
    throw DimensionMismatchError(std::string(who) + ": observable dimension " +
                                 std::to_string(m.rows()) + " does not match state dimension " +
                                 std::to_string(psi.dim()));
  }
  const std::complex<double> value = psi.amplitudes.dot(m * psi.amplitudes);
  if (std::abs(value.imag()) > 1e-12) {
    throw Error(std::string(who) + ": expectation has imaginary part " +
                std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace

double exact_expectation(const PauliString& s, const StateVector& psi) {
  return expectation_of_dense(to_dense(s), psi, "exact_expectation");
}

double exact_expectation(const PauliSum& s, const StateVector& psi) {
  return expectation_of_dense(to_dense(s), psi, "exact_expectation");
}

double energy_variance(const PauliSum& s, const StateVector& psi) {
  const ComplexMatrix h = to_dense(s);
  const double mean = expectation_of_dense(h, psi, "energy_variance");
  const double second = expectation_of_dense((h * h).eval(), psi, "energy_variance");
  return second - mean * mean;
}

}  // namespace twirlkit
