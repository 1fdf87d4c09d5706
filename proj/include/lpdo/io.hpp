#pragma once

#include <iosfwd>
#include <optional>

#include "json.hpp"
#include "lpdo/elliptic.hpp"
#include "lpdo/fredholm.hpp"
#include "lpdo/quantize.hpp"
#include "lpdo/sobolev.hpp"
#include "lpdo/symbol.hpp"

namespace lpdo {

using Json = nlohmann::ordered_json;

/// CSV with header k1,...,kn,re,im. Rows may come in any order; points not
/// listed are zero. Without a window, N is the largest |k_j| present.
LatticeSequence read_sequence_csv(std::istream& in, std::optional<LatticeWindow> window = std::nullopt);
void write_sequence_csv(std::ostream& out, const LatticeSequence& f);

/// CSV with header j1,...,jn,re,im where node j sits at x = j/M. Every node
/// must be listed; M is one more than the largest digit.
TorusFunction read_torus_csv(std::istream& in);
void write_torus_csv(std::ostream& out, const TorusFunction& F);

Json symbol_to_json(const Symbol& sigma);
Symbol symbol_from_json(const Json& j);

Json matrix_to_json(const OperatorMatrix& A);
OperatorMatrix matrix_from_json(const Json& j);
/// "OPMATRX1", int32 n, N, M, then row-major little-endian float64 (re, im) pairs.
void write_matrix_binary(std::ostream& out, const OperatorMatrix& A);
OperatorMatrix read_matrix_binary(std::istream& in);

Json to_json(const EllipticityReport& r);
Json to_json(const OrderEstimate& r);
Json to_json(const SpectrumReport& r);
Json to_json(const DecayReport& r);
Json to_json(const ADNReport& r);
Json to_json(const SolveResult& r);
Json to_json(const IndexReport& r);
Json to_json(const AtkinsonReport& r);
Json to_json(const ProbeReport& r);
Json to_json(const EmbeddingReport& r);
Json to_json(const BoundednessReport& r);
Json to_json(const S0Diagnostic& r);

}  // namespace lpdo
