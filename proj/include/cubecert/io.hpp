#pragma once

#include <string>

#include "cubecert/handelman.hpp"
#include "cubecert/sos.hpp"

namespace cubecert {

/// Schema version written as `format_version` by every serializer here.
inline constexpr int kFormatVersion = 1;

/// {"format_version", "kind": "handelman", "num_vars", "order", "mu": "a/b",
///  "terms": [{"h", "k", "lambda": "a/b"}]}
std::string handelman_to_json(const HandelmanCertificate& cert);
HandelmanCertificate handelman_from_json(const std::string& text);

/// Gram blocks are written lower-triangular, row by row: rational strings for
/// exact blocks, JSON numbers otherwise. `verified` is exact|float|failed.
std::string qm_certificate_to_json(const QuadraticModuleCertificate& cert, CertificateStatus verified);
QuadraticModuleCertificate qm_certificate_from_json(const std::string& text);

std::string preordering_to_json(const PreorderingCertificate& cert, CertificateStatus verified);

}  // namespace cubecert
