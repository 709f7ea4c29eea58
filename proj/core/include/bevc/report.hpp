#ifndef BEVC_REPORT_HPP
#define BEVC_REPORT_HPP

#include <string>

#include "bevc/criteria.hpp"

namespace bevc::report {

/// Canonical JSON form of a certification report. Every numeric block
/// carries the tolerance it was checked against and the operation that
/// produced it; serialization round-trips losslessly (17 significant
/// digits). Output is byte-identical for identical report contents.
std::string to_json_string(const criteria::CertificationReport& r, int indent = 2);

criteria::CertificationReport report_from_json_string(const std::string& text);

}  // namespace bevc::report

#endif  // BEVC_REPORT_HPP
