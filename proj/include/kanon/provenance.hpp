#pragma once

#include <filesystem>
#include <iosfwd>

#include "kanon/anonymize.hpp"

namespace kanon {

// Private sidecar of a published graph. Header lines "# key=value" carry
// kind, method, k, seed and original_nodes; "labels:" lists the original
// labels in id order. Clustering files then hold one
// "<published_id>: <label>,<label>,..." line per published node; modification
// files hold "<class_id>: <published_id>,..." lines. Both may carry
// "excluded:", and modification files "dummy:" and "group:" lines.

void write_provenance(const AnonymizedGraph& a, std::ostream& out);
void write_provenance(const AnonymizedGraph& a, const std::filesystem::path& path);

/// Reads a sidecar and attaches it to `published`. Throws ParseError on
/// malformed lines and ContractViolation when the sidecar does not describe
/// the published graph.
AnonymizedGraph read_provenance(std::istream& in, Graph published);
AnonymizedGraph read_provenance(const std::filesystem::path& path, Graph published);

}  // namespace kanon
