#pragma once

#include <string>

#include "frslab/scheme.hpp"

namespace frslab {

// Canonical JSON serialization of a scheme presentation. Key order is
// fixed (name, vars, dim_Q, generators, tags, cia, cover), indentation is
// two spaces, polynomials use their canonical textual form, and absent
// optional blocks are omitted, so serialization is byte-deterministic and
// idempotent under a parse/serialize round trip. include_name=false yields
// the exact byte stream the scheme hash is computed over.
std::string scheme_to_json(const SchemePresentation& X,
                           bool include_name = true);

// Parses the JSON scheme format. Malformed JSON, missing required fields,
// bad polynomial syntax, or shape violations raise invalid_input_error.
SchemePresentation parse_scheme_json(const std::string& text);

SchemePresentation load_scheme_file(const std::string& path);
void write_scheme_file(const std::string& path, const SchemePresentation& X);

// Variable names u1..uM used for CIA map components in files and hashes.
std::vector<std::string> ambient_var_names(std::size_t M);

// Polynomial-map files: {"source_vars": M, "components": [...]} with the
// components written in the variables u1..uM. Same canonicalization rules
// as scheme files (fixed key order, two-space indent, canonical polynomial
// text), and the same idempotence guarantee.
std::string map_to_json(const PolyMap& F);
PolyMap parse_map_json(const std::string& text);
PolyMap load_map_file(const std::string& path);
void write_map_file(const std::string& path, const PolyMap& F);

}  // namespace frslab
