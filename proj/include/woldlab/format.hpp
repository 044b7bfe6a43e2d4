#pragma once

#include <istream>
#include <string>

#include "woldlab/isometry.hpp"

namespace woldlab {

// Operator description files:
//
//   woldlab-operator 1
//   name V
//   lane 0 finite 1 f
//   lane 1 naturals e
//   column 0:0  0:0 1 0
//   tail 1 0 1 1 0
//
// `column K  I re im  I re im ...` lists V e_K; `tail SRC THRESH TGT OFFSET
// PHASE` sets the tail rule of lane SRC, PHASE in turns. Offsets between
// quadrant lanes are written `di,dj`. Blank lines and `#` comments are
// ignored.

/// Throws ParseError with line and field on syntax errors and MalformedInput
/// when the parsed operator is not an isometry.
StructuredIsometry parse_operator(std::istream& in);
StructuredIsometry parse_operator_file(const std::string& path);
std::string export_operator(const StructuredIsometry& v);

/// "lane:position=re[+imi]" entries separated by commas, e.g. "0:0=1,1:2=0.5-0.5i".
HVector parse_vector(const std::string& text);
BasisIndex parse_index(const std::string& text);

}  // namespace woldlab
