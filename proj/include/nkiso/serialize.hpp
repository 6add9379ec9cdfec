#pragma once

// Text formats for group elements and generator compositions.
//
// Element record, one line, whitespace separated, reals written with %.17g:
//   s3s3 <a.w a.x a.y a.z b.w ... c.z> <kappa> <tau tag 0|1|2>     (12 reals)
//   cp3  <A row-major, re im interleaved> <k>                      (32 reals)
//   flag <A row-major, re im interleaved> <s1> <s2> <s3> <k>       (18 reals)
//
// Composition file: one generator per line, '#' starts a comment. The file
// denotes line_1 o line_2 o ... o line_n, so the last line acts first.
//   any space:  an element record (first token is the space name)
//   s3s3:       translation a=w,x,y,z b=w,x,y,z c=w,x,y,z
//               psi kappa=K tau=T
//   cp3:        sp2 m=<32 reals>          conj
//   flag:       su3 m=<18 reals>          phi index=I
//               perm sigma=s1,s2,s3       conj
// Parse errors carry "line L, column C".

#include <string>
#include <variant>

#include "nkiso/cp3.hpp"
#include "nkiso/flag.hpp"
#include "nkiso/s3s3.hpp"

namespace nkiso {

enum class Space { S3S3, CP3, Flag };

const char* to_string(Space space);
/// Throws InvalidArgument for unknown names.
Space parse_space(const std::string& name);

using AnyIsometry = std::variant<s3s3::Isometry, cp3::Isometry, flag::Isometry>;

std::string format_element(const s3s3::Isometry& f);
std::string format_element(const cp3::Isometry& f);
std::string format_element(const flag::Isometry& f);
std::string format_element(const AnyIsometry& f);

/// Composition of the file's generators. Malformed lines, and matrices outside
/// their group by more than 1e-10, raise Parse with line and column.
AnyIsometry parse_composition(Space space, const std::string& text);

}  // namespace nkiso
