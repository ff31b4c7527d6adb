// Copyright 2026 The povmforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Symbolic entry tags for transcribed matrices.
//
// A tag is a signed monomial quotient over the POVM parameters:
//
//   tag  := ['-'] term [ '/' ['-'] term ]
//   term := { digits | symbol | 'r' digit }
//
// symbol letters:  a=alpha b=beta g=gamma d=delta q u v w p s y z t
// 'rN' is sqrt(N), so "r2/r3" is sqrt(2/3) and "1/r2" is 1/sqrt(2).
// Adjacent factors multiply: "bt/2gds" = beta*t / (2*gamma*delta*s).
// A denominator sign is kept where it was written: "2q/-a" = 2q / (-alpha).

#ifndef POVMFORGE_TAG_EXPR_HPP
#define POVMFORGE_TAG_EXPR_HPP

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "povmforge/errors.hpp"
#include "povmforge/povm.hpp"

namespace povmforge {

namespace detail {

inline double tag_symbol(char c, const PovmParams& p) {
  switch (c) {
    case 'a': return p.alpha;
    case 'b': return p.beta;
    case 'g': return p.gamma;
    case 'd': return p.delta;
    case 'q': return p.q;
    case 'u': return p.u;
    case 'v': return p.v;
    case 'w': return p.w;
    case 'p': return p.p;
    case 's': return p.s;
    case 'y': return p.y;
    case 'z': return p.z;
    case 't': return p.t;
    default: throw Error(std::string("tag: unknown symbol '") + c + "'");
  }
}

// Parses an optionally signed product term starting at pos.
inline double tag_term(std::string_view tag, std::size_t& pos, const PovmParams& p) {
  double value = 1.0;
  if (pos < tag.size() && tag[pos] == '-') {
    value = -1.0;
    ++pos;
  }
  const std::size_t start = pos;
  while (pos < tag.size() && tag[pos] != '/') {
    const char c = tag[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      double n = 0.0;
      while (pos < tag.size() && std::isdigit(static_cast<unsigned char>(tag[pos])))
        n = 10.0 * n + (tag[pos++] - '0');
      value *= n;
    } else if (c == 'r') {
      if (pos + 1 >= tag.size() || !std::isdigit(static_cast<unsigned char>(tag[pos + 1])))
        throw Error("tag: 'r' must be followed by a digit in '" + std::string(tag) + "'");
      value *= std::sqrt(static_cast<double>(tag[pos + 1] - '0'));
      pos += 2;
    } else {
      value *= tag_symbol(c, p);
      ++pos;
    }
  }
  if (pos == start) throw Error("tag: empty term in '" + std::string(tag) + "'");
  return value;
}

}  // namespace detail

inline double evaluate_tag(std::string_view tag, const PovmParams& params) {
  std::size_t pos = 0;
  const double num = detail::tag_term(tag, pos, params);
  if (pos == tag.size()) return num;
  ++pos;  // '/'
  const double den = detail::tag_term(tag, pos, params);
  if (pos != tag.size()) throw Error("tag: trailing input in '" + std::string(tag) + "'");
  return num / den;
}

}  // namespace povmforge

#endif  // POVMFORGE_TAG_EXPR_HPP
