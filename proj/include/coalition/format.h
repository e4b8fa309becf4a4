// Copyright 2026 The Coalition Sharing Authors
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


#ifndef COALITION_FORMAT_H_
#define COALITION_FORMAT_H_

#include <cstdint>
#include <optional>
#include <string>

#include <boost/rational.hpp>

namespace coalition {

using Rational = boost::rational<std::int64_t>;

// 12 significant digits ("%.12g").
std::string format_number(double x);

// Closest fraction with denominator <= 10^6, when it is within 1e-12 of x.
std::optional<Rational> to_rational(double x);

// "11/6", or "2" for integers.
std::string to_string(const Rational& r);

}  // namespace coalition

#endif  // COALITION_FORMAT_H_
