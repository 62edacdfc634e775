// Copyright 2026 The ARC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace arc {

// Scores are exact rationals so golden outputs do not depend on summation
// order.
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

// Round half away from zero to `places` decimals, e.g. 2/3 -> "0.6667".
std::string format_decimal(const Rational& r, int places = 4);

}  // namespace arc
