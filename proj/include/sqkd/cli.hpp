// Copyright 2026 The sqkd-sim Authors
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

#pragma once

#include <iosfwd>
#include <string>

#include "sqkd/adversary.hpp"

namespace sqkd::cli {

/// Entry point shared by the binary and the tests; the streams stand in
/// for stdout and stderr. Returns the process status: 0 on success, 2 on
/// a configuration error, 3 on an internal failure.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

/// Attack descriptions: "none", "measure-resend[:fraction=F,salt=S]",
/// "intercept-fake[:c=R,d=R,fraction=F,salt=S]" (amplitudes default to
/// 1/sqrt(2) each). Throws ArgumentError or ValidationError.
adversary::AttackSpec parse_attack(const std::string& text);

}  // namespace sqkd::cli
