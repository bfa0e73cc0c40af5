// Copyright 2026 The qbus Authors
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

#include <functional>
#include <string>
#include <vector>

namespace qbus {

struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double deviation = 0.0;  ///< measured worst-case deviation
  double tolerance = 0.0;
  std::string notes;
};

/// Closed-form fidelity under test: (length, p, eta) -> F.
using ClosedFormFn = std::function<double(int, double, double)>;

CheckResult check_reference_point();
/// Exact simulation against `closed_form` on the DEP grid. The default uses
/// the qubit-count exponent convention.
CheckResult check_oracle_equivalence(const ClosedFormFn& closed_form = {});
CheckResult check_cpe_equals_dep();
CheckResult check_twirl_identity();
CheckResult check_gaussian_discrete();
CheckResult check_leakage();
CheckResult check_purification();
CheckResult check_gate_teleportation();
CheckResult check_swap_chain_bound();
CheckResult check_layer_contract();
CheckResult check_time_model();

/// All checks in order 1..11.
std::vector<CheckResult> run_all_checks();

/// One line: "[PASS] 3 title  deviation=... tol=...  notes".
std::string format_check(const CheckResult& r);

}  // namespace qbus
