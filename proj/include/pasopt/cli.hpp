// SPDX-License-Identifier: Apache-2.0
//
// pasopt - placement optimization for multi-waveguide pinching antenna systems
// Copyright (C) 2026 The pasopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

namespace pasopt {

// Entry point of the `pasopt` tool. Exit codes: 0 success, 1 configuration
// or usage error, 2 failed selftest or gradcheck.
int cli_main(int argc, char** argv);

}  // namespace pasopt
