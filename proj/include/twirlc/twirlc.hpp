// Copyright 2026 The twirlc Authors
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

#include "twirlc/channels.hpp"
#include "twirlc/channels_io.hpp"
#include "twirlc/circuit.hpp"
#include "twirlc/circuit_io.hpp"
#include "twirlc/distribution.hpp"
#include "twirlc/harness.hpp"
#include "twirlc/metrics.hpp"
#include "twirlc/noise.hpp"
#include "twirlc/parity.hpp"
#include "twirlc/pauli.hpp"
#include "twirlc/rc.hpp"
