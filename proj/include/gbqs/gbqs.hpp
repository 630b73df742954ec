/**
 * Copyright 2026 The gbqs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "gbqs/constructions.hpp"
#include "gbqs/error.hpp"
#include "gbqs/field.hpp"
#include "gbqs/formula.hpp"
#include "gbqs/hotstuff/basic_replica.hpp"
#include "gbqs/hotstuff/chained_replica.hpp"
#include "gbqs/hotstuff/trace.hpp"
#include "gbqs/hotstuff/types.hpp"
#include "gbqs/matrix.hpp"
#include "gbqs/microbench.hpp"
#include "gbqs/msp.hpp"
#include "gbqs/party.hpp"
#include "gbqs/quorum_checker.hpp"
#include "gbqs/quorum_config.hpp"
#include "gbqs/quorum_system.hpp"
#include "gbqs/sim/checkers.hpp"
#include "gbqs/sim/experiment.hpp"
#include "gbqs/sim/faults.hpp"
#include "gbqs/sim/simulator.hpp"
