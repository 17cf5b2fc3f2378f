// SPDX-License-Identifier: Apache-2.0
//
// fbmclab - MIMO-FBMC/OQAM link-level simulation library
// Copyright (C) 2026 The fbmclab authors
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


#ifndef fbmc_fbmc_H
#define fbmc_fbmc_H

#include "fbmc/analysis.hpp"
#include "fbmc/channel.hpp"
#include "fbmc/compensation.hpp"
#include "fbmc/config.hpp"
#include "fbmc/conv_code.hpp"
#include "fbmc/core_model.hpp"
#include "fbmc/filter_bank.hpp"
#include "fbmc/io.hpp"
#include "fbmc/montecarlo.hpp"
#include "fbmc/prototype_filter.hpp"
#include "fbmc/transceiver.hpp"

#endif
