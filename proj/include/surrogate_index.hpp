// Copyright 2026 The Surrogate Index Authors. All Rights Reserved.
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


// Umbrella header.

#pragma once

#include "surrogate_index/error.hpp"
#include "surrogate_index/core_model.hpp"
#include "surrogate_index/random.hpp"
#include "surrogate_index/dgp.hpp"
#include "surrogate_index/estimators.hpp"
#include "surrogate_index/theory.hpp"
#include "surrogate_index/inference.hpp"
#include "surrogate_index/config_io.hpp"
#include "surrogate_index/csv_io.hpp"
#include "surrogate_index/harness.hpp"
