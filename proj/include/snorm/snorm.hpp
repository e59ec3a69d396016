// Copyright 2026 The snorm Authors
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

#include "snorm/csp.hpp"
#include "snorm/errors.hpp"
#include "snorm/gluing.hpp"
#include "snorm/io.hpp"
#include "snorm/local_flow.hpp"
#include "snorm/normal_coords.hpp"
#include "snorm/perm.hpp"
#include "snorm/reduction.hpp"
#include "snorm/solver.hpp"
#include "snorm/triangulation.hpp"
