// Copyright 2026 The permball Authors
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

#include "permball/asym.hpp"
#include "permball/bounds.hpp"
#include "permball/cache.hpp"
#include "permball/core.hpp"
#include "permball/errors.hpp"
#include "permball/io.hpp"
#include "permball/oracle.hpp"
#include "permball/qmat.hpp"
#include "permball/rates.hpp"
#include "permball/scalar.hpp"
#include "permball/sweep.hpp"
#include "permball/verify.hpp"
#include "permball/version.hpp"
