// Copyright 2026 The lexsg Authors
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

#include "lexsg/casegen.hpp"
#include "lexsg/format.hpp"
#include "lexsg/game.hpp"
#include "lexsg/lex.hpp"
#include "lexsg/objective.hpp"
#include "lexsg/oracle.hpp"
#include "lexsg/qualitative.hpp"
#include "lexsg/rational.hpp"
#include "lexsg/single.hpp"
#include "lexsg/strategy.hpp"
