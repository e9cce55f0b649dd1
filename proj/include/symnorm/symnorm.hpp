//
// Copyright 2026 The symnorm Authors
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
//

#ifndef SYMNORM_SYMNORM_HPP_
#define SYMNORM_SYMNORM_HPP_

#include "symnorm/ams_sketch.hpp"
#include "symnorm/audit.hpp"
#include "symnorm/config.hpp"
#include "symnorm/count_sketch.hpp"
#include "symnorm/errors.hpp"
#include "symnorm/hashing.hpp"
#include "symnorm/level_vector.hpp"
#include "symnorm/levels.hpp"
#include "symnorm/median.hpp"
#include "symnorm/norms.hpp"
#include "symnorm/oracle.hpp"
#include "symnorm/params.hpp"
#include "symnorm/pipeline.hpp"
#include "symnorm/privacy.hpp"
#include "symnorm/query.hpp"
#include "symnorm/random.hpp"
#include "symnorm/release_set.hpp"
#include "symnorm/stream_io.hpp"

#endif  // SYMNORM_SYMNORM_HPP_
