// Copyright 2026 The qarb Authors
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

#include <doctest.h>

#include "core/errors.hpp"

#define CHECK_CODE(expr, expected)                      \
  do {                                                  \
    bool thrown_ = false;                               \
    try {                                               \
      (void)(expr);                                     \
    } catch (const ::qarb::Error& e_) {                 \
      thrown_ = true;                                   \
      CHECK(e_.code() == (expected));                   \
    }                                                   \
    CHECK_MESSAGE(thrown_, "expected a qarb::Error");   \
  } while (false)
