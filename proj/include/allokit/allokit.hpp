// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ALLOKIT_ALLOKIT_HPP
#define ALLOKIT_ALLOKIT_HPP

#include "allokit/allophone.hpp"
#include "allokit/allovera.hpp"
#include "allokit/decode.hpp"
#include "allokit/error.hpp"
#include "allokit/frames.hpp"
#include "allokit/ipa.hpp"
#include "allokit/search.hpp"
#include "allokit/sim.hpp"

#endif  // ALLOKIT_ALLOKIT_HPP
