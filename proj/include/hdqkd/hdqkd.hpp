// Copyright 2026 The hdqkd Authors
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

#ifndef HDQKD_HDQKD_HPP_
#define HDQKD_HDQKD_HPP_

#include "hdqkd/atmosphere.hpp"
#include "hdqkd/bb84.hpp"
#include "hdqkd/beam_transmit.hpp"
#include "hdqkd/depolarizing.hpp"
#include "hdqkd/entropy.hpp"
#include "hdqkd/errors.hpp"
#include "hdqkd/ext_b92.hpp"
#include "hdqkd/protocol.hpp"
#include "hdqkd/quadrature.hpp"
#include "hdqkd/rng.hpp"

#endif  // HDQKD_HDQKD_HPP_
