// Copyright 2026 The proxmf Authors
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
#ifndef PROXMF_PROXMF_HPP
#define PROXMF_PROXMF_HPP

#include "proxmf/energy.hpp"
#include "proxmf/field.hpp"
#include "proxmf/harness.hpp"
#include "proxmf/json_io.hpp"
#include "proxmf/lipschitz.hpp"
#include "proxmf/oracle.hpp"
#include "proxmf/pairwise_view.hpp"
#include "proxmf/schedules.hpp"
#include "proxmf/state.hpp"
#include "proxmf/synthetic.hpp"
#include "proxmf/uai.hpp"

#endif  // PROXMF_PROXMF_HPP
