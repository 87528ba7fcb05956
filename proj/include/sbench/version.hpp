// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

namespace sbench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sbench
