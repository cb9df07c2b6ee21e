// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace grushin {

inline constexpr const char* version_string = "grushin 0.1.0";

}  // namespace grushin
